// Python bindings for the core operations: parsing/validation, hashing,
// similarity, factoring, patching, and composition enumeration.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "awf/equivalence.hpp"
#include "awf/errors.hpp"
#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"
#include "awf/substitution.hpp"
#include "awf/util.hpp"

namespace py = pybind11;
using namespace awf;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it) {
                out[py::str(it.key())] = json_to_py(it.value());
            }
            return out;
        }
        default: return py::none();
    }
}

WorkflowDescription load(const std::string& text, const std::string& base_dir) {
    WorkflowDescription wf = parse_workflow(text);
    if (!base_dir.empty()) wf.base_dir = base_dir;
    return resolve_parameters(wf, {});
}

WlConfig wl_config(const std::string& mode, int iterations) {
    return WlConfig{iterations, mode == "name" ? WlConfig::LabelMode::Name
                                               : WlConfig::LabelMode::Command};
}

} // namespace

PYBIND11_MODULE(_awf, m) {
    m.doc() = "approximation-aware workflow engine core";

    py::register_exception<ParseError>(m, "WorkflowParseError");
    py::register_exception<ValidationError>(m, "WorkflowValidationError");

    m.def(
        "validate_workflow",
        [](const std::string& text) {
            parse_workflow(text);
            return true;
        },
        py::arg("document"),
        "Parses and validates a workflow document; raises on any violation.");

    m.def(
        "dependency_graph",
        [](const std::string& text) {
            const WorkflowDescription wf = parse_workflow(text);
            py::list out;
            for (const auto& e : dependency_graph(wf)) {
                out.append(py::make_tuple(e.producer, e.output, e.consumer, e.input));
            }
            return out;
        },
        py::arg("document"),
        "Edges as (producer, output, consumer, input) tuples.");

    m.def(
        "interface_hashes",
        [](const std::string& text, const std::string& base_dir) {
            const WorkflowDescription wf = load(text, base_dir);
            py::dict out;
            for (const auto& [name, hash] : interface_hash_all(wf)) {
                out[py::str(name)] = hash.hex;
            }
            return out;
        },
        py::arg("document"), py::arg("base_dir") = "",
        "Interface hash per node. Relative literal paths resolve from base_dir.");

    m.def(
        "interface_hash",
        [](const std::string& text, const std::string& node, const std::string& base_dir) {
            return interface_hash(load(text, base_dir), node).hex;
        },
        py::arg("document"), py::arg("node"), py::arg("base_dir") = "");

    m.def(
        "wl_hash",
        [](const std::string& text, const std::string& mode, int iterations,
           const std::vector<std::string>& nodes) {
            const WorkflowDescription wf = load(text, "");
            const SubgraphView view =
                nodes.empty() ? whole_workflow(wf) : make_subgraph(wf, nodes);
            return wl_hash(view, wl_config(mode, iterations));
        },
        py::arg("document"), py::arg("mode") = "command", py::arg("iterations") = 3,
        py::arg("nodes") = std::vector<std::string>{});

    m.def(
        "similarity",
        [](const std::string& a, const std::string& b, const std::string& metric,
           const std::string& mode) {
            const WorkflowDescription wa = load(a, "");
            const WorkflowDescription wb = load(b, "");
            const SubgraphView va = whole_workflow(wa);
            const SubgraphView vb = whole_workflow(wb);
            if (metric == "domain") {
                return domain_similarity(domain_descriptors(va), domain_descriptors(vb)).value;
            }
            if (metric == "codomain") {
                return codomain_similarity(codomain_descriptors(va),
                                           codomain_descriptors(vb))
                    .value;
            }
            if (metric == "function") {
                return function_similarity(va, vb, wl_config(mode, 3)).value;
            }
            throw Error("unknown metric '" + metric + "'");
        },
        py::arg("a"), py::arg("b"), py::arg("metric") = "function",
        py::arg("mode") = "command");

    m.def(
        "factor",
        [](const std::string& text) {
            const WorkflowDescription wf = load(text, "");
            const QuotientGraph quotient = factor(wf);
            Json out;
            out["blocks"] = Json::array();
            for (const auto& block : quotient.blocks) {
                out["blocks"].push_back(
                    Json{{"id", block.id},
                         {"members", block.members},
                         {"boundary_inputs",
                          std::vector<std::string>(block.boundary_inputs.begin(),
                                                   block.boundary_inputs.end())},
                         {"boundary_outputs",
                          std::vector<std::string>(block.boundary_outputs.begin(),
                                                   block.boundary_outputs.end())}});
            }
            out["edges"] = Json::array();
            for (const auto& [from, to] : quotient.edges) {
                out["edges"].push_back(Json{{"from", from}, {"to", to}});
            }
            return json_to_py(out);
        },
        py::arg("document"), "Quotient partition and block-level edges.");

    m.def(
        "extract_block",
        [](const std::string& text, const std::vector<std::string>& members) {
            const WorkflowDescription wf = load(text, "");
            for (const auto& block : factor(wf).blocks) {
                if (block.members == members) {
                    return workflow_to_json(extract_block_workflow(wf, block)).dump();
                }
            }
            throw Error("no factored block has exactly those members");
        },
        py::arg("document"), py::arg("members"),
        "Standalone workflow document for one factored block.");

    m.def(
        "enumerate_compositions",
        [](const std::vector<std::string>& documents, double threshold,
           const std::string& base_dir) {
            std::vector<LibraryWorkflow> library;
            for (std::size_t i = 0; i < documents.size(); ++i) {
                LibraryWorkflow lib;
                lib.wf = load(documents[i], base_dir);
                lib.quotient = factor(lib.wf);
                lib.source = "library[" + std::to_string(i) + "]";
                library.push_back(std::move(lib));
            }
            const auto tmp = std::filesystem::temp_directory_path() /
                             ("awf-py-compose-" + random_hex(6));
            KnowledgeBase::init(tmp);
            py::list out;
            {
                KnowledgeBase kb(tmp, true);
                for (const auto& lib : library) register_workflow(kb, lib.wf, lib.source);
                kb.compute_edges();
                for (const auto& c : enumerate_compositions(library, kb, threshold)) {
                    py::dict item;
                    item["kind"] = c.kind;
                    item["template"] = c.template_source;
                    item["wl_digest"] = c.wl_digest;
                    item["document"] = workflow_to_json(c.wf).dump();
                    out.append(item);
                }
            }
            std::filesystem::remove_all(tmp);
            return out;
        },
        py::arg("documents"), py::arg("threshold") = 0.8, py::arg("base_dir") = "",
        "New candidate workflows composable from a library of documents.");

#ifdef AWF_VERSION
    m.attr("__version__") = AWF_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
