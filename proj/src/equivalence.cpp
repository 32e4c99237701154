#include "awf/equivalence.hpp"

#include <algorithm>
#include <functional>

#include "awf/errors.hpp"

namespace awf {

bool SubgraphView::contains(const std::string& name) const {
    return std::binary_search(nodes.begin(), nodes.end(), name);
}

SubgraphView make_subgraph(const WorkflowDescription& wf, std::vector<std::string> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (const auto& name : nodes) {
        if (!wf.find_node(name)) {
            throw ValidationError("sub-graph member '" + name + "' is not in the workflow");
        }
    }
    return SubgraphView{&wf, std::move(nodes)};
}

SubgraphView whole_workflow(const WorkflowDescription& wf) {
    std::vector<std::string> names;
    names.reserve(wf.nodes.size());
    for (const auto& node : wf.nodes) names.push_back(node.name);
    return make_subgraph(wf, std::move(names));
}

// ---------------------------------------------------------------------------
// Interface hashing
// ---------------------------------------------------------------------------

namespace {

std::string literal_digest(const WorkflowDescription& wf, const std::string& path,
                           const LiteralDigests& provided) {
    auto it = provided.find(path);
    if (it != provided.end()) return it->second;
    std::filesystem::path p(path);
    if (p.is_relative() && !wf.base_dir.empty()) p = wf.base_dir / p;
    try {
        return sha256_file(p);
    } catch (const Error&) {
        throw Error("unreadable literal input '" + path + "'");
    }
}

// Distinct direct producers of a node, via bindings and argument tokens.
std::vector<std::string> producer_names(const WorkflowDescription& wf,
                                        const std::string& node) {
    std::set<std::string> producers;
    for (const auto& edge : dependency_graph(wf)) {
        if (edge.consumer == node) producers.insert(edge.producer);
    }
    return {producers.begin(), producers.end()};
}

std::string hash_node_recursive(const WorkflowDescription& wf, const std::string& name,
                                const LiteralDigests& literals,
                                std::map<std::string, std::string>& memo) {
    auto it = memo.find(name);
    if (it != memo.end()) return it->second;

    const ComponentNode* node = wf.find_node(name);
    if (!node) throw ValidationError("unknown node '" + name + "'");

    std::vector<std::string> literal_digests;
    for (const auto& binding : node->inputs) {
        if (const auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
            literal_digests.push_back(literal_digest(wf, lit->path, literals));
        }
    }
    std::sort(literal_digests.begin(), literal_digests.end());

    std::vector<std::string> producer_hashes;
    for (const auto& producer : producer_names(wf, name)) {
        producer_hashes.push_back(hash_node_recursive(wf, producer, literals, memo));
    }
    std::sort(producer_hashes.begin(), producer_hashes.end());

    Json payload;
    payload["abstract"] = abstract_view(wf, name).doc;
    payload["literals"] = literal_digests;
    payload["producers"] = producer_hashes;
    const std::string digest = sha256_hex(payload.dump());
    memo[name] = digest;
    return digest;
}

} // namespace

InterfaceHash interface_hash(const WorkflowDescription& wf, std::string_view node,
                             const LiteralDigests& literal_digests) {
    std::map<std::string, std::string> memo;
    return InterfaceHash{
        hash_node_recursive(wf, std::string(node), literal_digests, memo)};
}

std::map<std::string, InterfaceHash> interface_hash_all(
    const WorkflowDescription& wf, const LiteralDigests& literal_digests) {
    std::map<std::string, std::string> memo;
    std::map<std::string, InterfaceHash> out;
    for (const auto& node : wf.nodes) {
        out[node.name] =
            InterfaceHash{hash_node_recursive(wf, node.name, literal_digests, memo)};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boundary descriptors
// ---------------------------------------------------------------------------

namespace {

// Descriptor of the file a dependency edge transports: the producer output's
// canonical basename.
std::string edge_descriptor(const WorkflowDescription& wf, const DependencyEdge& edge) {
    if (const ComponentNode* producer = wf.find_node(edge.producer)) {
        if (const OutputDecl* out = producer->find_output(edge.output)) {
            return canonical_descriptor(out->path);
        }
    }
    return canonical_descriptor(edge.output);
}

} // namespace

DescriptorSet domain_descriptors(const SubgraphView& view) {
    DescriptorSet out;
    for (const auto& name : view.nodes) {
        const ComponentNode* node = view.wf->find_node(name);
        for (const auto& binding : node->inputs) {
            std::visit(
                [&](const auto& src) {
                    using T = std::decay_t<decltype(src)>;
                    if constexpr (std::is_same_v<T, LiteralFileSource>) {
                        out.insert(canonical_descriptor(src.path));
                    } else if constexpr (std::is_same_v<T, ParameterSource>) {
                        out.insert(canonical_descriptor(binding.name));
                    } else {
                        if (!view.contains(src.node)) {
                            DependencyEdge e{src.node, src.output, name, binding.name};
                            out.insert(edge_descriptor(*view.wf, e));
                        }
                    }
                },
                binding.source);
        }
    }
    for (const auto& edge : dependency_graph(*view.wf)) {
        if (view.contains(edge.consumer) && !view.contains(edge.producer) &&
            edge.input.rfind("arg:", 0) == 0) {
            out.insert(edge_descriptor(*view.wf, edge));
        }
    }
    return out;
}

DescriptorSet codomain_descriptors(const SubgraphView& view) {
    DescriptorSet out;
    // outputs consumed outside the sub-graph
    std::set<std::pair<std::string, std::string>> consumed_inside;
    for (const auto& edge : dependency_graph(*view.wf)) {
        if (!view.contains(edge.producer)) continue;
        if (view.contains(edge.consumer)) {
            consumed_inside.insert({edge.producer, edge.output});
        } else {
            out.insert(edge_descriptor(*view.wf, edge));
        }
    }
    // outputs nothing consumes are produced for the outside world
    std::set<std::pair<std::string, std::string>> consumed_anywhere;
    for (const auto& edge : dependency_graph(*view.wf)) {
        consumed_anywhere.insert({edge.producer, edge.output});
    }
    for (const auto& name : view.nodes) {
        const ComponentNode* node = view.wf->find_node(name);
        for (const auto& decl : node->outputs) {
            if (!consumed_anywhere.count({name, decl.name})) {
                out.insert(canonical_descriptor(decl.path));
            }
        }
    }
    return out;
}

DescriptorSet codomain_from_consumers(const SubgraphView& view) {
    DescriptorSet out;
    for (const auto& edge : dependency_graph(*view.wf)) {
        if (view.contains(edge.producer) && !view.contains(edge.consumer)) {
            out.insert(edge_descriptor(*view.wf, edge));
        }
    }
    return out;
}

double jaccard(const DescriptorSet& a, const DescriptorSet& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const auto& x : a) {
        if (b.count(x)) ++intersection;
    }
    const std::size_t unity = a.size() + b.size() - intersection;
    return double(intersection) / double(unity);
}

SimilarityScore domain_similarity(const DescriptorSet& a, const DescriptorSet& b) {
    return SimilarityScore{jaccard(a, b), "domain"};
}

SimilarityScore codomain_similarity(const DescriptorSet& a, const DescriptorSet& b) {
    return SimilarityScore{jaccard(a, b), "codomain"};
}

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman
// ---------------------------------------------------------------------------

namespace {

struct WlGraph {
    std::vector<std::string> labels;                           // per node
    std::vector<std::vector<std::pair<std::string, int>>> in;  // (edge label, src)
    std::vector<std::vector<std::pair<std::string, int>>> out; // (edge label, dst)
};

WlGraph build_wl_graph(const SubgraphView& view, const WlConfig& config) {
    WlGraph g;
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
        index[view.nodes[i]] = int(i);
        const ComponentNode* node = view.wf->find_node(view.nodes[i]);
        const std::string raw =
            config.label_mode == WlConfig::LabelMode::Name
                ? "name:" + node->name
                : "command:" + canonical_command(*view.wf, *node);
        g.labels.push_back(sha256_hex(raw));
    }
    g.in.resize(view.nodes.size());
    g.out.resize(view.nodes.size());
    for (const auto& edge : dependency_graph(*view.wf)) {
        if (!view.contains(edge.producer) || !view.contains(edge.consumer)) continue;
        const std::string label = edge_descriptor(*view.wf, edge);
        const int u = index[edge.producer];
        const int v = index[edge.consumer];
        g.out[u].push_back({label, v});
        g.in[v].push_back({label, u});
    }
    return g;
}

void wl_iterate(WlGraph& g) {
    std::vector<std::string> next(g.labels.size());
    for (std::size_t v = 0; v < g.labels.size(); ++v) {
        std::vector<std::string> in_parts, out_parts;
        for (const auto& [label, u] : g.in[v]) in_parts.push_back(label + ":" + g.labels[u]);
        for (const auto& [label, u] : g.out[v]) out_parts.push_back(label + ":" + g.labels[u]);
        std::sort(in_parts.begin(), in_parts.end());
        std::sort(out_parts.begin(), out_parts.end());
        std::string combined = g.labels[v];
        combined += "|in";
        for (const auto& p : in_parts) combined += "|" + p;
        combined += "|out";
        for (const auto& p : out_parts) combined += "|" + p;
        next[v] = sha256_hex(combined);
    }
    g.labels = std::move(next);
}

} // namespace

std::vector<std::string> wl_label_multiset(const SubgraphView& view, const WlConfig& config) {
    WlGraph g = build_wl_graph(view, config);
    std::vector<std::string> all(g.labels.begin(), g.labels.end());
    for (int i = 0; i < config.iterations; ++i) {
        wl_iterate(g);
        all.insert(all.end(), g.labels.begin(), g.labels.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::string wl_hash(const SubgraphView& view, const WlConfig& config) {
    if (view.nodes.empty()) {
        throw ValidationError("wl_hash of an empty sub-graph");
    }
    WlGraph g = build_wl_graph(view, config);
    for (int i = 0; i < config.iterations; ++i) wl_iterate(g);
    std::vector<std::string> final_labels = g.labels;
    std::sort(final_labels.begin(), final_labels.end());
    Sha256 h;
    for (const auto& label : final_labels) {
        h.update(label);
        h.update("\n");
    }
    return h.hex_digest();
}

SimilarityScore function_similarity(const SubgraphView& a, const SubgraphView& b,
                                    const WlConfig& config) {
    const auto la = wl_label_multiset(a, config);
    const auto lb = wl_label_multiset(b, config);
    if (la.empty() && lb.empty()) return SimilarityScore{1.0, "function"};

    std::map<std::string, std::size_t> ca, cb;
    for (const auto& l : la) ca[l]++;
    for (const auto& l : lb) cb[l]++;
    std::size_t intersection = 0, unity = 0;
    for (const auto& [label, n] : ca) {
        auto it = cb.find(label);
        const std::size_t m = it == cb.end() ? 0 : it->second;
        intersection += std::min(n, m);
        unity += std::max(n, m);
    }
    for (const auto& [label, m] : cb) {
        if (!ca.count(label)) unity += m;
    }
    return SimilarityScore{unity == 0 ? 1.0 : double(intersection) / double(unity),
                           "function"};
}

} // namespace awf
