#include "awf/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "awf/errors.hpp"

namespace awf {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
              c == '.')) {
            return false;
        }
    }
    return true;
}

std::string basename_of(std::string_view path) {
    const auto pos = path.find_last_of('/');
    return std::string(pos == std::string_view::npos ? path : path.substr(pos + 1));
}

// Applies fn to every mutable string field of the node, plus a locus label
// used in error messages.
void for_each_node_string(ComponentNode& node,
                          const std::function<void(std::string&, const std::string&)>& fn) {
    const std::string where = "node " + node.name;
    fn(node.command.executable, where);
    for (auto& arg : node.command.arguments) fn(arg, where);
    for (auto& [k, v] : node.command.environment) fn(v, where);
    for (auto& binding : node.inputs) {
        if (auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
            fn(lit->path, where);
        }
    }
    for (auto& out : node.outputs) fn(out.path, where);
    for (auto& [k, v] : node.resources) fn(v, where);
    for (auto& [k, v] : node.annotations) fn(v, where);
}

std::map<std::string, std::string> json_to_string_map(const Json& j,
                                                      const std::string& where) {
    std::map<std::string, std::string> out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw ParseError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string()) {
            throw ParseError(where + "." + it.key() + " must be a string");
        }
        out[it.key()] = it.value().get<std::string>();
    }
    return out;
}

} // namespace

const OutputDecl* ComponentNode::find_output(std::string_view name_or_path) const {
    for (const auto& out : outputs) {
        if (out.name == name_or_path) return &out;
    }
    for (const auto& out : outputs) {
        if (out.path == name_or_path) return &out;
    }
    return nullptr;
}

const ComponentNode* WorkflowDescription::find_node(std::string_view name) const {
    for (const auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

ComponentNode* WorkflowDescription::find_node(std::string_view name) {
    for (auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

std::optional<RefToken> parse_ref_token(std::string_view text) {
    constexpr std::string_view prefix = "{{ref:";
    constexpr std::string_view suffix = "}}";
    if (text.size() <= prefix.size() + suffix.size()) return std::nullopt;
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    if (text.substr(text.size() - suffix.size()) != suffix) return std::nullopt;
    const auto body = text.substr(prefix.size(), text.size() - prefix.size() - suffix.size());
    const auto slash = body.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 >= body.size()) {
        return std::nullopt;
    }
    return RefToken{std::string(body.substr(0, slash)), std::string(body.substr(slash + 1))};
}

std::optional<std::string> parse_param_token(std::string_view text) {
    constexpr std::string_view prefix = "{{param:";
    constexpr std::string_view suffix = "}}";
    if (text.size() <= prefix.size() + suffix.size()) return std::nullopt;
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    if (text.substr(text.size() - suffix.size()) != suffix) return std::nullopt;
    const auto body = text.substr(prefix.size(), text.size() - prefix.size() - suffix.size());
    if (body.empty() || body.find('}') != std::string_view::npos) return std::nullopt;
    return std::string(body);
}

// Finds every embedded {{ref:..}} occurrence inside an argument string.
static std::vector<RefToken> embedded_ref_tokens(std::string_view text) {
    std::vector<RefToken> out;
    std::size_t pos = 0;
    while ((pos = text.find("{{ref:", pos)) != std::string_view::npos) {
        const auto end = text.find("}}", pos);
        if (end == std::string_view::npos) break;
        if (auto tok = parse_ref_token(text.substr(pos, end + 2 - pos))) {
            out.push_back(*tok);
        }
        pos = end + 2;
    }
    return out;
}

// --------------------------------------------------------------------------
// JSON (de)serialization
// --------------------------------------------------------------------------

WorkflowDescription workflow_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("workflow document must be a JSON object");
    WorkflowDescription wf;
    if (!doc.contains("name") || !doc["name"].is_string()) {
        throw ParseError("workflow requires a string 'name'");
    }
    wf.name = doc["name"].get<std::string>();
    if (doc.contains("parameters")) {
        wf.parameters = json_to_string_map(doc["parameters"], "parameters");
    }
    if (doc.contains("metadata")) {
        wf.metadata = json_to_string_map(doc["metadata"], "metadata");
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw ParseError("workflow requires a 'nodes' array");
    }
    for (const auto& jn : doc["nodes"]) {
        if (!jn.is_object()) throw ParseError("node entries must be objects");
        ComponentNode node;
        if (!jn.contains("name") || !jn["name"].is_string()) {
            throw ParseError("node requires a string 'name'");
        }
        node.name = jn["name"].get<std::string>();
        const std::string where = "node " + node.name;
        if (!jn.contains("command") || !jn["command"].is_object()) {
            throw ParseError(where + " requires a 'command' object");
        }
        const auto& jc = jn["command"];
        if (!jc.contains("executable") || !jc["executable"].is_string()) {
            throw ParseError(where + " command requires a string 'executable'");
        }
        node.command.executable = jc["executable"].get<std::string>();
        if (jc.contains("arguments")) {
            if (!jc["arguments"].is_array()) {
                throw ParseError(where + " command.arguments must be an array");
            }
            for (const auto& a : jc["arguments"]) {
                if (!a.is_string()) {
                    throw ParseError(where + " command arguments must be strings");
                }
                node.command.arguments.push_back(a.get<std::string>());
            }
        }
        if (jc.contains("environment")) {
            node.command.environment =
                json_to_string_map(jc["environment"], where + " environment");
        }
        if (jn.contains("inputs")) {
            if (!jn["inputs"].is_array()) throw ParseError(where + " inputs must be an array");
            for (const auto& ji : jn["inputs"]) {
                InputBinding binding;
                if (!ji.contains("name") || !ji["name"].is_string()) {
                    throw ParseError(where + " input requires a string 'name'");
                }
                binding.name = ji["name"].get<std::string>();
                if (!ji.contains("source") || !ji["source"].is_object() ||
                    !ji["source"].contains("kind")) {
                    throw ParseError(where + " input '" + binding.name +
                                     "' requires a source with a kind");
                }
                const auto& js = ji["source"];
                const auto kind = js["kind"].get<std::string>();
                if (kind == "literal-file") {
                    binding.source = LiteralFileSource{js.value("path", std::string())};
                } else if (kind == "parameter") {
                    ParameterSource p;
                    p.key = js.value("key", std::string());
                    if (js.contains("value")) {
                        p.value = js["value"].get<std::string>();
                        p.resolved = true;
                    }
                    binding.source = p;
                } else if (kind == "reference") {
                    binding.source = ReferenceSource{js.value("node", std::string()),
                                                     js.value("output", std::string())};
                } else {
                    throw ParseError(where + " input '" + binding.name +
                                     "' has unknown source kind '" + kind + "'");
                }
                node.inputs.push_back(std::move(binding));
            }
        }
        if (jn.contains("outputs")) {
            if (!jn["outputs"].is_array()) {
                throw ParseError(where + " outputs must be an array");
            }
            for (const auto& jo : jn["outputs"]) {
                if (!jo.contains("name") || !jo["name"].is_string() ||
                    !jo.contains("path") || !jo["path"].is_string()) {
                    throw ParseError(where + " outputs require string 'name' and 'path'");
                }
                node.outputs.push_back(
                    OutputDecl{jo["name"].get<std::string>(), jo["path"].get<std::string>()});
            }
        }
        if (jn.contains("resources")) {
            node.resources = json_to_string_map(jn["resources"], where + " resources");
        }
        if (jn.contains("annotations")) {
            node.annotations = json_to_string_map(jn["annotations"], where + " annotations");
        }
        wf.nodes.push_back(std::move(node));
    }
    return wf;
}

Json workflow_to_json(const WorkflowDescription& wf) {
    Json doc;
    doc["name"] = wf.name;
    doc["parameters"] = Json(wf.parameters);
    doc["metadata"] = Json(wf.metadata);
    doc["nodes"] = Json::array();
    for (const auto& node : wf.nodes) {
        Json jn;
        jn["name"] = node.name;
        jn["command"]["executable"] = node.command.executable;
        jn["command"]["arguments"] = node.command.arguments;
        jn["command"]["environment"] = Json(node.command.environment);
        jn["inputs"] = Json::array();
        for (const auto& binding : node.inputs) {
            Json ji;
            ji["name"] = binding.name;
            std::visit(
                [&](const auto& src) {
                    using T = std::decay_t<decltype(src)>;
                    if constexpr (std::is_same_v<T, LiteralFileSource>) {
                        ji["source"] = Json{{"kind", "literal-file"}, {"path", src.path}};
                    } else if constexpr (std::is_same_v<T, ParameterSource>) {
                        Json s{{"kind", "parameter"}, {"key", src.key}};
                        if (src.resolved) s["value"] = src.value;
                        ji["source"] = s;
                    } else {
                        ji["source"] = Json{
                            {"kind", "reference"}, {"node", src.node}, {"output", src.output}};
                    }
                },
                binding.source);
            jn["inputs"].push_back(ji);
        }
        jn["outputs"] = Json::array();
        for (const auto& out : node.outputs) {
            jn["outputs"].push_back(Json{{"name", out.name}, {"path", out.path}});
        }
        jn["resources"] = Json(node.resources);
        jn["annotations"] = Json(node.annotations);
        doc["nodes"].push_back(jn);
    }
    return doc;
}

std::string serialize_workflow(const WorkflowDescription& wf) {
    return workflow_to_json(wf).dump();
}

WorkflowDescription parse_workflow(std::string_view document_text) {
    Json doc;
    try {
        doc = Json::parse(document_text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
    }
    WorkflowDescription wf = workflow_from_json(doc);
    validate_workflow(wf);
    return wf;
}

WorkflowDescription load_workflow_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open workflow file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    WorkflowDescription wf = parse_workflow(ss.str());
    wf.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return wf;
}

// --------------------------------------------------------------------------
// Validation
// --------------------------------------------------------------------------

namespace {

void check_reference(const WorkflowDescription& wf, const std::string& consumer,
                     const std::string& node, const std::string& output) {
    const ComponentNode* producer = wf.find_node(node);
    if (!producer) {
        throw ValidationError("node " + consumer + " references unknown node '" + node + "'");
    }
    if (!producer->find_output(output)) {
        throw ValidationError("node " + consumer + " references unknown output '" + output +
                              "' of node '" + node + "'");
    }
    if (node == consumer) {
        throw ValidationError("node " + consumer + " references itself",
                              std::vector<std::string>{consumer, consumer});
    }
}

} // namespace

void validate_workflow(const WorkflowDescription& wf) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < wf.nodes.size(); ++i) {
        const auto& node = wf.nodes[i];
        if (!is_identifier(node.name)) {
            throw ValidationError("invalid node name '" + node.name + "'");
        }
        if (!index.emplace(node.name, i).second) {
            throw ValidationError("duplicate node name '" + node.name + "'");
        }
        std::map<std::string, int> out_names, out_paths, in_names;
        for (const auto& out : node.outputs) {
            if (out.path.empty() || out.path.front() == '/' ||
                out.path.rfind("..", 0) == 0) {
                throw ValidationError("node " + node.name + " output '" + out.name +
                                      "' path must be relative: '" + out.path + "'");
            }
            if (++out_names[out.name] > 1) {
                throw ValidationError("node " + node.name + " has duplicate output name '" +
                                      out.name + "'");
            }
            if (++out_paths[out.path] > 1) {
                throw ValidationError("node " + node.name + " has duplicate output path '" +
                                      out.path + "'");
            }
        }
        for (const auto& binding : node.inputs) {
            if (++in_names[binding.name] > 1) {
                throw ValidationError("node " + node.name + " has duplicate input name '" +
                                      binding.name + "'");
            }
        }
    }

    for (const auto& node : wf.nodes) {
        for (const auto& binding : node.inputs) {
            if (const auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                check_reference(wf, node.name, ref->node, ref->output);
            }
        }
        for (const auto& arg : node.command.arguments) {
            for (const auto& tok : embedded_ref_tokens(arg)) {
                check_reference(wf, node.name, tok.node, tok.output);
            }
        }
    }

    // Cycle detection with a witness: iterative DFS over dependency edges.
    std::map<std::string, std::vector<std::string>> successors;
    for (const auto& edge : dependency_graph(wf)) {
        successors[edge.producer].push_back(edge.consumer);
    }
    enum class Mark { None, InProgress, Done };
    std::map<std::string, Mark> marks;
    std::vector<std::string> stack;
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
        marks[name] = Mark::InProgress;
        stack.push_back(name);
        for (const auto& next : successors[name]) {
            const Mark m = marks.count(next) ? marks[next] : Mark::None;
            if (m == Mark::InProgress) {
                auto it = std::find(stack.begin(), stack.end(), next);
                std::vector<std::string> cycle(it, stack.end());
                cycle.push_back(next);
                std::string text = "cycle detected: ";
                for (std::size_t i = 0; i < cycle.size(); ++i) {
                    if (i) text += " -> ";
                    text += cycle[i];
                }
                throw ValidationError(text, cycle);
            }
            if (m == Mark::None) visit(next);
        }
        stack.pop_back();
        marks[name] = Mark::Done;
    };
    for (const auto& node : wf.nodes) {
        if (!marks.count(node.name)) visit(node.name);
    }
}

// --------------------------------------------------------------------------
// Parameter resolution
// --------------------------------------------------------------------------

namespace {

// Replaces every {{param:KEY}} occurrence in s. Throws for undefined keys.
void substitute_params(std::string& s, const std::map<std::string, std::string>& values,
                       const std::string& where) {
    std::size_t pos = 0;
    while ((pos = s.find("{{param:", pos)) != std::string::npos) {
        const auto end = s.find("}}", pos);
        if (end == std::string::npos) break;
        const std::string key = s.substr(pos + 8, end - pos - 8);
        auto it = values.find(key);
        if (it == values.end()) {
            throw ValidationError("undefined parameter '" + key + "' in " + where);
        }
        s.replace(pos, end + 2 - pos, it->second);
        pos += it->second.size();
    }
}

} // namespace

WorkflowDescription resolve_parameters(const WorkflowDescription& wf,
                                       const std::vector<ParameterLayer>& layers) {
    WorkflowDescription out = wf;
    std::map<std::string, std::string> merged = wf.parameters;
    for (const auto& layer : layers) {
        for (const auto& [k, v] : layer.overrides) merged[k] = v;
    }
    out.parameters = merged;
    for (auto& node : out.nodes) {
        for_each_node_string(node, [&](std::string& s, const std::string& where) {
            substitute_params(s, merged, where);
        });
        for (auto& binding : node.inputs) {
            if (auto* param = std::get_if<ParameterSource>(&binding.source)) {
                auto it = merged.find(param->key);
                if (it == merged.end()) {
                    throw ValidationError("undefined parameter '" + param->key +
                                          "' in node " + node.name + " input '" +
                                          binding.name + "'");
                }
                param->value = it->second;
                param->resolved = true;
            }
        }
    }
    for (auto& [k, v] : out.metadata) {
        substitute_params(v, merged, "workflow metadata");
    }
    return out;
}

bool parameters_resolved(const WorkflowDescription& wf) {
    bool resolved = true;
    auto scan = [&](const std::string& s) {
        if (s.find("{{param:") != std::string::npos) resolved = false;
    };
    for (const auto& node : wf.nodes) {
        scan(node.command.executable);
        for (const auto& a : node.command.arguments) scan(a);
        for (const auto& [k, v] : node.command.environment) scan(v);
        for (const auto& binding : node.inputs) {
            if (const auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
                scan(lit->path);
            }
            if (const auto* p = std::get_if<ParameterSource>(&binding.source)) {
                if (!p->resolved) resolved = false;
            }
        }
        for (const auto& out : node.outputs) scan(out.path);
    }
    return resolved;
}

// --------------------------------------------------------------------------
// Dependency graph
// --------------------------------------------------------------------------

std::vector<DependencyEdge> dependency_graph(const WorkflowDescription& wf) {
    std::vector<DependencyEdge> edges;
    for (const auto& node : wf.nodes) {
        for (const auto& binding : node.inputs) {
            if (const auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                const ComponentNode* producer = wf.find_node(ref->node);
                const OutputDecl* out =
                    producer ? producer->find_output(ref->output) : nullptr;
                edges.push_back(DependencyEdge{ref->node, out ? out->name : ref->output,
                                               node.name, binding.name});
            }
        }
        for (std::size_t i = 0; i < node.command.arguments.size(); ++i) {
            for (const auto& tok : embedded_ref_tokens(node.command.arguments[i])) {
                const ComponentNode* producer = wf.find_node(tok.node);
                const OutputDecl* out =
                    producer ? producer->find_output(tok.output) : nullptr;
                edges.push_back(DependencyEdge{tok.node, out ? out->name : tok.output,
                                               node.name, "arg:" + std::to_string(i)});
            }
        }
    }
    return edges;
}

std::vector<std::string> topological_order(const WorkflowDescription& wf) {
    std::map<std::string, std::size_t> indegree;
    std::map<std::string, std::vector<std::string>> successors;
    for (const auto& node : wf.nodes) indegree[node.name] = 0;
    std::map<std::string, std::map<std::string, bool>> seen;
    for (const auto& edge : dependency_graph(wf)) {
        if (!seen[edge.producer][edge.consumer]) {
            seen[edge.producer][edge.consumer] = true;
            successors[edge.producer].push_back(edge.consumer);
            indegree[edge.consumer] += 1;
        }
    }
    std::vector<std::string> order;
    std::vector<std::string> ready;
    for (const auto& node : wf.nodes) {
        if (indegree[node.name] == 0) ready.push_back(node.name);
    }
    while (!ready.empty()) {
        // Declaration order among ready nodes keeps the result deterministic.
        const std::string name = ready.front();
        ready.erase(ready.begin());
        order.push_back(name);
        for (const auto& next : successors[name]) {
            if (--indegree[next] == 0) {
                // insert respecting declaration order
                auto decl_pos = [&](const std::string& n) {
                    for (std::size_t i = 0; i < wf.nodes.size(); ++i) {
                        if (wf.nodes[i].name == n) return i;
                    }
                    return wf.nodes.size();
                };
                auto it = std::find_if(ready.begin(), ready.end(), [&](const std::string& r) {
                    return decl_pos(r) > decl_pos(next);
                });
                ready.insert(it, next);
            }
        }
    }
    if (order.size() != wf.nodes.size()) {
        throw ValidationError("workflow is not acyclic");
    }
    return order;
}

// --------------------------------------------------------------------------
// Abstract view
// --------------------------------------------------------------------------

std::string canonical_descriptor(std::string_view filename) {
    std::string base = basename_of(filename);
    std::transform(base.begin(), base.end(), base.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return base;
}

namespace {

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    bool in_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

// Reference tokens carry the produced file's canonical descriptor instead of
// the producer's name; renaming a producer is not a functional change.
std::string canonicalize_argument(const WorkflowDescription& wf, std::string_view arg) {
    std::string out;
    std::size_t pos = 0;
    std::string text(arg);
    while (true) {
        const auto start = text.find("{{ref:", pos);
        if (start == std::string::npos) {
            out += text.substr(pos);
            break;
        }
        const auto end = text.find("}}", start);
        if (end == std::string::npos) {
            out += text.substr(pos);
            break;
        }
        out += text.substr(pos, start - pos);
        const auto tok = parse_ref_token(text.substr(start, end + 2 - start));
        if (tok) {
            std::string descriptor = tok->output;
            if (const ComponentNode* producer = wf.find_node(tok->node)) {
                if (const OutputDecl* decl = producer->find_output(tok->output)) {
                    descriptor = decl->path;
                }
            }
            out += "{{ref:" + canonical_descriptor(descriptor) + "}}";
        } else {
            out += text.substr(start, end + 2 - start);
        }
        pos = end + 2;
    }
    return normalize_whitespace(out);
}

std::vector<std::string> functional_env_names(const ComponentNode& node) {
    std::vector<std::string> names;
    auto it = node.annotations.find("functional-env");
    if (it == node.annotations.end()) return names;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = normalize_whitespace(item);
        if (!item.empty()) names.push_back(item);
    }
    return names;
}

} // namespace

std::string canonical_command(const WorkflowDescription& wf, const ComponentNode& node) {
    Json cmd;
    cmd["executable"] = normalize_whitespace(node.command.executable);
    Json args = Json::array();
    for (const auto& a : node.command.arguments) {
        args.push_back(canonicalize_argument(wf, a));
    }
    cmd["arguments"] = args;
    Json env = Json::object();
    for (const auto& name : functional_env_names(node)) {
        auto it = node.command.environment.find(name);
        if (it != node.command.environment.end()) env[name] = it->second;
    }
    cmd["environment"] = env;
    return cmd.dump();
}

AbstractNodeView abstract_view(const WorkflowDescription& wf, std::string_view node_name) {
    const ComponentNode* node = wf.find_node(node_name);
    if (!node) {
        throw ValidationError("unknown node '" + std::string(node_name) + "'");
    }
    for (const auto& arg : node->command.arguments) {
        if (arg.find("{{param:") != std::string::npos) {
            throw ValidationError("abstract view requires resolved parameters (node " +
                                  node->name + ")");
        }
    }

    Json view;
    view["command"] = Json::parse(canonical_command(wf, *node));

    std::vector<Json> inputs;
    for (const auto& binding : node->inputs) {
        Json ji;
        ji["name"] = binding.name;
        std::visit(
            [&](const auto& src) {
                using T = std::decay_t<decltype(src)>;
                if constexpr (std::is_same_v<T, LiteralFileSource>) {
                    // Only content identity matters for literals; the path is
                    // a platform detail and the content digest is hashed
                    // separately.
                    ji["kind"] = "literal-file";
                } else if constexpr (std::is_same_v<T, ParameterSource>) {
                    if (!src.resolved) {
                        throw ValidationError(
                            "abstract view requires resolved parameters (node " +
                            node->name + ", input " + binding.name + ")");
                    }
                    ji["kind"] = "parameter";
                    ji["value"] = src.value;
                } else {
                    ji["kind"] = "reference";
                    std::string descriptor = src.output;
                    if (const ComponentNode* producer = wf.find_node(src.node)) {
                        if (const OutputDecl* decl = producer->find_output(src.output)) {
                            descriptor = decl->path;
                        }
                    }
                    ji["output"] = canonical_descriptor(descriptor);
                }
            },
            binding.source);
        inputs.push_back(ji);
    }
    std::sort(inputs.begin(), inputs.end(), [](const Json& a, const Json& b) {
        return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    view["inputs"] = inputs;

    std::vector<Json> outputs;
    for (const auto& out : node->outputs) {
        outputs.push_back(Json{{"name", out.name}, {"path", out.path}});
    }
    std::sort(outputs.begin(), outputs.end(), [](const Json& a, const Json& b) {
        return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    view["outputs"] = outputs;

    return AbstractNodeView{view};
}

} // namespace awf
