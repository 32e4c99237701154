#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace awf {

using Json = nlohmann::json;

// --------------------------------------------------------------------------
// Workflow description types
//
// A workflow is a DAG of command-line tasks. Functional fields (command,
// inputs, outputs) are kept strictly apart from non-functional ones
// (resources, annotations) so that a platform-independent abstract view can
// be projected for hashing and equivalence.
// --------------------------------------------------------------------------

struct LiteralFileSource {
    std::string path; // relative to the workflow's base directory
};

struct ParameterSource {
    std::string key;
    std::string value; // filled by resolve_parameters
    bool resolved = false;
};

struct ReferenceSource {
    std::string node;
    std::string output; // output name or path of the producer
};

using InputSource = std::variant<LiteralFileSource, ParameterSource, ReferenceSource>;

struct InputBinding {
    std::string name; // filename the task sees in its sandbox
    InputSource source;
};

struct OutputDecl {
    std::string name;
    std::string path; // relative path the task writes inside its sandbox
};

struct CommandSpec {
    std::string executable;
    std::vector<std::string> arguments; // may contain {{ref:..}} / {{param:..}} tokens
    std::map<std::string, std::string> environment; // non-functional unless opted in
};

struct ComponentNode {
    std::string name;
    CommandSpec command;
    std::vector<InputBinding> inputs;
    std::vector<OutputDecl> outputs;
    std::map<std::string, std::string> resources;   // scheduler hints, platform tags
    std::map<std::string, std::string> annotations; // e.g. functional-env opt-ins

    const OutputDecl* find_output(std::string_view name_or_path) const;
};

struct WorkflowDescription {
    std::string name;
    std::map<std::string, std::string> parameters;
    std::vector<ComponentNode> nodes;
    std::map<std::string, std::string> metadata;

    // Where relative literal-file paths resolve from. Set by load_workflow_file,
    // not part of the serialized document.
    std::filesystem::path base_dir;

    const ComponentNode* find_node(std::string_view name) const;
    ComponentNode* find_node(std::string_view name);
};

struct ParameterLayer {
    std::string name;
    std::map<std::string, std::string> overrides;
};

// One edge per Reference binding and per reference token in arguments.
struct DependencyEdge {
    std::string producer;
    std::string output; // producer's output name
    std::string consumer;
    std::string input; // binding name, or "arg:<index>" for argument tokens

    bool operator==(const DependencyEdge&) const = default;
};

// Functional projection of a node: canonicalized command, input and output
// descriptors, everything non-functional stripped. Two nodes that differ only
// in resources/annotations project to the same view.
struct AbstractNodeView {
    Json doc;

    std::string canonical() const { return doc.dump(); }
    bool operator==(const AbstractNodeView& o) const { return doc == o.doc; }
};

// --------------------------------------------------------------------------
// Reference token grammar: {{ref:NODE/OUTPUT}} and {{param:KEY}}
// --------------------------------------------------------------------------

struct RefToken {
    std::string node;
    std::string output;
};

// Parses a whole-argument token. Returns nullopt when `text` is not exactly
// one token of the requested kind.
std::optional<RefToken> parse_ref_token(std::string_view text);
std::optional<std::string> parse_param_token(std::string_view text);

// --------------------------------------------------------------------------
// Operations
// --------------------------------------------------------------------------

// Parses and fully validates a workflow document.
// Throws ParseError (position-reported) for malformed documents and
// ValidationError for duplicate node names, unresolved references, and cycles
// (with a witness cycle).
WorkflowDescription parse_workflow(std::string_view document_text);

// parse_workflow + base_dir set to the file's parent directory.
WorkflowDescription load_workflow_file(const std::filesystem::path& path);

// Canonical serialization: keys sorted, UTF-8, no insignificant whitespace.
// serialize(parse(d)) reparses to a structurally equal workflow.
std::string serialize_workflow(const WorkflowDescription& wf);
Json workflow_to_json(const WorkflowDescription& wf);
WorkflowDescription workflow_from_json(const Json& doc);

// Re-checks all invariants on an already-built description.
void validate_workflow(const WorkflowDescription& wf);

// Merges wf.parameters with the layers (later layers win) and substitutes
// every {{param:KEY}} token. Reference tokens are untouched. Throws
// ValidationError naming the key and node for undefined parameters.
WorkflowDescription resolve_parameters(const WorkflowDescription& wf,
                                       const std::vector<ParameterLayer>& layers);

// True when no {{param:..}} token remains anywhere in the description.
bool parameters_resolved(const WorkflowDescription& wf);

// Deterministic edge list: nodes in declaration order, bindings before
// argument tokens.
std::vector<DependencyEdge> dependency_graph(const WorkflowDescription& wf);

// Nodes in a valid topological order (producers first). Deterministic.
std::vector<std::string> topological_order(const WorkflowDescription& wf);

// Functional projection of one node. Requires parameters resolved.
// Throws ValidationError for unknown nodes.
AbstractNodeView abstract_view(const WorkflowDescription& wf, std::string_view node);

// Canonical command string used as the WL "command" node label: executable,
// arguments with reference tokens reduced to {{ref:OUTPUT}} (producer names
// are not functional), and opted-in environment entries.
std::string canonical_command(const WorkflowDescription& wf, const ComponentNode& node);

// Lowercase, path-stripped descriptor for boundary matching.
std::string canonical_descriptor(std::string_view filename);

} // namespace awf
