#include "awf/factoring.hpp"

#include <algorithm>

#include "awf/digest.hpp"
#include "awf/errors.hpp"

namespace awf {

std::map<std::string, LeafSignature> leaf_signatures(const WorkflowDescription& wf) {
    std::map<std::string, std::set<std::string>> successors;
    for (const auto& node : wf.nodes) successors[node.name];
    for (const auto& edge : dependency_graph(wf)) {
        successors[edge.producer].insert(edge.consumer);
    }

    std::map<std::string, LeafSignature> sig;
    const auto order = topological_order(wf);
    // Reverse topological propagation: a node's signature is the union of its
    // successors' signatures; leaves contribute themselves.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::string& name = *it;
        LeafSignature s;
        if (successors[name].empty()) {
            s.insert(name);
        } else {
            for (const auto& next : successors[name]) {
                s.insert(sig[next].begin(), sig[next].end());
            }
        }
        sig[name] = std::move(s);
    }
    return sig;
}

QuotientGraph factor(const WorkflowDescription& wf) {
    const auto signatures = leaf_signatures(wf);

    std::map<LeafSignature, std::vector<std::string>> groups;
    for (const auto& node : wf.nodes) {
        groups[signatures.at(node.name)].push_back(node.name);
    }

    QuotientGraph q;
    std::map<std::string, std::string> block_of; // node -> block id
    for (auto& [signature, members] : groups) {
        std::sort(members.begin(), members.end());
        Sha256 h;
        for (const auto& m : members) {
            h.update(m);
            h.update("\n");
        }
        Block block;
        block.id = h.hex_digest();
        block.members = members;
        const SubgraphView view = make_subgraph(wf, members);
        block.boundary_inputs = domain_descriptors(view);
        block.boundary_outputs = codomain_descriptors(view);
        for (const auto& m : members) block_of[m] = block.id;
        q.blocks.push_back(std::move(block));
    }

    // Deterministic block order: by smallest member name.
    std::sort(q.blocks.begin(), q.blocks.end(),
              [](const Block& a, const Block& b) { return a.members.front() < b.members.front(); });

    std::set<std::pair<std::string, std::string>> edge_set;
    for (const auto& edge : dependency_graph(wf)) {
        const std::string& from = block_of[edge.producer];
        const std::string& to = block_of[edge.consumer];
        if (from != to) edge_set.insert({from, to});
    }
    q.edges.assign(edge_set.begin(), edge_set.end());
    return q;
}

WorkflowDescription extract_block_workflow(const WorkflowDescription& wf, const Block& block) {
    const SubgraphView view = make_subgraph(wf, block.members);

    WorkflowDescription out;
    out.name = wf.name + "-block-" + block.id.substr(0, 12);
    out.base_dir = wf.base_dir;
    out.metadata["source-workflow"] = wf.name;
    out.metadata["source-block"] = block.id;

    auto descriptor_for = [&](const std::string& producer, const std::string& output) {
        if (const ComponentNode* p = wf.find_node(producer)) {
            if (const OutputDecl* decl = p->find_output(output)) {
                return canonical_descriptor(decl->path);
            }
        }
        return canonical_descriptor(output);
    };

    for (const auto& name : block.members) {
        ComponentNode node = *wf.find_node(name);
        for (auto& binding : node.inputs) {
            if (const auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                if (!view.contains(ref->node)) {
                    // Cross-boundary reference: lift to a literal-file input
                    // named by the data's canonical descriptor.
                    binding.source =
                        LiteralFileSource{descriptor_for(ref->node, ref->output)};
                }
            }
        }
        for (auto& arg : node.command.arguments) {
            std::size_t pos = 0;
            while ((pos = arg.find("{{ref:", pos)) != std::string::npos) {
                const auto end = arg.find("}}", pos);
                if (end == std::string::npos) break;
                const auto tok = parse_ref_token(arg.substr(pos, end + 2 - pos));
                if (tok && !view.contains(tok->node)) {
                    const std::string descriptor = descriptor_for(tok->node, tok->output);
                    arg.replace(pos, end + 2 - pos, descriptor);
                    pos += descriptor.size();
                } else {
                    pos = end + 2;
                }
            }
        }
        out.nodes.push_back(std::move(node));
    }

    // Cross-boundary argument tokens were replaced by plain filenames; add the
    // matching literal bindings so the runtime materializes those files.
    for (auto& node : out.nodes) {
        std::set<std::string> bound;
        for (const auto& binding : node.inputs) bound.insert(binding.name);
        const ComponentNode* original = wf.find_node(node.name);
        for (const auto& edge : dependency_graph(wf)) {
            if (edge.consumer != node.name) continue;
            if (view.contains(edge.producer)) continue;
            if (edge.input.rfind("arg:", 0) != 0) continue;
            const std::string descriptor = descriptor_for(edge.producer, edge.output);
            if (bound.insert(descriptor).second) {
                node.inputs.push_back(
                    InputBinding{descriptor, LiteralFileSource{descriptor}});
            }
        }
        (void)original;
    }

    validate_workflow(out);
    return out;
}

} // namespace awf
