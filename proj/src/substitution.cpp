#include "awf/substitution.hpp"

#include <algorithm>

#include "awf/digest.hpp"
#include "awf/errors.hpp"
#include "awf/util.hpp"

namespace awf {

namespace {

std::string descriptor_of_output(const WorkflowDescription& wf, const std::string& node,
                                 const std::string& output) {
    if (const ComponentNode* producer = wf.find_node(node)) {
        if (const OutputDecl* decl = producer->find_output(output)) {
            return canonical_descriptor(decl->path);
        }
    }
    return canonical_descriptor(output);
}

DescriptorSet single_node_codomain(const WorkflowDescription& wf, const std::string& node) {
    return codomain_descriptors(make_subgraph(wf, {node}));
}

DescriptorSet single_node_domain(const WorkflowDescription& wf, const std::string& node) {
    return domain_descriptors(make_subgraph(wf, {node}));
}

} // namespace

std::string conflict_kind_name(Conflict::Kind kind) {
    switch (kind) {
        case Conflict::Kind::UnmappedInput: return "unmapped-input";
        case Conflict::Kind::AmbiguousSplice: return "ambiguous-splice";
        case Conflict::Kind::ArgumentExpectation: return "argument-expectation";
        case Conflict::Kind::DanglingConsumer: return "dangling-consumer";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Patch (de)serialization
// ---------------------------------------------------------------------------

Json Patch::to_json() const {
    Json j;
    j["graph"] = workflow_to_json(graph);
    j["input_schema"] = input_schema;
    j["output_schema"] = output_schema;
    Json producers = Json::object();
    for (const auto& [d, set] : input_producer_codomains) {
        producers[d] = std::vector<std::string>(set.begin(), set.end());
    }
    j["input_producer_codomains"] = producers;
    Json consumers = Json::object();
    for (const auto& [d, sets] : output_consumer_domains) {
        Json arr = Json::array();
        for (const auto& set : sets) {
            arr.push_back(std::vector<std::string>(set.begin(), set.end()));
        }
        consumers[d] = arr;
    }
    j["output_consumer_domains"] = consumers;
    j["payload"] = payload;
    j["payload_digests"] = Json(payload_digests);
    Json instr = Json::array();
    for (const auto& ins : instructions) {
        instr.push_back(Json{{"op", "remove"}, {"node", ins.node}});
    }
    j["instructions"] = instr;
    j["provenance"] = Json{{"workflow_digest", source_workflow_digest},
                           {"block", source_block}};
    return j;
}

Patch Patch::from_json(const Json& j) {
    Patch p;
    p.graph = workflow_from_json(j.at("graph"));
    p.input_schema = j.value("input_schema", std::vector<std::string>{});
    p.output_schema = j.value("output_schema", std::vector<std::string>{});
    if (j.contains("input_producer_codomains")) {
        for (auto it = j["input_producer_codomains"].begin();
             it != j["input_producer_codomains"].end(); ++it) {
            DescriptorSet set;
            for (const auto& d : it.value()) set.insert(d.get<std::string>());
            p.input_producer_codomains[it.key()] = set;
        }
    }
    if (j.contains("output_consumer_domains")) {
        for (auto it = j["output_consumer_domains"].begin();
             it != j["output_consumer_domains"].end(); ++it) {
            std::vector<DescriptorSet> sets;
            for (const auto& arr : it.value()) {
                DescriptorSet set;
                for (const auto& d : arr) set.insert(d.get<std::string>());
                sets.push_back(set);
            }
            p.output_consumer_domains[it.key()] = sets;
        }
    }
    p.payload = j.value("payload", std::vector<std::string>{});
    if (j.contains("payload_digests")) {
        for (auto it = j["payload_digests"].begin(); it != j["payload_digests"].end(); ++it) {
            p.payload_digests[it.key()] = it.value().get<std::string>();
        }
    }
    if (j.contains("instructions")) {
        for (const auto& ins : j["instructions"]) {
            PatchInstruction instruction;
            instruction.node = ins.value("node", std::string());
            p.instructions.push_back(instruction);
        }
    }
    if (j.contains("provenance")) {
        p.source_workflow_digest = j["provenance"].value("workflow_digest", std::string());
        p.source_block = j["provenance"].value("block", std::string());
    }
    return p;
}

void Patch::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir / "payload");
    Patch stored = *this;
    for (const auto& rel : payload) {
        std::filesystem::path src(rel);
        if (src.is_relative() && !graph.base_dir.empty()) src = graph.base_dir / src;
        const std::string name = src.filename().string();
        const auto dst = dir / "payload" / name;
        std::filesystem::copy_file(src, dst,
                                   std::filesystem::copy_options::overwrite_existing);
        // Point the stored graph at the packaged copy.
        for (auto& node : stored.graph.nodes) {
            for (auto& binding : node.inputs) {
                if (auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
                    if (lit->path == rel) {
                        lit->path = std::filesystem::absolute(dst).string();
                    }
                }
            }
        }
    }
    stored.graph.base_dir.clear();
    write_text_file(dir / "patch.json", stored.to_json().dump(2) + "\n");
}

Patch Patch::load(const std::filesystem::path& dir) {
    Patch p = Patch::from_json(Json::parse(read_text_file(dir / "patch.json")));
    p.graph.base_dir = dir;
    return p;
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

Patch extract_patch(const WorkflowDescription& wf, const Block& block) {
    const SubgraphView view = make_subgraph(wf, block.members);
    Patch patch;
    patch.graph = extract_block_workflow(wf, block);
    patch.source_workflow_digest = sha256_hex(serialize_workflow(wf));
    patch.source_block = block.id;

    // Boundary inputs: every edge entering the block from the outside. Record
    // the original producer's single-node co-domain per descriptor.
    std::set<std::string> seen_inputs;
    for (const auto& edge : dependency_graph(wf)) {
        if (!view.contains(edge.consumer) || view.contains(edge.producer)) continue;
        const std::string d = descriptor_of_output(wf, edge.producer, edge.output);
        if (seen_inputs.insert(d).second) {
            patch.input_schema.push_back(d);
            patch.input_producer_codomains[d] = single_node_codomain(wf, edge.producer);
        }
    }
    std::sort(patch.input_schema.begin(), patch.input_schema.end());

    // Boundary outputs and their original consumers.
    for (const auto& d : codomain_descriptors(view)) patch.output_schema.push_back(d);
    for (const auto& edge : dependency_graph(wf)) {
        if (!view.contains(edge.producer) || view.contains(edge.consumer)) continue;
        const std::string d = descriptor_of_output(wf, edge.producer, edge.output);
        patch.output_consumer_domains[d].push_back(single_node_domain(wf, edge.consumer));
    }

    // Payload: the members' genuine literal inputs (boundary lifts are not
    // payload, they arrive through splicing).
    std::set<std::string> boundary(patch.input_schema.begin(), patch.input_schema.end());
    for (const auto& name : block.members) {
        const ComponentNode* node = wf.find_node(name);
        for (const auto& binding : node->inputs) {
            if (const auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
                std::filesystem::path p(lit->path);
                if (p.is_relative() && !wf.base_dir.empty()) p = wf.base_dir / p;
                if (!std::filesystem::exists(p)) {
                    throw Error("patch payload file missing: " + lit->path);
                }
                patch.payload.push_back(lit->path);
                patch.payload_digests[lit->path] = sha256_file(p);
            }
        }
    }

    // Default instructions: remove the source block's members from the target.
    for (const auto& name : block.members) {
        patch.instructions.push_back(PatchInstruction{PatchInstruction::Kind::Remove, name});
    }
    return patch;
}

// ---------------------------------------------------------------------------
// Splice-point identification
// ---------------------------------------------------------------------------

SpliceMap identify_splice_points(const WorkflowDescription& G, const Patch& patch,
                                 double threshold, bool force,
                                 std::vector<Conflict>* warnings) {
    SpliceMap splice;

    for (const auto& descriptor : patch.input_schema) {
        // Candidates: G nodes producing this descriptor, ranked by co-domain
        // similarity to the patch's original producer.
        DescriptorSet reference;
        auto ref_it = patch.input_producer_codomains.find(descriptor);
        if (ref_it != patch.input_producer_codomains.end()) reference = ref_it->second;

        struct Candidate {
            std::string node;
            std::string output;
            double score;
        };
        std::vector<Candidate> candidates;
        for (const auto& node : G.nodes) {
            for (const auto& out : node.outputs) {
                if (canonical_descriptor(out.path) != descriptor) continue;
                const double score =
                    reference.empty() ? 1.0
                                      : jaccard(single_node_codomain(G, node.name), reference);
                if (score >= threshold) {
                    candidates.push_back(Candidate{node.name, out.name, score});
                }
            }
        }
        if (candidates.empty()) {
            throw SpliceError(conflict_kind_name(Conflict::Kind::UnmappedInput),
                              "no splice candidate for patch input '" + descriptor + "'");
        }
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.node != b.node) return a.node < b.node;
            return a.output < b.output;
        });
        if (candidates.size() > 1 && candidates[0].score == candidates[1].score &&
            candidates[0].node != candidates[1].node) {
            if (!force) {
                throw SpliceError(conflict_kind_name(Conflict::Kind::AmbiguousSplice),
                                  "ambiguous splice for patch input '" + descriptor +
                                      "': candidates " + candidates[0].node + ", " +
                                      candidates[1].node);
            }
            if (warnings) {
                warnings->push_back(Conflict{Conflict::Kind::AmbiguousSplice, descriptor,
                                             "forced; took " + candidates[0].node});
            }
        }
        splice.inputs[descriptor] = {candidates[0].node, candidates[0].output};
    }

    // Output splice points: retained consumers whose single-node domain looks
    // like the original consumers of the patch.
    for (const auto& [descriptor, domains] : patch.output_consumer_domains) {
        for (const auto& edge : dependency_graph(G)) {
            if (descriptor_of_output(G, edge.producer, edge.output) != descriptor) continue;
            double best = domains.empty() ? 1.0 : 0.0;
            const DescriptorSet consumer_domain = single_node_domain(G, edge.consumer);
            for (const auto& d : domains) best = std::max(best, jaccard(consumer_domain, d));
            if (best >= threshold) {
                splice.outputs.push_back(
                    OutputSplicePoint{edge.consumer, edge.input, descriptor});
            }
        }
    }

    // Removal set: instruction-named nodes present in G plus everything
    // spanned between input splice points and output consumers.
    std::set<std::string> endpoints;
    for (const auto& [d, point] : splice.inputs) endpoints.insert(point.first);
    std::set<std::string> consumers;
    for (const auto& point : splice.outputs) consumers.insert(point.consumer);

    for (const auto& instruction : patch.instructions) {
        if (G.find_node(instruction.node) && !endpoints.count(instruction.node) &&
            !consumers.count(instruction.node)) {
            splice.removal.insert(instruction.node);
        }
    }

    std::map<std::string, std::vector<std::string>> succ, pred;
    for (const auto& edge : dependency_graph(G)) {
        succ[edge.producer].push_back(edge.consumer);
        pred[edge.consumer].push_back(edge.producer);
    }
    auto reachable = [](const std::set<std::string>& from,
                        std::map<std::string, std::vector<std::string>>& next) {
        std::set<std::string> out;
        std::vector<std::string> stack(from.begin(), from.end());
        while (!stack.empty()) {
            const std::string n = stack.back();
            stack.pop_back();
            for (const auto& m : next[n]) {
                if (out.insert(m).second) stack.push_back(m);
            }
        }
        return out;
    };
    if (!endpoints.empty() && !consumers.empty()) {
        const auto below = reachable(endpoints, succ);
        const auto above = reachable(consumers, pred);
        for (const auto& n : below) {
            if (above.count(n) && !endpoints.count(n) && !consumers.count(n)) {
                splice.removal.insert(n);
            }
        }
    }
    return splice;
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

std::pair<WorkflowDescription, std::vector<Conflict>> apply_patch(const WorkflowDescription& G,
                                                                  const Patch& patch,
                                                                  const SpliceMap& splice,
                                                                  bool force) {
    std::vector<Conflict> conflicts;

    for (const auto& [d, point] : splice.inputs) {
        if (splice.removal.count(point.first)) {
            conflicts.push_back(Conflict{Conflict::Kind::DanglingConsumer, point.first,
                                         "input splice point is scheduled for removal"});
        }
    }

    WorkflowDescription out;
    out.name = G.name;
    out.parameters = G.parameters;
    out.metadata = G.metadata;
    out.base_dir = G.base_dir;

    std::set<std::string> removed(splice.removal.begin(), splice.removal.end());
    std::set<std::string> retained_names;
    for (const auto& node : G.nodes) {
        if (!removed.count(node.name)) retained_names.insert(node.name);
    }

    // Insert patch nodes, suffixing on collision with retained names.
    std::map<std::string, std::string> patch_name; // patch node -> name in output
    for (const auto& node : patch.graph.nodes) {
        std::string name = node.name;
        int suffix = 1;
        while (retained_names.count(name)) {
            name = node.name + "-p" + (suffix > 1 ? std::to_string(suffix) : std::string());
            ++suffix;
        }
        patch_name[node.name] = name;
        retained_names.insert(name);
    }

    // Patch outputs by descriptor, for consumer rewiring.
    std::map<std::string, std::pair<std::string, std::string>> patch_output;
    for (const auto& node : patch.graph.nodes) {
        for (const auto& decl : node.outputs) {
            patch_output[canonical_descriptor(decl.path)] = {patch_name[node.name], decl.name};
        }
    }

    // Argument-expectation check: every schema output a retained consumer will
    // read must actually be produced by a patch node.
    std::set<std::string> flagged;
    for (const auto& point : splice.outputs) {
        if (removed.count(point.consumer)) continue;
        if (!patch_output.count(point.descriptor) && flagged.insert(point.descriptor).second) {
            conflicts.push_back(
                Conflict{Conflict::Kind::ArgumentExpectation, point.consumer,
                         "retained consumer expects output '" + point.descriptor +
                             "' which no patch node produces"});
        }
    }

    // Retained G nodes, rewired to patch outputs where they consumed the
    // removed sub-graph.
    for (const auto& g_node : G.nodes) {
        if (removed.count(g_node.name)) continue;
        ComponentNode node = g_node;
        for (auto& binding : node.inputs) {
            if (const auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                if (!removed.count(ref->node)) continue;
                const std::string d = descriptor_of_output(G, ref->node, ref->output);
                auto it = patch_output.find(d);
                if (it != patch_output.end()) {
                    binding.source = ReferenceSource{it->second.first, it->second.second};
                } else {
                    conflicts.push_back(Conflict{Conflict::Kind::DanglingConsumer,
                                                 node.name + "/" + binding.name,
                                                 "consumed '" + d +
                                                     "' from removed node '" + ref->node +
                                                     "' with no patch replacement"});
                }
            }
        }
        for (std::size_t i = 0; i < node.command.arguments.size(); ++i) {
            std::string& arg = node.command.arguments[i];
            std::size_t pos = 0;
            while ((pos = arg.find("{{ref:", pos)) != std::string::npos) {
                const auto end = arg.find("}}", pos);
                if (end == std::string::npos) break;
                const auto tok = parse_ref_token(arg.substr(pos, end + 2 - pos));
                if (tok && removed.count(tok->node)) {
                    const std::string d = descriptor_of_output(G, tok->node, tok->output);
                    auto it = patch_output.find(d);
                    if (it != patch_output.end()) {
                        const std::string replacement =
                            "{{ref:" + it->second.first + "/" + it->second.second + "}}";
                        arg.replace(pos, end + 2 - pos, replacement);
                        pos += replacement.size();
                        continue;
                    }
                    conflicts.push_back(Conflict{Conflict::Kind::DanglingConsumer,
                                                 node.name + "/arg:" + std::to_string(i),
                                                 "argument consumed '" + d +
                                                     "' from removed node '" + tok->node +
                                                     "'"});
                }
                pos = end + 2;
            }
        }
        out.nodes.push_back(std::move(node));
    }

    // Patch nodes, renamed and spliced into the target graph.
    for (const auto& p_node : patch.graph.nodes) {
        ComponentNode node = p_node;
        node.name = patch_name[p_node.name];
        for (auto& binding : node.inputs) {
            if (auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
                const std::string d = canonical_descriptor(lit->path);
                auto it = splice.inputs.find(d);
                if (it != splice.inputs.end()) {
                    binding.source = ReferenceSource{it->second.first, it->second.second};
                }
            } else if (auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                // internal patch edge: follow the rename
                auto it = patch_name.find(ref->node);
                if (it != patch_name.end()) ref->node = it->second;
            }
        }
        for (auto& arg : node.command.arguments) {
            std::size_t pos = 0;
            while ((pos = arg.find("{{ref:", pos)) != std::string::npos) {
                const auto end = arg.find("}}", pos);
                if (end == std::string::npos) break;
                const auto tok = parse_ref_token(arg.substr(pos, end + 2 - pos));
                if (tok && patch_name.count(tok->node) && patch_name[tok->node] != tok->node) {
                    const std::string replacement =
                        "{{ref:" + patch_name[tok->node] + "/" + tok->output + "}}";
                    arg.replace(pos, end + 2 - pos, replacement);
                    pos += replacement.size();
                } else {
                    pos = end + 2;
                }
            }
        }
        out.nodes.push_back(std::move(node));
    }

    if (!conflicts.empty() && !force) {
        return {G, conflicts};
    }
    validate_workflow(out); // failure here is fatal even under force
    return {out, conflicts};
}

// ---------------------------------------------------------------------------
// Composition enumeration
// ---------------------------------------------------------------------------

namespace {

struct BlockType {
    std::string key; // command-mode WL digest of the standalone form
    WorkflowDescription standalone;
    SubgraphView host_view;         // view inside its source workflow
    std::vector<std::string> name_labels; // name-mode WL label multiset
    std::string source;             // library workflow hint
    std::string block_id;
};

std::string workflow_wl_digest(const WorkflowDescription& wf) {
    WlConfig config{3, WlConfig::LabelMode::Command};
    return wl_hash(whole_workflow(wf), config);
}

} // namespace

std::vector<CompositionCandidate> enumerate_compositions(
    const std::vector<LibraryWorkflow>& library, const KnowledgeBase& kb, double threshold) {
    WlConfig name_config{3, WlConfig::LabelMode::Name};

    // Library membership by whole-graph WL digest.
    std::set<std::string> library_digests;
    for (const auto& lib : library) {
        library_digests.insert(workflow_wl_digest(lib.wf));
    }

    // Distinct block types across the library.
    std::vector<BlockType> types;
    std::map<std::string, std::size_t> type_index;
    // per (library index, block id) -> type key, to describe templates
    std::map<std::pair<std::size_t, std::string>, std::string> slot_type;

    for (std::size_t li = 0; li < library.size(); ++li) {
        const auto& lib = library[li];
        for (const auto& block : lib.quotient.blocks) {
            WorkflowDescription standalone = extract_block_workflow(lib.wf, block);
            const std::string key = workflow_wl_digest(standalone);
            slot_type[{li, block.id}] = key;
            if (!type_index.count(key)) {
                BlockType t;
                t.key = key;
                t.standalone = std::move(standalone);
                t.host_view = make_subgraph(lib.wf, block.members);
                t.name_labels = wl_label_multiset(t.host_view, name_config);
                t.source = lib.source;
                t.block_id = block.id;
                type_index[key] = types.size();
                types.push_back(std::move(t));
            }
        }
    }

    auto name_similarity = [&](const BlockType& a, const BlockType& b) {
        std::map<std::string, std::size_t> ca, cb;
        for (const auto& l : a.name_labels) ca[l]++;
        for (const auto& l : b.name_labels) cb[l]++;
        std::size_t intersection = 0, unity = 0;
        for (const auto& [k, n] : ca) {
            const auto it = cb.find(k);
            const std::size_t m = it == cb.end() ? 0 : it->second;
            intersection += std::min(n, m);
            unity += std::max(n, m);
        }
        for (const auto& [k, m] : cb) {
            if (!ca.count(k)) unity += m;
        }
        return unity == 0 ? 1.0 : double(intersection) / double(unity);
    };

    // Assembles one candidate workflow from chosen types, wiring template
    // adjacencies by descriptor match.
    auto assemble = [&](const LibraryWorkflow& lib,
                        const std::vector<std::string>& slot_order,
                        const std::map<std::string, const BlockType*>& choice) {
        WorkflowDescription composed;
        composed.name = lib.wf.name;
        composed.base_dir = lib.wf.base_dir;
        std::set<std::string> used_names;
        // node name in composed workflow, per (slot, original node name)
        std::map<std::string, std::map<std::string, std::string>> rename;
        for (const auto& slot : slot_order) {
            const BlockType* type = choice.at(slot);
            for (const auto& node : type->standalone.nodes) {
                ComponentNode copy = node;
                std::string name = copy.name;
                int suffix = 2;
                while (used_names.count(name)) {
                    name = copy.name + "-" + std::to_string(suffix++);
                }
                rename[slot][copy.name] = name;
                copy.name = name;
                used_names.insert(name);
                composed.nodes.push_back(std::move(copy));
            }
        }
        // internal references follow renames
        for (const auto& slot : slot_order) {
            const BlockType* type = choice.at(slot);
            for (const auto& node : type->standalone.nodes) {
                const std::string renamed = rename[slot][node.name];
                ComponentNode* target = composed.find_node(renamed);
                for (auto& binding : target->inputs) {
                    if (auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                        auto it = rename[slot].find(ref->node);
                        if (it != rename[slot].end()) ref->node = it->second;
                    }
                }
            }
        }
        // wire quotient adjacencies: downstream boundary literals whose
        // descriptor matches an upstream output become references
        for (const auto& [from, to] : lib.quotient.edges) {
            const BlockType* up = choice.at(from);
            const BlockType* down = choice.at(to);
            std::map<std::string, std::pair<std::string, std::string>> up_outputs;
            for (const auto& node : up->standalone.nodes) {
                for (const auto& decl : node.outputs) {
                    up_outputs[canonical_descriptor(decl.path)] = {
                        rename[from][node.name], decl.name};
                }
            }
            for (const auto& node : down->standalone.nodes) {
                ComponentNode* target = composed.find_node(rename[to][node.name]);
                for (auto& binding : target->inputs) {
                    if (auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
                        auto it = up_outputs.find(canonical_descriptor(lit->path));
                        if (it != up_outputs.end()) {
                            binding.source =
                                ReferenceSource{it->second.first, it->second.second};
                        }
                    }
                }
            }
        }
        validate_workflow(composed);
        return composed;
    };

    std::vector<CompositionCandidate> out;
    std::set<std::string> emitted = library_digests;

    for (const auto& lib : library) {
        const std::size_t li = std::size_t(&lib - library.data());
        // slots in deterministic order
        std::vector<std::string> slot_order;
        for (const auto& block : lib.quotient.blocks) slot_order.push_back(block.id);

        // per-slot candidates: function-equivalent block types (name mode)
        std::vector<std::vector<const BlockType*>> options;
        for (const auto& slot : slot_order) {
            const BlockType& original = types[type_index[slot_type[{li, slot}]]];
            std::vector<const BlockType*> opts;
            for (const auto& type : types) {
                if (name_similarity(type, original) >= threshold) opts.push_back(&type);
            }
            std::sort(opts.begin(), opts.end(),
                      [](const BlockType* a, const BlockType* b) { return a->key < b->key; });
            options.push_back(std::move(opts));
        }

        // cartesian product over slots
        std::vector<std::size_t> pick(slot_order.size(), 0);
        while (true) {
            std::map<std::string, const BlockType*> choice;
            for (std::size_t i = 0; i < slot_order.size(); ++i) {
                choice[slot_order[i]] = options[i][pick[i]];
            }
            // adjacency composability
            bool composable = true;
            for (const auto& [from, to] : lib.quotient.edges) {
                const double up = composability(choice[from]->host_view, choice[to]->host_view,
                                                ComposabilityDirection::Upstream, kb)
                                      .value;
                const double down = composability(choice[from]->host_view,
                                                  choice[to]->host_view,
                                                  ComposabilityDirection::Downstream, kb)
                                        .value;
                if (std::max(up, down) < threshold) {
                    composable = false;
                    break;
                }
            }
            if (composable) {
                WorkflowDescription composed = assemble(lib, slot_order, choice);
                const std::string digest = workflow_wl_digest(composed);
                if (!emitted.count(digest)) {
                    emitted.insert(digest);
                    CompositionCandidate candidate;
                    candidate.wl_digest = digest;
                    candidate.kind = "recombination";
                    candidate.template_source = lib.source;
                    for (const auto& slot : slot_order) {
                        candidate.slot_blocks.push_back(choice[slot]->key);
                    }
                    candidate.wf = std::move(composed);
                    candidate.wf.name =
                        lib.wf.name + "-alt-" + digest.substr(0, 8);
                    out.push_back(std::move(candidate));
                }
            }
            // advance
            std::size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < options[i].size()) break;
                pick[i] = 0;
            }
            if (i == pick.size()) break;
        }
    }

    // Standalone candidates: block types not already exposed as workflows.
    std::vector<const BlockType*> sorted_types;
    for (const auto& type : types) sorted_types.push_back(&type);
    std::sort(sorted_types.begin(), sorted_types.end(),
              [](const BlockType* a, const BlockType* b) { return a->key < b->key; });
    for (const BlockType* type : sorted_types) {
        if (emitted.count(type->key)) continue;
        emitted.insert(type->key);
        CompositionCandidate candidate;
        candidate.wf = type->standalone;
        candidate.wl_digest = type->key;
        candidate.kind = "standalone";
        candidate.template_source = type->source;
        candidate.slot_blocks = {type->key};
        out.push_back(std::move(candidate));
    }
    return out;
}

} // namespace awf
