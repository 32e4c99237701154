#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "awf/equivalence.hpp"
#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"

namespace awf {

struct PatchInstruction {
    enum class Kind { Remove };
    Kind kind = Kind::Remove;
    std::string node; // target-graph node to delete
};

// A sub-graph packaged for substitution: the graph fragment (boundary
// references lifted to literal inputs), the data files its nodes require, the
// I/O schemas used for splice matching, and removal instructions.
struct Patch {
    WorkflowDescription graph;
    std::vector<std::string> input_schema;  // ordered boundary-input descriptors
    std::vector<std::string> output_schema; // boundary-output descriptors

    // Single-node equivalence context captured at extraction time: what the
    // original producers/consumers of this sub-graph looked like.
    std::map<std::string, DescriptorSet> input_producer_codomains;
    std::map<std::string, std::vector<DescriptorSet>> output_consumer_domains;

    std::vector<std::string> payload; // literal files, relative to the source workflow
    std::map<std::string, std::string> payload_digests;
    std::vector<PatchInstruction> instructions;

    std::string source_workflow_digest;
    std::string source_block;

    Json to_json() const;
    static Patch from_json(const Json& j);

    // Directory layout: patch.json plus payload/ files. Saving rewrites the
    // graph's payload-literal paths to the stored copies.
    void save(const std::filesystem::path& dir) const;
    static Patch load(const std::filesystem::path& dir);
};

struct OutputSplicePoint {
    std::string consumer;   // target-graph node
    std::string input;      // binding name or "arg:<index>"
    std::string descriptor; // patch output descriptor it will consume
};

struct SpliceMap {
    // patch input descriptor -> (target node, output name)
    std::map<std::string, std::pair<std::string, std::string>> inputs;
    std::vector<OutputSplicePoint> outputs;
    std::set<std::string> removal;
};

struct Conflict {
    enum class Kind { UnmappedInput, AmbiguousSplice, ArgumentExpectation, DanglingConsumer };
    Kind kind = Kind::UnmappedInput;
    std::string locus;
    std::string detail;
};

std::string conflict_kind_name(Conflict::Kind kind);

// Packages one factored block of the workflow.
Patch extract_patch(const WorkflowDescription& wf, const Block& block);

// Matches the patch boundary against G by single-node domain/co-domain
// similarity. Ties are refused (ambiguous-splice) unless force is set, in
// which case the lexicographically first candidate is taken and a warning
// conflict is appended to `warnings`.
// Throws SpliceError for unmapped inputs and (when not forced) ambiguity.
SpliceMap identify_splice_points(const WorkflowDescription& G, const Patch& patch,
                                 double threshold, bool force = false,
                                 std::vector<Conflict>* warnings = nullptr);

// Applies the patch: deletes the removal set, inserts patch nodes (suffixing
// on name collisions), rewires references per the splice map, re-validates.
// On conflicts without force, returns G unchanged alongside the conflicts.
// A result that fails validation is always fatal, force or not.
std::pair<WorkflowDescription, std::vector<Conflict>> apply_patch(
    const WorkflowDescription& G, const Patch& patch, const SpliceMap& splice, bool force);

// ---------------------------------------------------------------------------
// Composition enumeration
// ---------------------------------------------------------------------------

struct LibraryWorkflow {
    WorkflowDescription wf;
    QuotientGraph quotient;
    std::string source; // file path or name hint
};

struct CompositionCandidate {
    WorkflowDescription wf;
    std::string wl_digest;       // command-mode WL digest of the composed graph
    std::string kind;            // "recombination" | "standalone"
    std::string template_source; // library workflow the shape came from
    std::vector<std::string> slot_blocks; // chosen block type keys, slot order
};

// Fills each library template's slots with function-equivalent blocks whose
// adjacencies pass the composability test, drops anything identical to a
// library member, adds standalone workflows for blocks not already exposed,
// and deduplicates by WL digest.
std::vector<CompositionCandidate> enumerate_compositions(
    const std::vector<LibraryWorkflow>& library, const KnowledgeBase& kb, double threshold);

} // namespace awf
