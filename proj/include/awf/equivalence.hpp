#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "awf/digest.hpp"
#include "awf/model.hpp"

namespace awf {

class KnowledgeBase;

// Memoization key: Merkle-style digest over a node's abstract view, the
// content digests of its literal inputs, and its producers' hashes. Nothing
// platform- or instance-specific contributes.
struct InterfaceHash {
    std::string hex;
    std::string algorithm = kDigestAlgorithm;

    bool operator==(const InterfaceHash&) const = default;
};

// Canonical I/O descriptors (lowercase basenames) for a sub-graph boundary.
using DescriptorSet = std::set<std::string>;

struct SimilarityScore {
    double value = 0.0;
    std::string metric; // domain | codomain | function
};

struct WlConfig {
    enum class LabelMode { Name, Command };
    int iterations = 3;
    LabelMode label_mode = LabelMode::Command;
};

// A sub-graph of a workflow: the member node set plus the host description
// (needed to resolve boundary references and command canonicalization).
struct SubgraphView {
    const WorkflowDescription* wf = nullptr;
    std::vector<std::string> nodes; // sorted, unique

    bool contains(const std::string& name) const;
};

SubgraphView make_subgraph(const WorkflowDescription& wf, std::vector<std::string> nodes);
SubgraphView whole_workflow(const WorkflowDescription& wf);

// ---------------------------------------------------------------------------
// Interface hashing
// ---------------------------------------------------------------------------

// Map of literal-input path (as written in the description) -> content digest.
// Paths missing from the map are read from disk relative to wf.base_dir.
using LiteralDigests = std::map<std::string, std::string>;

InterfaceHash interface_hash(const WorkflowDescription& wf, std::string_view node,
                             const LiteralDigests& literal_digests = {});

// Hashes every node, sharing producer recursion across the workflow.
std::map<std::string, InterfaceHash> interface_hash_all(
    const WorkflowDescription& wf, const LiteralDigests& literal_digests = {});

// ---------------------------------------------------------------------------
// Boundary descriptors and set similarities
// ---------------------------------------------------------------------------

// Data consumed from outside the sub-graph (literals, parameters, references
// to non-member producers).
DescriptorSet domain_descriptors(const SubgraphView& view);

// Data produced for the outside: member outputs consumed by non-members plus
// outputs nothing consumes.
DescriptorSet codomain_descriptors(const SubgraphView& view);

// Co-domain reconstructed from consumer references only, without reading the
// members' declarations ("information on the co-domain of A can be built from
// the references to it").
DescriptorSet codomain_from_consumers(const SubgraphView& view);

// Jaccard index; two empty sets compare as 1.0 (vacuous equality).
double jaccard(const DescriptorSet& a, const DescriptorSet& b);

SimilarityScore domain_similarity(const DescriptorSet& a, const DescriptorSet& b);
SimilarityScore codomain_similarity(const DescriptorSet& a, const DescriptorSet& b);

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman hashing over labeled sub-graphs
// ---------------------------------------------------------------------------
// Node labels: the node name or its canonical command, per config. Edge labels
// are always the canonical descriptor of the data consumed.

// Label multiset accumulated over iterations 0..k, sorted. Labels are digest
// strings, comparable across graphs.
std::vector<std::string> wl_label_multiset(const SubgraphView& view, const WlConfig& config);

// Digest of the sorted final-iteration label multiset. Throws ValidationError
// for an empty sub-graph.
std::string wl_hash(const SubgraphView& view, const WlConfig& config);

// Jaccard over the multisets of labels accumulated across all iterations.
SimilarityScore function_similarity(const SubgraphView& a, const SubgraphView& b,
                                    const WlConfig& config);

enum class ComposabilityDirection { Upstream, Downstream };

// Upstream: is A like the known producers of B (codomain match)?
// Downstream: is B like the known consumers of A (domain match)?
// 0.0 when the knowledge base holds no producer/consumer records.
SimilarityScore composability(const SubgraphView& a, const SubgraphView& b,
                              ComposabilityDirection direction, const KnowledgeBase& kb);

} // namespace awf
