#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "awf/equivalence.hpp"
#include "awf/model.hpp"

namespace awf {

// The set of leaf nodes reachable from a node. Two nodes sharing a signature
// appear together in every leaf ancestor set and never separately, which is
// the block equivalence relation.
using LeafSignature = std::set<std::string>;

struct Block {
    std::string id; // digest of sorted member names: stable across reorderings
    std::vector<std::string> members;
    DescriptorSet boundary_inputs;
    DescriptorSet boundary_outputs;
};

struct QuotientGraph {
    std::vector<Block> blocks; // deterministic order
    std::vector<std::pair<std::string, std::string>> edges; // block id -> block id
};

// For each node, the exact set of leaves reachable via dependency edges.
// Leaves map to {self}.
std::map<std::string, LeafSignature> leaf_signatures(const WorkflowDescription& wf);

// Partition by equal leaf signature plus the induced block-level edges.
QuotientGraph factor(const WorkflowDescription& wf);

// Standalone workflow for one block: cross-boundary references become
// literal-file inputs named by their canonical descriptors. The result always
// validates.
WorkflowDescription extract_block_workflow(const WorkflowDescription& wf, const Block& block);

} // namespace awf
