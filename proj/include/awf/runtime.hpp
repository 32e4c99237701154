#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"
#include "awf/policy.hpp"

namespace awf {

struct RunOptions {
    KnowledgeBase* kb = nullptr;
    bool memoize = true;
    int restart_limit = 1; // retries after the first failure
    int max_parallel = 4;
    std::string platform; // recorded in execution records, never hashed
    std::filesystem::path work_dir = "runs";
    std::string run_id; // generated when empty
    double splice_threshold = 0.8;
};

struct NodeResult {
    std::string state; // succeeded | failed | memoized | skipped
    double wall_seconds = 0.0;
    int attempts = 0; // memoized nodes keep 0
    std::map<std::string, std::string> output_digests;
    std::filesystem::path result_dir;
    std::string memoized_from; // interface hash of the substituting record
    bool degraded_hit = false; // memo hit lost to a missing blob, re-executed
    std::string error;
    double started_at = 0.0; // epoch seconds
    double finished_at = 0.0;
};

struct AppliedSubstitution {
    std::string binding_id;
    std::string detail;
};

struct RunReport {
    std::string run_id;
    std::string workflow;
    std::filesystem::path run_dir;
    std::map<std::string, NodeResult> nodes;
    double wall_seconds = 0.0;
    int memo_hits = 0;
    int samples_recorded = 0;
    bool success = false;
    std::vector<AppliedSubstitution> substitutions;
    std::vector<std::string> warnings;

    Json to_json() const;
};

// Runs the workflow as local processes: topological order, independent nodes
// concurrent up to max_parallel, one fresh sandbox per (node, attempt), memo
// hits restored from the KB, failures retried up to the restart limit, and
// everything downstream of a permanent failure skipped.
RunReport execute(const WorkflowDescription& wf, const RunOptions& options);

struct MemoCheck {
    bool hit = false;
    ExecutionRecord record;
    InterfaceHash hash;
};

// Hit iff the KB holds an authoritative successful record for the node's
// interface hash. Platform differences never block a hit; KB errors degrade
// to a miss.
MemoCheck memoize_check(const WorkflowDescription& wf, const std::string& node,
                        KnowledgeBase& kb);

// Materializes the record's outputs into the sandbox and verifies digests
// after writing. Throws KbError for missing blobs or digest mismatches.
std::vector<std::filesystem::path> restore_outputs(const ExecutionRecord& record,
                                                   const WorkflowDescription& wf,
                                                   const std::string& node,
                                                   const std::filesystem::path& sandbox,
                                                   const KnowledgeBase& kb);

struct SurrogateBinding {
    std::string id;
    std::vector<std::string> nodes; // physical block, by node name
    std::filesystem::path patch_dir;
    std::vector<std::string> comparator; // argv; gets (physical dir, surrogate dir)
    std::string mode = "canary";         // canary | substitute

    static SurrogateBinding from_json(const Json& j);
    Json to_json() const;
};

std::vector<SurrogateBinding> load_bindings(const std::filesystem::path& path);

// Physical path runs normally and determines the workflow outputs; each canary
// binding's surrogate runs in a shadow sandbox on the same spliced inputs, the
// comparator produces a scalar error, and an accuracy sample lands in the KB.
// Surrogate failures never fail the run.
RunReport canary_run(const WorkflowDescription& wf,
                     const std::vector<SurrogateBinding>& bindings, const RunOptions& options);

// Applies each binding's patch before execution when the prior policy
// approves; otherwise the physical path runs (with canary for canary-mode
// bindings). Patch conflicts fall back to the physical path with a warning.
RunReport adjudicated_run(const WorkflowDescription& wf,
                          const std::vector<SurrogateBinding>& bindings,
                          const AdjudicationRule& rule, const RunOptions& options);

} // namespace awf
