#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"

namespace awf {

// Weighted sum over normalized objectives; lower is better.
// runtime is normalized by the baseline predicted runtime, accuracy-risk by
// the adjudication tolerance, monetary by the baseline cost at the configured
// unit price.
struct CostFunction {
    std::map<std::string, double> weights; // runtime | accuracy-risk | monetary
    double accuracy_tolerance = 1.0;       // normalization constant
    double unit_cost_per_second = 0.0;
    double missing_accuracy_default = 1.0; // pessimistic when no canary data

    static CostFunction from_json(const Json& j);
};

struct PlannedSubstitution {
    std::string block_id;                  // target block in the host workflow
    std::vector<std::string> block_members;
    std::string patch_workflow;            // where the replacement lives
    std::string patch_block_id;
    std::string kb_entry;                  // equivalent entry backing the proposal
    std::optional<std::string> binding_id; // set for surrogate substitutions
};

struct SubstitutionPlan {
    std::string id;
    std::vector<PlannedSubstitution> substitutions;
    std::map<std::string, double> expected_deltas;
    std::string agent;

    Json to_json() const;
    static SubstitutionPlan from_json(const Json& j);
};

struct AdjudicationRule {
    enum class Statistic { Mean, Max };
    int min_samples = 10;
    Statistic statistic = Statistic::Max;
    double tolerance = 0.0;

    static AdjudicationRule from_json(const Json& j);
    Json to_json() const;
};

struct Adjudication {
    bool approved = false;
    std::string reason; // failing clause when rejected
};

// Approves iff the binding's sample count meets min_samples and the chosen
// statistic is within tolerance.
Adjudication prior_adjudicate(const std::string& binding_id, const KnowledgeBase& kb,
                              const AdjudicationRule& rule);

struct AgentOptions {
    double equivalence_threshold = 0.8;
    // Surrogate bindings available to the accuracy agent, with the rule that
    // gates them: binding id -> (block id, expected error stand-in).
    std::vector<std::pair<std::string, std::string>> surrogate_bindings; // (binding, block)
    AdjudicationRule rule;
};

// Predicted cost of running wf with the plan applied. Runtime comes from KB
// mean wall-clock per block member; accuracy-risk from canary samples (or the
// pessimistic default); monetary from runtime at the configured unit price.
double evaluate_plan(const SubstitutionPlan& plan, const WorkflowDescription& wf,
                     const KnowledgeBase& kb, const CostFunction& costfn);

// Built-in proposal agents: a performance agent that picks the fastest
// function-equivalent entry per block, and an accuracy agent that proposes
// only surrogates whose adjudication rule passes.
std::vector<SubstitutionPlan> run_agents(const WorkflowDescription& wf,
                                         const KnowledgeBase& kb, const AgentOptions& options);

enum class SuperintendMode { Pick, Mix };

// Pick: argmin cost over proposals plus the do-nothing baseline, ties to the
// lexicographically smallest plan id. Mix: greedy per-block assembly of the
// cheapest substitutions, falling back to the pick winner when not cheaper.
SubstitutionPlan superintend(const std::vector<SubstitutionPlan>& proposals,
                             const WorkflowDescription& wf, const KnowledgeBase& kb,
                             const CostFunction& costfn, SuperintendMode mode);

} // namespace awf
