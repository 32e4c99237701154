#include "awf/policy.hpp"

#include <algorithm>
#include <cmath>

#include "awf/digest.hpp"
#include "awf/errors.hpp"

namespace awf {

CostFunction CostFunction::from_json(const Json& j) {
    CostFunction fn;
    for (const char* key : {"runtime", "accuracy-risk", "monetary"}) {
        if (j.contains(key)) fn.weights[key] = j[key].get<double>();
    }
    if (j.contains("accuracy_tolerance")) fn.accuracy_tolerance = j["accuracy_tolerance"];
    if (j.contains("unit_cost_per_second")) fn.unit_cost_per_second = j["unit_cost_per_second"];
    if (j.contains("missing_accuracy_default")) {
        fn.missing_accuracy_default = j["missing_accuracy_default"];
    }
    bool positive = false;
    for (const auto& [k, w] : fn.weights) {
        if (w < 0.0) throw Error("cost weights must be non-negative");
        if (w > 0.0) positive = true;
    }
    if (!positive) throw Error("cost function needs at least one positive weight");
    return fn;
}

Json SubstitutionPlan::to_json() const {
    Json subs = Json::array();
    for (const auto& s : substitutions) {
        Json js{{"block", s.block_id},
                {"members", s.block_members},
                {"patch", Json{{"workflow", s.patch_workflow}, {"block", s.patch_block_id}}},
                {"entry", s.kb_entry}};
        if (s.binding_id) js["binding"] = *s.binding_id;
        subs.push_back(js);
    }
    return Json{{"id", id},
                {"agent", agent},
                {"substitutions", subs},
                {"expected_deltas", Json(expected_deltas)}};
}

SubstitutionPlan SubstitutionPlan::from_json(const Json& j) {
    SubstitutionPlan plan;
    plan.id = j.value("id", std::string());
    plan.agent = j.value("agent", std::string());
    if (j.contains("substitutions")) {
        for (const auto& js : j["substitutions"]) {
            PlannedSubstitution s;
            s.block_id = js.value("block", std::string());
            s.block_members = js.value("members", std::vector<std::string>{});
            if (js.contains("patch")) {
                s.patch_workflow = js["patch"].value("workflow", std::string());
                s.patch_block_id = js["patch"].value("block", std::string());
            }
            s.kb_entry = js.value("entry", std::string());
            if (js.contains("binding")) s.binding_id = js["binding"].get<std::string>();
            plan.substitutions.push_back(std::move(s));
        }
    }
    if (j.contains("expected_deltas")) {
        for (auto it = j["expected_deltas"].begin(); it != j["expected_deltas"].end(); ++it) {
            plan.expected_deltas[it.key()] = it.value().get<double>();
        }
    }
    return plan;
}

AdjudicationRule AdjudicationRule::from_json(const Json& j) {
    AdjudicationRule rule;
    rule.min_samples = j.value("min_samples", 10);
    rule.tolerance = j.value("tolerance", 0.0);
    const std::string stat = j.value("statistic", std::string("max"));
    rule.statistic = stat == "mean" ? Statistic::Mean : Statistic::Max;
    if (rule.tolerance < 0.0) throw Error("adjudication tolerance must be >= 0");
    return rule;
}

Json AdjudicationRule::to_json() const {
    return Json{{"min_samples", min_samples},
                {"statistic", statistic == Statistic::Mean ? "mean" : "max"},
                {"tolerance", tolerance}};
}

Adjudication prior_adjudicate(const std::string& binding_id, const KnowledgeBase& kb,
                              const AdjudicationRule& rule) {
    const AccuracyStats stats = kb.accuracy_stats(binding_id);
    if (stats.count < std::size_t(std::max(rule.min_samples, 0))) {
        return Adjudication{false, "min-samples: have " + std::to_string(stats.count) +
                                       ", need " + std::to_string(rule.min_samples)};
    }
    const double value =
        rule.statistic == AdjudicationRule::Statistic::Mean ? stats.mean_error
                                                            : stats.max_error;
    if (value > rule.tolerance) {
        const char* name =
            rule.statistic == AdjudicationRule::Statistic::Mean ? "mean" : "max";
        return Adjudication{false, std::string(name) + "-error " + std::to_string(value) +
                                       " exceeds tolerance " +
                                       std::to_string(rule.tolerance)};
    }
    return Adjudication{true, ""};
}

// ---------------------------------------------------------------------------
// Cost evaluation
// ---------------------------------------------------------------------------

namespace {

// KB-predicted wall seconds for a set of node interface hashes. Nodes with no
// history contribute `fallback` (negative fallback means "throw").
double runtime_for_hashes(const std::vector<std::string>& hashes, const KnowledgeBase& kb,
                          double fallback, const std::string& what) {
    double total = 0.0;
    for (const auto& hash : hashes) {
        if (auto mean = kb.mean_wall_seconds(hash)) {
            total += *mean;
        } else if (fallback < 0.0) {
            throw Error("no runtime data for " + what);
        } else {
            total += fallback;
        }
    }
    return total;
}

struct PlanContext {
    QuotientGraph quotient;
    std::map<std::string, InterfaceHash> hashes;
};

PlanContext plan_context(const WorkflowDescription& wf) {
    PlanContext ctx;
    ctx.quotient = factor(wf);
    ctx.hashes = interface_hash_all(wf);
    return ctx;
}

double block_runtime(const Block& block, const PlanContext& ctx, const KnowledgeBase& kb) {
    std::vector<std::string> hashes;
    for (const auto& member : block.members) hashes.push_back(ctx.hashes.at(member).hex);
    return runtime_for_hashes(hashes, kb, 0.0, "block " + block.id);
}

double entry_runtime(const std::string& entry_id, const KnowledgeBase& kb, bool required) {
    const KbNodeEntry* entry = kb.find_entry(entry_id);
    if (!entry) throw Error("unknown KB entry '" + entry_id + "'");
    return runtime_for_hashes(entry->node_hashes, kb, required ? -1.0 : 0.0,
                              "entry " + entry_id);
}

} // namespace

double evaluate_plan(const SubstitutionPlan& plan, const WorkflowDescription& wf,
                     const KnowledgeBase& kb, const CostFunction& costfn) {
    const PlanContext ctx = plan_context(wf);
    auto weight = [&](const char* key) {
        auto it = costfn.weights.find(key);
        return it == costfn.weights.end() ? 0.0 : it->second;
    };
    const bool runtime_weighted = weight("runtime") > 0.0 || weight("monetary") > 0.0;

    std::map<std::string, const PlannedSubstitution*> by_block;
    for (const auto& s : plan.substitutions) {
        if (!by_block.emplace(s.block_id, &s).second) {
            throw Error("plan substitutes block '" + s.block_id + "' twice");
        }
    }

    double baseline_runtime = 0.0;
    double predicted_runtime = 0.0;
    for (const auto& block : ctx.quotient.blocks) {
        const double original = block_runtime(block, ctx, kb);
        baseline_runtime += original;
        auto it = by_block.find(block.id);
        if (it == by_block.end()) {
            predicted_runtime += original;
        } else if (!it->second->kb_entry.empty()) {
            predicted_runtime += entry_runtime(it->second->kb_entry, kb, runtime_weighted);
        } else {
            // surrogate with no timing history yet: assume the original's time
            predicted_runtime += original;
        }
        by_block.erase(block.id);
    }
    if (!by_block.empty()) {
        throw Error("plan references unknown block '" + by_block.begin()->first + "'");
    }

    double accuracy_risk = 0.0;
    for (const auto& s : plan.substitutions) {
        if (!s.binding_id) continue;
        const AccuracyStats stats = kb.accuracy_stats(*s.binding_id);
        accuracy_risk += stats.count > 0 ? stats.mean_error : costfn.missing_accuracy_default;
    }

    const double runtime_norm =
        baseline_runtime > 0.0 ? predicted_runtime / baseline_runtime : predicted_runtime;
    const double accuracy_norm =
        costfn.accuracy_tolerance > 0.0 ? accuracy_risk / costfn.accuracy_tolerance
                                        : accuracy_risk;
    const double baseline_money = baseline_runtime * costfn.unit_cost_per_second;
    const double predicted_money = predicted_runtime * costfn.unit_cost_per_second;
    const double monetary_norm =
        baseline_money > 0.0 ? predicted_money / baseline_money : predicted_money;

    return weight("runtime") * runtime_norm + weight("accuracy-risk") * accuracy_norm +
           weight("monetary") * monetary_norm;
}

// ---------------------------------------------------------------------------
// Agents
// ---------------------------------------------------------------------------

namespace {

std::string plan_id_for(const std::string& agent, const Json& subs) {
    return agent + "-" + sha256_hex(subs.dump()).substr(0, 12);
}

} // namespace

std::vector<SubstitutionPlan> run_agents(const WorkflowDescription& wf,
                                         const KnowledgeBase& kb,
                                         const AgentOptions& options) {
    std::vector<SubstitutionPlan> plans;
    const PlanContext ctx = plan_context(wf);

    // Performance agent: per block, the function-equivalent entry with the
    // lowest recorded mean wall time.
    SubstitutionPlan perf;
    perf.agent = "performance";
    double runtime_delta = 0.0;
    for (const auto& block : ctx.quotient.blocks) {
        const SubgraphView view = make_subgraph(wf, block.members);
        const KbNodeEntry self = build_entry(view, wf.name);
        if (!kb.find_entry(self.id)) continue; // host not registered; nothing to compare
        const double original = block_runtime(block, ctx, kb);

        std::string best_entry;
        double best_runtime = original;
        for (const auto& [other, score] :
             kb.find_equivalents(self.id, "f", options.equivalence_threshold, false)) {
            const KbNodeEntry* entry = kb.find_entry(other);
            if (!entry) continue;
            bool timed = false;
            double total = 0.0;
            for (const auto& hash : entry->node_hashes) {
                if (auto mean = kb.mean_wall_seconds(hash)) {
                    total += *mean;
                    timed = true;
                } else {
                    timed = false;
                    break;
                }
            }
            if (!timed) continue;
            if (total < best_runtime) {
                best_runtime = total;
                best_entry = other;
            }
        }
        if (!best_entry.empty()) {
            const KbNodeEntry* entry = kb.find_entry(best_entry);
            PlannedSubstitution s;
            s.block_id = block.id;
            s.block_members = block.members;
            s.kb_entry = best_entry;
            s.patch_workflow = entry->source_workflow;
            s.patch_block_id = best_entry;
            perf.substitutions.push_back(std::move(s));
            runtime_delta += best_runtime - original;
        }
    }
    if (!perf.substitutions.empty()) {
        perf.expected_deltas["runtime"] = runtime_delta;
        Json subs = Json::array();
        for (const auto& s : perf.substitutions) subs.push_back(s.block_id + ":" + s.kb_entry);
        perf.id = plan_id_for("perf", subs);
        plans.push_back(std::move(perf));
    }

    // Accuracy agent: surrogates whose prior adjudication passes.
    SubstitutionPlan acc;
    acc.agent = "accuracy";
    double risk_delta = 0.0;
    for (const auto& [binding_id, block_id] : options.surrogate_bindings) {
        const Adjudication verdict = prior_adjudicate(binding_id, kb, options.rule);
        if (!verdict.approved) continue;
        const Block* block = nullptr;
        for (const auto& b : ctx.quotient.blocks) {
            if (b.id == block_id) block = &b;
        }
        if (!block) continue;
        PlannedSubstitution s;
        s.block_id = block->id;
        s.block_members = block->members;
        s.binding_id = binding_id;
        acc.substitutions.push_back(std::move(s));
        risk_delta += kb.accuracy_stats(binding_id).mean_error;
    }
    if (!acc.substitutions.empty()) {
        acc.expected_deltas["accuracy-risk"] = risk_delta;
        Json subs = Json::array();
        for (const auto& s : acc.substitutions) {
            subs.push_back(s.block_id + ":" + s.binding_id.value_or(""));
        }
        acc.id = plan_id_for("accuracy", subs);
        plans.push_back(std::move(acc));
    }
    return plans;
}

// ---------------------------------------------------------------------------
// Superintendent
// ---------------------------------------------------------------------------

SubstitutionPlan superintend(const std::vector<SubstitutionPlan>& proposals,
                             const WorkflowDescription& wf, const KnowledgeBase& kb,
                             const CostFunction& costfn, SuperintendMode mode) {
    SubstitutionPlan baseline;
    baseline.id = "baseline";
    baseline.agent = "superintendent";

    auto better = [](double cost_a, const std::string& id_a, double cost_b,
                     const std::string& id_b) {
        if (cost_a != cost_b) return cost_a < cost_b;
        return id_a < id_b;
    };

    const SubstitutionPlan* best = &baseline;
    double best_cost = evaluate_plan(baseline, wf, kb, costfn);
    for (const auto& plan : proposals) {
        const double cost = evaluate_plan(plan, wf, kb, costfn);
        if (better(cost, plan.id, best_cost, best->id)) {
            best = &plan;
            best_cost = cost;
        }
    }
    if (mode == SuperintendMode::Pick) return *best;

    // Mix: per block, the substitution whose marginal cost is lowest.
    // Substitutions for distinct blocks are disjoint by the factoring
    // partition, so per-block choices combine freely.
    const QuotientGraph quotient = factor(wf);
    SubstitutionPlan mixed;
    mixed.agent = "superintendent-mix";
    for (const auto& block : quotient.blocks) {
        const PlannedSubstitution* chosen = nullptr;
        double chosen_cost = 0.0;
        for (const auto& plan : proposals) {
            for (const auto& s : plan.substitutions) {
                if (s.block_id != block.id) continue;
                SubstitutionPlan probe;
                probe.id = "probe";
                probe.substitutions = {s};
                const double cost = evaluate_plan(probe, wf, kb, costfn);
                if (!chosen || cost < chosen_cost) {
                    chosen = &s;
                    chosen_cost = cost;
                }
            }
        }
        if (chosen) {
            SubstitutionPlan probe;
            probe.id = "probe";
            probe.substitutions = {*chosen};
            const double with = evaluate_plan(probe, wf, kb, costfn);
            const double without = evaluate_plan(baseline, wf, kb, costfn);
            if (with < without) mixed.substitutions.push_back(*chosen);
        }
    }
    {
        // disjointness check: block member sets must not overlap
        std::set<std::string> touched;
        for (const auto& s : mixed.substitutions) {
            for (const auto& m : s.block_members) {
                if (!touched.insert(m).second) {
                    return *best; // overlapping: fall back to pick winner
                }
            }
        }
    }
    Json subs = Json::array();
    for (const auto& s : mixed.substitutions) subs.push_back(s.block_id + ":" + s.kb_entry);
    mixed.id = plan_id_for("mix", subs);
    const double mixed_cost = evaluate_plan(mixed, wf, kb, costfn);
    if (mixed_cost < best_cost) return mixed;
    return *best;
}

} // namespace awf
