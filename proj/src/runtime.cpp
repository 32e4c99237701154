#include "awf/runtime.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "awf/digest.hpp"
#include "awf/errors.hpp"
#include "awf/subprocess.hpp"
#include "awf/substitution.hpp"
#include "awf/util.hpp"
#include "awf/version.hpp"

namespace awf {

Json RunReport::to_json() const {
    Json jn = Json::object();
    for (const auto& [name, r] : nodes) {
        Json j{{"state", r.state},
               {"wall_seconds", r.wall_seconds},
               {"attempts", r.attempts},
               {"outputs", Json(r.output_digests)},
               {"started_at", r.started_at},
               {"finished_at", r.finished_at}};
        if (!r.result_dir.empty()) j["result_dir"] = r.result_dir.string();
        if (!r.memoized_from.empty()) j["memoized_from"] = r.memoized_from;
        if (r.degraded_hit) j["degraded_hit"] = true;
        if (!r.error.empty()) j["error"] = r.error;
        jn[name] = j;
    }
    Json subs = Json::array();
    for (const auto& s : substitutions) {
        subs.push_back(Json{{"binding", s.binding_id}, {"detail", s.detail}});
    }
    return Json{{"version", kVersion},
                {"run_id", run_id},
                {"workflow", workflow},
                {"run_dir", run_dir.string()},
                {"nodes", jn},
                {"totals", Json{{"wall_seconds", wall_seconds},
                                {"memo_hits", memo_hits},
                                {"samples_recorded", samples_recorded}}},
                {"substitutions", subs},
                {"warnings", warnings},
                {"success", success}};
}

SurrogateBinding SurrogateBinding::from_json(const Json& j) {
    SurrogateBinding b;
    b.id = j.value("id", std::string());
    b.nodes = j.value("nodes", std::vector<std::string>{});
    b.patch_dir = j.value("patch", std::string());
    b.comparator = j.value("comparator", std::vector<std::string>{});
    b.mode = j.value("mode", std::string("canary"));
    if (b.id.empty()) throw Error("surrogate binding requires an id");
    return b;
}

Json SurrogateBinding::to_json() const {
    return Json{{"id", id},
                {"nodes", nodes},
                {"patch", patch_dir.string()},
                {"comparator", comparator},
                {"mode", mode}};
}

std::vector<SurrogateBinding> load_bindings(const std::filesystem::path& path) {
    const Json doc = Json::parse(read_text_file(path));
    std::vector<SurrogateBinding> out;
    for (const auto& j : doc) out.push_back(SurrogateBinding::from_json(j));
    return out;
}

// ---------------------------------------------------------------------------
// Memoization primitives
// ---------------------------------------------------------------------------

MemoCheck memoize_check(const WorkflowDescription& wf, const std::string& node,
                        KnowledgeBase& kb) {
    MemoCheck check;
    try {
        check.hash = interface_hash(wf, node);
        if (auto record = kb.lookup_execution(check.hash.hex)) {
            check.hit = true;
            check.record = *record;
        }
    } catch (const Error&) {
        check.hit = false; // KB or hashing trouble degrades to a miss
    }
    return check;
}

std::vector<std::filesystem::path> restore_outputs(const ExecutionRecord& record,
                                                   const WorkflowDescription& wf,
                                                   const std::string& node,
                                                   const std::filesystem::path& sandbox,
                                                   const KnowledgeBase& kb) {
    const ComponentNode* decl = wf.find_node(node);
    std::filesystem::create_directories(sandbox);
    std::vector<std::filesystem::path> restored;
    for (const auto& [output, digest] : record.output_digests) {
        if (!kb.has_object(digest)) {
            throw KbError("missing blob " + digest + " for output '" + output + "'");
        }
        std::string rel = output;
        if (decl) {
            if (const OutputDecl* d = decl->find_output(output)) rel = d->path;
        }
        const auto target = sandbox / rel;
        if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
        std::filesystem::copy_file(kb.object_path(digest), target,
                                   std::filesystem::copy_options::overwrite_existing);
        if (sha256_file(target) != digest) {
            throw KbError("digest mismatch restoring output '" + output + "'");
        }
        restored.push_back(target);
    }
    return restored;
}

// ---------------------------------------------------------------------------
// Executor
// ---------------------------------------------------------------------------

namespace {

struct NodePlan {
    const ComponentNode* node = nullptr;
    std::vector<std::string> producers; // distinct
    std::vector<std::string> consumers;
};

std::string expand_tokens(const WorkflowDescription& wf, const std::string& text) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const auto start = text.find("{{ref:", pos);
        if (start == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        const auto end = text.find("}}", start);
        if (end == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        out += text.substr(pos, start - pos);
        const auto tok = parse_ref_token(text.substr(start, end + 2 - start));
        if (tok) {
            // Tokens expand to the producer output's declared relative path,
            // which is where the file is materialized in the sandbox.
            std::string rel = tok->output;
            if (const ComponentNode* producer = wf.find_node(tok->node)) {
                if (const OutputDecl* decl = producer->find_output(tok->output)) {
                    rel = decl->path;
                }
            }
            out += rel;
        } else {
            out += text.substr(start, end + 2 - start);
        }
        pos = end + 2;
    }
}

class Executor {
public:
    Executor(const WorkflowDescription& wf, const RunOptions& options)
        : wf_(wf), options_(options) {}

    RunReport run() {
        if (!parameters_resolved(wf_)) {
            throw ValidationError("execute requires a parameter-resolved workflow");
        }
        validate_workflow(wf_);

        report_.run_id = options_.run_id.empty()
                             ? now_iso8601() + "-" + random_hex(4)
                             : options_.run_id;
        // ':' is awkward in paths
        std::replace(report_.run_id.begin(), report_.run_id.end(), ':', '-');
        report_.workflow = wf_.name;
        report_.run_dir = options_.work_dir / report_.run_id;
        std::filesystem::create_directories(report_.run_dir);

        kb_ = options_.kb;
        memoize_ = options_.memoize && kb_ != nullptr;
        if (options_.memoize && kb_ == nullptr) {
            report_.warnings.push_back("knowledge base unavailable; memoization disabled");
        }
        if (memoize_) {
            try {
                hashes_ = interface_hash_all(wf_);
            } catch (const Error& e) {
                report_.warnings.push_back(std::string("hashing failed (") + e.what() +
                                           "); memoization disabled");
                memoize_ = false;
            }
        }

        for (const auto& node : wf_.nodes) {
            NodePlan plan;
            plan.node = &node;
            plans_[node.name] = plan;
            states_[node.name] = State::Pending;
        }
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& edge : dependency_graph(wf_)) {
            if (seen.insert({edge.producer, edge.consumer}).second) {
                plans_[edge.consumer].producers.push_back(edge.producer);
                plans_[edge.producer].consumers.push_back(edge.consumer);
            }
        }

        const double t0 = now_epoch_seconds();
        {
            std::unique_lock lock(mutex_);
            for (const auto& node : wf_.nodes) {
                if (plans_[node.name].producers.empty()) ready_.push_back(node.name);
            }
        }
        const int workers = std::max(1, options_.max_parallel);
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int i = 0; i < workers; ++i) {
            pool.emplace_back([this] { worker_loop(); });
        }
        for (auto& t : pool) t.join();
        report_.wall_seconds = now_epoch_seconds() - t0;

        bool ok = true;
        for (const auto& [name, state] : states_) {
            if (state == State::Failed) ok = false;
            if (state == State::Pending && !report_.nodes.count(name)) {
                NodeResult r;
                r.state = "skipped";
                r.error = "never became ready";
                report_.nodes[name] = r;
            }
        }
        report_.success = ok;
        write_text_file(report_.run_dir / "report.json", report_.to_json().dump(2) + "\n");
        return report_;
    }

private:
    enum class State { Pending, Running, Succeeded, Memoized, Failed, Skipped };

    void worker_loop() {
        while (true) {
            std::string name;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return !ready_.empty() || done_locked(); });
                if (ready_.empty()) return;
                name = ready_.front();
                ready_.erase(ready_.begin());
                states_[name] = State::Running;
                ++running_;
            }
            NodeResult result = run_node(name);
            {
                std::unique_lock lock(mutex_);
                --running_;
                const State state = result.state == "succeeded"   ? State::Succeeded
                                    : result.state == "memoized" ? State::Memoized
                                                                  : State::Failed;
                states_[name] = state;
                if (state == State::Memoized) ++report_.memo_hits;
                report_.nodes[name] = result;
                if (state == State::Failed) {
                    skip_downstream_locked(name);
                } else {
                    for (const auto& consumer : plans_[name].consumers) {
                        if (states_[consumer] == State::Pending && ready_locked(consumer)) {
                            ready_.push_back(consumer);
                        }
                    }
                }
                cv_.notify_all();
            }
        }
    }

    bool ready_locked(const std::string& name) {
        for (const auto& producer : plans_[name].producers) {
            const State s = states_[producer];
            if (s != State::Succeeded && s != State::Memoized) return false;
        }
        // not already queued
        return std::find(ready_.begin(), ready_.end(), name) == ready_.end();
    }

    // Nothing queued and nothing running: no state can change anymore.
    bool done_locked() const { return running_ == 0 && ready_.empty(); }

    void skip_downstream_locked(const std::string& failed) {
        std::vector<std::string> stack{failed};
        while (!stack.empty()) {
            const std::string name = stack.back();
            stack.pop_back();
            for (const auto& consumer : plans_[name].consumers) {
                if (states_[consumer] == State::Pending) {
                    states_[consumer] = State::Skipped;
                    NodeResult r;
                    r.state = "skipped";
                    r.error = "upstream failure: " + failed;
                    report_.nodes[consumer] = r;
                    stack.push_back(consumer);
                }
            }
        }
    }

    NodeResult run_node(const std::string& name) {
        NodeResult result;
        result.started_at = now_epoch_seconds();
        const ComponentNode& node = *plans_[name].node;

        if (memoize_) {
            const std::string hash = hashes_.at(name).hex;
            std::optional<ExecutionRecord> record;
            try {
                record = kb_->lookup_execution(hash);
            } catch (const Error&) {
                record.reset(); // degrade to a miss
            }
            if (record) {
                const auto sandbox = report_.run_dir / name / "memo";
                try {
                    restore_outputs(*record, wf_, name, sandbox, *kb_);
                    result.state = "memoized";
                    result.attempts = 0;
                    result.memoized_from = hash;
                    result.result_dir = sandbox;
                    result.output_digests = record->output_digests;
                    result.finished_at = now_epoch_seconds();
                    result.wall_seconds = result.finished_at - result.started_at;
                    return result;
                } catch (const KbError& e) {
                    result.degraded_hit = true;
                    std::unique_lock lock(warn_mutex_);
                    report_.warnings.push_back("memo hit for " + name +
                                               " degraded: " + e.what());
                }
            }
        }

        const int attempts_allowed = 1 + std::max(0, options_.restart_limit);
        for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
            result.attempts = attempt + 1;
            const auto sandbox =
                report_.run_dir / name / ("attempt-" + std::to_string(attempt));
            std::string error;
            bool retryable = true;
            const double t0 = now_epoch_seconds();
            const bool ok = run_attempt(node, sandbox, error, result, retryable);
            result.wall_seconds = now_epoch_seconds() - t0;
            if (ok) {
                result.state = "succeeded";
                result.result_dir = sandbox;
                result.error.clear();
                if (memoize_ && kb_->writable()) {
                    record_success(node, result);
                }
                result.finished_at = now_epoch_seconds();
                return result;
            }
            result.error = error;
            if (!retryable) break;
        }
        result.state = "failed";
        result.finished_at = now_epoch_seconds();
        return result;
    }

    // Materializes inputs, launches the task, collects declared outputs.
    // Only exit-code failures are retryable.
    bool run_attempt(const ComponentNode& node, const std::filesystem::path& sandbox,
                     std::string& error, NodeResult& result, bool& retryable) {
        retryable = true;
        std::filesystem::create_directories(sandbox);
        try {
            for (const auto& binding : node.inputs) {
                const auto target = sandbox / binding.name;
                if (target.has_parent_path()) {
                    std::filesystem::create_directories(target.parent_path());
                }
                std::visit(
                    [&](const auto& src) {
                        using T = std::decay_t<decltype(src)>;
                        if constexpr (std::is_same_v<T, LiteralFileSource>) {
                            std::filesystem::path from(src.path);
                            if (from.is_relative() && !wf_.base_dir.empty()) {
                                from = wf_.base_dir / from;
                            }
                            if (!std::filesystem::exists(from)) {
                                retryable = false;
                                throw ExecError("literal input missing: " + src.path);
                            }
                            std::filesystem::copy_file(
                                from, target,
                                std::filesystem::copy_options::overwrite_existing);
                        } else if constexpr (std::is_same_v<T, ParameterSource>) {
                            write_text_file(target, src.value);
                        } else {
                            materialize_reference(src.node, src.output, target);
                        }
                    },
                    binding.source);
            }
            // argument-token references materialize under the producer's path
            std::set<std::pair<std::string, std::string>> seen;
            for (const auto& edge : dependency_graph(wf_)) {
                if (edge.consumer != node.name || edge.input.rfind("arg:", 0) != 0) continue;
                if (!seen.insert({edge.producer, edge.output}).second) continue;
                std::string rel = edge.output;
                if (const ComponentNode* producer = wf_.find_node(edge.producer)) {
                    if (const OutputDecl* decl = producer->find_output(edge.output)) {
                        rel = decl->path;
                    }
                }
                const auto target = sandbox / rel;
                if (target.has_parent_path()) {
                    std::filesystem::create_directories(target.parent_path());
                }
                materialize_reference(edge.producer, edge.output, target);
            }
        } catch (const Error& e) {
            error = e.what();
            return false;
        }

        std::vector<std::string> argv{expand_tokens(wf_, node.command.executable)};
        for (const auto& arg : node.command.arguments) {
            argv.push_back(expand_tokens(wf_, arg));
        }
        std::map<std::string, std::string> env;
        for (const auto& [k, v] : node.command.environment) {
            env[k] = expand_tokens(wf_, v);
        }
        const ProcessResult proc = run_process(argv, env, sandbox, sandbox / "stdout.log",
                                               sandbox / "stderr.log");
        if (!proc.launched) {
            retryable = false;
            error = "launch failed: " + proc.error;
            return false;
        }
        if (proc.exit_code != 0) {
            error = "exit code " + std::to_string(proc.exit_code) + " (logs: " +
                    (sandbox / "stderr.log").string() + ")";
            return false;
        }
        result.output_digests.clear();
        for (const auto& decl : node.outputs) {
            const auto produced = sandbox / decl.path;
            if (!std::filesystem::exists(produced)) {
                error = "declared output missing: " + decl.path;
                return false;
            }
            result.output_digests[decl.name] = sha256_file(produced);
        }
        return true;
    }

    void materialize_reference(const std::string& producer, const std::string& output,
                               const std::filesystem::path& target) {
        NodeResult producer_result;
        {
            std::unique_lock lock(mutex_);
            auto it = report_.nodes.find(producer);
            if (it == report_.nodes.end()) {
                throw ExecError("producer '" + producer + "' has no result");
            }
            producer_result = it->second;
        }
        std::string rel = output;
        if (const ComponentNode* decl = wf_.find_node(producer)) {
            if (const OutputDecl* d = decl->find_output(output)) rel = d->path;
        }
        const auto src = producer_result.result_dir / rel;
        if (!std::filesystem::exists(src)) {
            throw ExecError("producer output missing: " + src.string());
        }
        link_or_copy(src, target);
    }

    void record_success(const ComponentNode& node, const NodeResult& result) {
        try {
            ExecutionRecord record;
            record.interface_hash = hashes_.at(node.name).hex;
            record.workflow_id = wf_.name;
            record.node = node.name;
            record.started_at = now_iso8601();
            record.finished_at = now_iso8601();
            record.exit_code = 0;
            record.output_digests = result.output_digests;
            record.platform = options_.platform;
            record.memoized = false;
            record.wall_seconds = result.wall_seconds;
            std::vector<std::filesystem::path> files;
            for (const auto& decl : node.outputs) {
                files.push_back(result.result_dir / decl.path);
            }
            std::unique_lock lock(kb_mutex_);
            kb_->record_execution(record, files);
        } catch (const Error& e) {
            std::unique_lock lock(warn_mutex_);
            report_.warnings.push_back("failed to record " + node.name + ": " + e.what());
        }
    }

    const WorkflowDescription& wf_;
    const RunOptions& options_;
    RunReport report_;
    KnowledgeBase* kb_ = nullptr;
    bool memoize_ = false;
    std::map<std::string, InterfaceHash> hashes_;
    std::map<std::string, NodePlan> plans_;
    std::map<std::string, State> states_;
    std::vector<std::string> ready_;
    int running_ = 0;
    std::mutex mutex_;
    std::mutex kb_mutex_;
    std::mutex warn_mutex_;
    std::condition_variable cv_;
};

} // namespace

RunReport execute(const WorkflowDescription& wf, const RunOptions& options) {
    Executor executor(wf, options);
    return executor.run();
}

// ---------------------------------------------------------------------------
// Canary and adjudicated execution
// ---------------------------------------------------------------------------

namespace {

// Digest standing in for a sub-graph instance in accuracy samples.
std::string subgraph_instance_hash(const WorkflowDescription& wf,
                                   const std::vector<std::string>& nodes) {
    std::vector<std::string> hashes;
    try {
        const auto all = interface_hash_all(wf);
        for (const auto& n : nodes) {
            if (all.count(n)) hashes.push_back(all.at(n).hex);
        }
    } catch (const Error&) {
        for (const auto& n : nodes) hashes.push_back(sha256_hex(n));
    }
    std::sort(hashes.begin(), hashes.end());
    Sha256 h;
    for (const auto& x : hashes) {
        h.update(x);
        h.update("\n");
    }
    return h.hex_digest();
}

void copy_outputs_to(const WorkflowDescription& wf, const RunReport& report,
                     const std::vector<std::string>& nodes,
                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& name : nodes) {
        auto it = report.nodes.find(name);
        if (it == report.nodes.end()) continue;
        const ComponentNode* node = wf.find_node(name);
        if (!node) continue;
        for (const auto& decl : node->outputs) {
            const auto src = it->second.result_dir / decl.path;
            if (!std::filesystem::exists(src)) continue;
            const auto dst = dir / decl.path;
            if (dst.has_parent_path()) std::filesystem::create_directories(dst.parent_path());
            std::filesystem::copy_file(src, dst,
                                       std::filesystem::copy_options::overwrite_existing);
        }
    }
}

} // namespace

RunReport canary_run(const WorkflowDescription& wf,
                     const std::vector<SurrogateBinding>& bindings,
                     const RunOptions& options) {
    // Dry-run splice checks up front; a binding that cannot splice is a
    // configuration error, not a runtime surprise.
    std::map<std::string, Patch> patches;
    std::map<std::string, SpliceMap> splices;
    for (const auto& binding : bindings) {
        Patch patch = Patch::load(binding.patch_dir);
        splices[binding.id] =
            identify_splice_points(wf, patch, options.splice_threshold, false, nullptr);
        patches.emplace(binding.id, std::move(patch));
    }

    RunReport report = execute(wf, options);
    if (!report.success) return report;

    for (const auto& binding : bindings) {
        if (binding.mode != "canary") continue;
        const Patch& patch = patches.at(binding.id);
        const SpliceMap& splice = splices.at(binding.id);
        const auto shadow = report.run_dir / "canary" / binding.id;
        std::filesystem::create_directories(shadow);

        // Feed the surrogate the same spliced inputs the physical path saw.
        WorkflowDescription surrogate = patch.graph;
        surrogate.name = wf.name + "-surrogate-" + binding.id;
        surrogate.base_dir = shadow;
        bool inputs_ok = true;
        for (const auto& [descriptor, point] : splice.inputs) {
            const auto& [producer, output] = point;
            auto it = report.nodes.find(producer);
            if (it == report.nodes.end()) {
                inputs_ok = false;
                break;
            }
            std::string rel = output;
            if (const ComponentNode* p = wf.find_node(producer)) {
                if (const OutputDecl* d = p->find_output(output)) rel = d->path;
            }
            const auto src = it->second.result_dir / rel;
            if (!std::filesystem::exists(src)) {
                inputs_ok = false;
                break;
            }
            std::filesystem::copy_file(src, shadow / descriptor,
                                       std::filesystem::copy_options::overwrite_existing);
        }
        if (!inputs_ok) {
            report.warnings.push_back("canary " + binding.id +
                                      ": spliced inputs unavailable, surrogate skipped");
            continue;
        }

        RunOptions shadow_options = options;
        shadow_options.work_dir = shadow / "runs";
        shadow_options.run_id.clear();
        shadow_options.kb = nullptr; // surrogate failure must not disturb the KB path
        shadow_options.memoize = false;
        RunReport surrogate_report;
        try {
            surrogate_report = execute(surrogate, shadow_options);
        } catch (const Error& e) {
            report.warnings.push_back("canary " + binding.id + ": surrogate error: " +
                                      e.what());
            continue;
        }
        if (!surrogate_report.success) {
            report.warnings.push_back("canary " + binding.id + ": surrogate failed");
            continue;
        }

        const auto phys_dir = shadow / "physical-outputs";
        const auto surr_dir = shadow / "surrogate-outputs";
        copy_outputs_to(wf, report, binding.nodes, phys_dir);
        std::vector<std::string> surrogate_nodes;
        for (const auto& n : surrogate.nodes) surrogate_nodes.push_back(n.name);
        copy_outputs_to(surrogate, surrogate_report, surrogate_nodes, surr_dir);

        std::vector<std::string> argv = binding.comparator;
        argv.push_back(std::filesystem::absolute(phys_dir).string());
        argv.push_back(std::filesystem::absolute(surr_dir).string());
        const CaptureResult cmp = run_capture(argv, shadow);
        if (!cmp.launched || cmp.exit_code != 0) {
            report.warnings.push_back("canary " + binding.id + ": comparator failed");
            continue;
        }
        double error_value = 0.0;
        try {
            std::size_t used = 0;
            error_value = std::stod(cmp.output, &used);
        } catch (const std::exception&) {
            report.warnings.push_back("canary " + binding.id +
                                      ": comparator output not numeric, sample discarded");
            continue;
        }
        if (!(error_value >= 0.0)) {
            report.warnings.push_back("canary " + binding.id +
                                      ": comparator output not a valid error, discarded");
            continue;
        }

        if (options.kb && options.kb->writable()) {
            AccuracySample sample;
            sample.binding_id = binding.id;
            sample.physical_hash = subgraph_instance_hash(wf, binding.nodes);
            sample.surrogate_hash = subgraph_instance_hash(surrogate, surrogate_nodes);
            sample.error = error_value;
            sample.comparator = binding.comparator.empty() ? "" : binding.comparator.front();
            sample.recorded_at = now_iso8601();
            options.kb->add_sample(sample);
            ++report.samples_recorded;
        } else {
            report.warnings.push_back("canary " + binding.id +
                                      ": no writable KB, sample dropped");
        }
    }
    write_text_file(report.run_dir / "report.json", report.to_json().dump(2) + "\n");
    return report;
}

RunReport adjudicated_run(const WorkflowDescription& wf,
                          const std::vector<SurrogateBinding>& bindings,
                          const AdjudicationRule& rule, const RunOptions& options) {
    if (!options.kb) throw ExecError("adjudicated run requires a knowledge base");

    WorkflowDescription current = wf;
    std::vector<AppliedSubstitution> applied;
    std::vector<std::string> warnings;
    std::vector<SurrogateBinding> canaries;

    for (const auto& binding : bindings) {
        const Adjudication verdict = prior_adjudicate(binding.id, *options.kb, rule);
        if (!verdict.approved) {
            warnings.push_back("binding " + binding.id + " not substituted: " + verdict.reason);
            if (binding.mode == "canary") canaries.push_back(binding);
            continue;
        }
        try {
            const Patch patch = Patch::load(binding.patch_dir);
            const SpliceMap splice =
                identify_splice_points(current, patch, options.splice_threshold);
            auto [next, conflicts] = apply_patch(current, patch, splice, false);
            if (!conflicts.empty()) {
                std::string detail = "patch conflicts:";
                for (const auto& c : conflicts) {
                    detail += " " + conflict_kind_name(c.kind) + "@" + c.locus;
                }
                warnings.push_back("binding " + binding.id + " fell back to physical (" +
                                   detail + ")");
                if (binding.mode == "canary") canaries.push_back(binding);
                continue;
            }
            current = std::move(next);
            applied.push_back(AppliedSubstitution{
                binding.id, "surrogate substituted for [" +
                                [&] {
                                    std::string s;
                                    for (const auto& n : binding.nodes) {
                                        if (!s.empty()) s += ",";
                                        s += n;
                                    }
                                    return s;
                                }() +
                                "]"});
        } catch (const SpliceError& e) {
            warnings.push_back("binding " + binding.id + " fell back to physical (" +
                               e.kind() + ": " + e.what() + ")");
            if (binding.mode == "canary") canaries.push_back(binding);
        }
    }

    RunReport report = canaries.empty() ? execute(current, options)
                                        : canary_run(current, canaries, options);
    for (const auto& s : applied) report.substitutions.push_back(s);
    for (const auto& w : warnings) report.warnings.push_back(w);
    write_text_file(report.run_dir / "report.json", report.to_json().dump(2) + "\n");
    return report;
}

} // namespace awf
