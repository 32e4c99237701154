// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "awf/digest.hpp"
#include "awf/equivalence.hpp"
#include "awf/errors.hpp"
#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"
#include "awf/policy.hpp"
#include "awf/runtime.hpp"
#include "awf/subprocess.hpp"
#include "awf/substitution.hpp"
#include "awf/util.hpp"

using namespace awf;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Scratch {
    std::filesystem::path path;
    Scratch() {
        path = std::filesystem::temp_directory_path() / ("awf-acceptance-" + random_hex(6));
        std::filesystem::create_directories(path);
    }
    ~Scratch() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

Json cli_json(const std::vector<std::string>& args, int* exit_code = nullptr) {
    std::vector<std::string> argv{AWF_CLI_PATH, "--format", "json"};
    argv.insert(argv.end(), args.begin(), args.end());
    const CaptureResult result = run_capture(argv, {});
    if (exit_code) *exit_code = result.exit_code;
    if (!result.launched) throw Error("could not launch CLI: " + result.error);
    if (result.output.empty()) return Json();
    return Json::parse(result.output);
}

int cli_exit(const std::vector<std::string>& args) {
    std::vector<std::string> argv{AWF_CLI_PATH};
    argv.insert(argv.end(), args.begin(), args.end());
    const CaptureResult result = run_capture(argv, {});
    if (!result.launched) throw Error("could not launch CLI: " + result.error);
    return result.exit_code;
}

// ---------------------------------------------------------------------------
// Criterion 1: memoization speedup on the sleep benchmark
// ---------------------------------------------------------------------------

Check criterion_memoization_speedup() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    Scratch scratch;

    WorkflowDescription wf;
    wf.name = "memo-bench";
    for (int i = 1; i <= 8; ++i) {
        ComponentNode node;
        node.name = "c" + std::to_string(i);
        node.command.executable = "/bin/sh";
        if (i == 1) {
            node.command.arguments = {"-c", "sleep 1 && echo stage1 > out.dat"};
        } else {
            node.command.arguments = {"-c", "sleep 1 && cat prev.dat > out.dat"};
            node.inputs.push_back(
                InputBinding{"prev.dat", ReferenceSource{"c" + std::to_string(i - 1), "out"}});
        }
        node.outputs.push_back(OutputDecl{"out", "out.dat"});
        wf.nodes.push_back(node);
    }
    for (int i = 1; i <= 4; ++i) {
        ComponentNode node;
        node.name = "p" + std::to_string(i);
        node.command.executable = "/bin/sh";
        node.command.arguments = {"-c",
                                  "sleep 1 && echo par" + std::to_string(i) + " > out.dat"};
        node.outputs.push_back(OutputDecl{"out", "out.dat"});
        wf.nodes.push_back(node);
    }
    validate_workflow(wf);
    const auto wf_file = scratch.path / "bench.json";
    write_text_file(wf_file, workflow_to_json(wf).dump(2));

    const auto kb_dir = (scratch.path / "kb").string();
    cli_json({"kb", "init", kb_dir});

    int code = 0;
    const Json cold = cli_json({"run", wf_file.string(), "--kb", kb_dir, "--max-parallel",
                                "4", "--work-dir", (scratch.path / "cold").string()},
                               &code);
    check.expect(code == 0, "cold run exit code " + std::to_string(code));
    const Json warm = cli_json({"run", wf_file.string(), "--kb", kb_dir, "--max-parallel",
                                "4", "--work-dir", (scratch.path / "warm").string()},
                               &code);
    check.expect(code == 0, "warm run exit code " + std::to_string(code));

    const double cold_wall = cold["totals"]["wall_seconds"].get<double>();
    const double warm_wall = warm["totals"]["wall_seconds"].get<double>();
    int warm_attempts = 0;
    int warm_memoized = 0;
    for (auto it = warm["nodes"].begin(); it != warm["nodes"].end(); ++it) {
        warm_attempts += it.value()["attempts"].get<int>();
        if (it.value()["state"] == "memoized") ++warm_memoized;
    }
    check.expect(cold_wall >= 8.0, "cold run implausibly fast: " + std::to_string(cold_wall));
    check.expect(warm_wall <= 0.15 * cold_wall,
                 "warm/cold = " + std::to_string(warm_wall / cold_wall));
    check.expect(warm_attempts == 0,
                 "warm task attempts = " + std::to_string(warm_attempts));
    check.expect(warm_memoized == 12, "memoized nodes = " + std::to_string(warm_memoized));
    const double total = seconds_since(start);
    check.expect(total < 30.0, "criterion runtime " + std::to_string(total) + "s");
    if (check.ok) {
        check.detail = "speedup " + std::to_string(cold_wall / warm_wall) + "x, warm attempts 0";
    }
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 2: hash speed on a 100-node workflow with 1 KB literals
// ---------------------------------------------------------------------------

Check criterion_hash_speed() {
    Check check;
    Scratch scratch;
    std::mt19937 rng(99);

    WorkflowDescription wf;
    wf.name = "hash-bench";
    wf.base_dir = scratch.path;
    for (int i = 0; i < 100; ++i) {
        std::string blob(1024, 'x');
        for (auto& c : blob) c = char('a' + rng() % 26);
        const std::string lit = "lit" + std::to_string(i) + ".dat";
        write_text_file(scratch.path / lit, blob);
        ComponentNode node;
        node.name = "n" + std::to_string(i);
        node.command.executable = "/bin/sim";
        node.command.arguments = {"--step", std::to_string(i)};
        node.inputs.push_back(InputBinding{lit, LiteralFileSource{lit}});
        if (i > 0) {
            node.inputs.push_back(InputBinding{
                "in.dat", ReferenceSource{"n" + std::to_string(rng() % i), "out"}});
        }
        node.outputs.push_back(OutputDecl{"out", "out.dat"});
        wf.nodes.push_back(node);
    }
    validate_workflow(wf);

    std::vector<double> per_node;
    for (const auto& node : wf.nodes) {
        const auto t0 = std::chrono::steady_clock::now();
        interface_hash(wf, node.name);
        per_node.push_back(seconds_since(t0) * 1000.0);
    }
    std::sort(per_node.begin(), per_node.end());
    const double median = per_node[per_node.size() / 2];

    const auto t0 = std::chrono::steady_clock::now();
    interface_hash_all(wf);
    const double full = seconds_since(t0);

    check.expect(median < 10.0, "median per-node " + std::to_string(median) + " ms");
    check.expect(full < 2.0, "full workflow " + std::to_string(full) + " s");
    if (check.ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "median %.3f ms/node, full %.3f s", median, full);
        check.detail = buf;
    }
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 3: factoring matches the manifest and composition adds ten
// ---------------------------------------------------------------------------

Check criterion_composition() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    Scratch scratch;
    const std::filesystem::path library = std::filesystem::path(AWF_FIXTURE_DIR) / "library";
    const Json manifest = Json::parse(read_text_file(library / "manifest.json"));

    for (auto it = manifest["files"].begin(); it != manifest["files"].end(); ++it) {
        const Json factored = cli_json({"factor", (library / it.key()).string()});
        std::set<std::vector<std::string>> actual;
        for (const auto& block : factored["blocks"]) {
            std::vector<std::string> members;
            for (const auto& m : block["members"]) members.push_back(m.get<std::string>());
            actual.insert(members);
        }
        std::set<std::vector<std::string>> declared;
        for (const auto& part : it.value()["partition"]) {
            std::vector<std::string> members;
            for (const auto& m : part) members.push_back(m.get<std::string>());
            std::sort(members.begin(), members.end());
            declared.insert(members);
        }
        check.expect(actual == declared, it.key() + " partition mismatch");
    }

    const auto out_dir = scratch.path / "candidates";
    const Json composed =
        cli_json({"compose", "--library", library.string(), "-o", out_dir.string()});
    check.expect(composed["total"].get<int>() == 10,
                 "total candidates = " + composed["total"].dump());
    check.expect(composed["recombinations"].get<int>() == 6,
                 "recombinations = " + composed["recombinations"].dump());
    check.expect(composed["standalone_blocks"].get<int>() == 4,
                 "standalone blocks = " + composed["standalone_blocks"].dump());

    int validated = 0;
    for (const auto& candidate : composed["candidates"]) {
        const auto file = out_dir / candidate["file"].get<std::string>();
        if (cli_exit({"validate", file.string()}) == 0) ++validated;
    }
    check.expect(validated == 10,
                 "only " + std::to_string(validated) + "/10 candidates validate");

    const double total = seconds_since(start);
    check.expect(total < 10.0, "criterion runtime " + std::to_string(total) + "s");
    if (check.ok) check.detail = "10 candidates (6 recombinations + 4 standalone blocks)";
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 4: WL digests split six blocks into 6 command / 3 name classes
// ---------------------------------------------------------------------------

Check criterion_wl_grouping() {
    Check check;
    const std::filesystem::path library = std::filesystem::path(AWF_FIXTURE_DIR) / "library";
    const Json manifest = Json::parse(read_text_file(library / "manifest.json"));

    std::map<std::string, WorkflowDescription> cache;
    std::set<std::string> command_digests;
    std::map<std::string, int> name_classes;
    for (const auto& block : manifest["functional_blocks"]) {
        const std::string file = block["workflow"].get<std::string>();
        if (!cache.count(file)) {
            cache[file] = resolve_parameters(load_workflow_file(library / file), {});
        }
        std::vector<std::string> members;
        for (const auto& m : block["members"]) members.push_back(m.get<std::string>());
        const SubgraphView view = make_subgraph(cache[file], members);
        command_digests.insert(wl_hash(view, WlConfig{3, WlConfig::LabelMode::Command}));
        name_classes[wl_hash(view, WlConfig{3, WlConfig::LabelMode::Name})] += 1;
    }
    check.expect(command_digests.size() == 6,
                 "command-mode classes = " + std::to_string(command_digests.size()));
    check.expect(name_classes.size() == 3,
                 "name-mode classes = " + std::to_string(name_classes.size()));
    for (const auto& [digest, count] : name_classes) {
        check.expect(count == 2, "name class of size " + std::to_string(count));
    }
    if (check.ok) check.detail = "6 command-mode classes, 3 name-mode classes of size 2";
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 5: memoization fidelity under 1000 randomized mutations
// ---------------------------------------------------------------------------

struct FidelityWorkflow {
    WorkflowDescription wf;
    std::vector<std::string> ancestors_of_target; // excluding target
    std::string target;
};

FidelityWorkflow build_fidelity_workflow(std::mt19937& rng,
                                         const std::filesystem::path& dir) {
    FidelityWorkflow out;
    std::uniform_int_distribution<int> node_count(3, 9);
    const int n = node_count(rng);
    out.wf.name = "fidelity";
    out.wf.base_dir = dir;
    for (int i = 0; i < n; ++i) {
        const std::string name = "n" + std::to_string(i);
        const std::string lit = "lit-" + name + ".dat";
        write_text_file(dir / lit, "content-" + name + "-" + std::to_string(rng() % 1000));
        ComponentNode node;
        node.name = name;
        node.command.executable = "/bin/tool" + std::to_string(rng() % 3);
        node.command.arguments = {"--alpha", std::to_string(rng() % 10)};
        node.command.environment["SCRATCH"] = "/tmp/s" + std::to_string(rng() % 5);
        node.inputs.push_back(InputBinding{lit, LiteralFileSource{lit}});
        if (i > 0) {
            node.inputs.push_back(InputBinding{
                "up.dat", ReferenceSource{"n" + std::to_string(int(rng() % i)), "out"}});
        }
        node.outputs.push_back(OutputDecl{"out", "out.dat"});
        node.resources["queue"] = "q" + std::to_string(rng() % 4);
        out.wf.nodes.push_back(node);
    }
    validate_workflow(out.wf);
    out.target = "n" + std::to_string(n - 1);

    // ancestors via reverse reachability
    std::map<std::string, std::vector<std::string>> preds;
    for (const auto& edge : dependency_graph(out.wf)) {
        preds[edge.consumer].push_back(edge.producer);
    }
    std::set<std::string> seen;
    std::vector<std::string> stack{out.target};
    while (!stack.empty()) {
        const auto cur = stack.back();
        stack.pop_back();
        for (const auto& p : preds[cur]) {
            if (seen.insert(p).second) stack.push_back(p);
        }
    }
    out.ancestors_of_target.assign(seen.begin(), seen.end());
    return out;
}

Check criterion_fidelity() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    Scratch scratch;
    std::mt19937 rng(2024);

    int functional_misses = 0;
    int false_negatives = 0;
    const int trials_per_class = 500;

    for (int trial = 0; trial < trials_per_class; ++trial) {
        const auto dir = scratch.path / ("f" + std::to_string(trial));
        std::filesystem::create_directories(dir);
        FidelityWorkflow fx = build_fidelity_workflow(rng, dir);
        const std::string before = interface_hash(fx.wf, fx.target).hex;

        // mutate a functional field, a literal byte, or an upstream field
        const std::string victim =
            fx.ancestors_of_target.empty() || rng() % 2 == 0
                ? fx.target
                : fx.ancestors_of_target[rng() % fx.ancestors_of_target.size()];
        ComponentNode* node = fx.wf.find_node(victim);
        switch (rng() % 5) {
            case 0: { // flip a literal byte
                const auto* lit = std::get_if<LiteralFileSource>(&node->inputs[0].source);
                std::string content = read_text_file(dir / lit->path);
                content[rng() % content.size()] ^= 0x20;
                write_text_file(dir / lit->path, content);
                break;
            }
            case 1: node->command.arguments.push_back("--extra"); break;
            case 2: node->command.executable += "x"; break;
            case 3: node->outputs.push_back(OutputDecl{"aux", "aux.dat"}); break;
            case 4: node->command.arguments[1] = "mutated"; break;
        }
        if (interface_hash(fx.wf, fx.target).hex == before) ++functional_misses;
        std::filesystem::remove_all(dir);
    }

    for (int trial = 0; trial < trials_per_class; ++trial) {
        const auto dir = scratch.path / ("nf" + std::to_string(trial));
        std::filesystem::create_directories(dir);
        FidelityWorkflow fx = build_fidelity_workflow(rng, dir);
        const std::string before = interface_hash(fx.wf, fx.target).hex;

        const std::string victim =
            fx.wf.nodes[rng() % fx.wf.nodes.size()].name;
        ComponentNode* node = fx.wf.find_node(victim);
        switch (rng() % 5) {
            case 0: node->resources["queue"] = "other-" + std::to_string(rng()); break;
            case 1: node->resources.clear(); break;
            case 2: node->annotations["restarts"] = std::to_string(rng() % 9); break;
            case 3: node->resources["platform"] = "cluster-" + std::to_string(rng() % 7); break;
            case 4: node->annotations["note"] = random_hex(6); break;
        }
        if (interface_hash(fx.wf, fx.target).hex != before) ++false_negatives;
        std::filesystem::remove_all(dir);
    }

    check.expect(functional_misses == 0,
                 std::to_string(functional_misses) + " functional mutations kept the hash");
    check.expect(false_negatives == 0,
                 std::to_string(false_negatives) + " non-functional mutations moved the hash");
    const double total = seconds_since(start);
    check.expect(total < 60.0, "criterion runtime " + std::to_string(total) + "s");
    if (check.ok) {
        check.detail = "1000 trials, 0 false positives, 0 false negatives (" +
                       std::to_string(total) + "s)";
    }
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 6: patch round-trip, conflict flagging, fig-3 splice shape
// ---------------------------------------------------------------------------

WorkflowDescription fig3_target() {
    WorkflowDescription wf;
    wf.name = "target";
    auto src = [](const std::string& name, const std::string& out) {
        ComponentNode node;
        node.name = name;
        node.command.executable = "/bin/sh";
        node.command.arguments = {"-c", "echo " + name + " > " + out};
        node.outputs.push_back(OutputDecl{"out", out});
        return node;
    };
    wf.nodes.push_back(src("src1", "a.dat"));
    wf.nodes.push_back(src("src2", "b.dat"));
    ComponentNode mid;
    mid.name = "mid";
    mid.command.executable = "/bin/sh";
    mid.command.arguments = {"-c", "cat a.dat b.dat > c.dat"};
    mid.inputs.push_back(InputBinding{"a.dat", ReferenceSource{"src1", "out"}});
    mid.inputs.push_back(InputBinding{"b.dat", ReferenceSource{"src2", "out"}});
    mid.outputs.push_back(OutputDecl{"out", "c.dat"});
    wf.nodes.push_back(mid);
    ComponentNode sink;
    sink.name = "sink";
    sink.command.executable = "/bin/sh";
    sink.command.arguments = {"-c", "cat c.dat > final.txt"};
    sink.inputs.push_back(InputBinding{"c.dat", ReferenceSource{"mid", "out"}});
    sink.outputs.push_back(OutputDecl{"out", "final.txt"});
    wf.nodes.push_back(sink);
    validate_workflow(wf);
    return wf;
}

Block manual_mid_block(const WorkflowDescription& wf) {
    Block block;
    block.members = {"mid"};
    const SubgraphView view = make_subgraph(wf, block.members);
    block.id = sha256_hex("mid");
    block.boundary_inputs = domain_descriptors(view);
    block.boundary_outputs = codomain_descriptors(view);
    return block;
}

Check criterion_patch() {
    Check check;
    const WorkflowDescription target = fig3_target();

    // identity round trip with an isomorphism check
    {
        const Patch patch = extract_patch(target, manual_mid_block(target));
        const SpliceMap splice = identify_splice_points(target, patch, 0.8);
        const auto [result, conflicts] = apply_patch(target, patch, splice, false);
        check.expect(conflicts.empty(), "identity application raised conflicts");
        auto edges = [](const WorkflowDescription& wf) {
            std::set<std::string> out;
            for (const auto& e : dependency_graph(wf)) {
                out.insert(e.producer + ">" + e.output + ">" + e.consumer);
            }
            return out;
        };
        bool isomorphic = result.nodes.size() == target.nodes.size() &&
                          edges(result) == edges(target);
        for (const auto& node : target.nodes) {
            if (!result.find_node(node.name) ||
                abstract_view(result, node.name).canonical() !=
                    abstract_view(target, node.name).canonical()) {
                isomorphic = false;
            }
        }
        check.expect(isomorphic, "identity round trip not isomorphic");
    }

    // deleting a consumed patch output: exactly one argument-expectation
    // conflict and no output workflow
    {
        Patch patch = extract_patch(target, manual_mid_block(target));
        const SpliceMap splice = identify_splice_points(target, patch, 0.8);
        patch.graph.find_node("mid")->outputs.clear();
        const auto [result, conflicts] = apply_patch(target, patch, splice, false);
        int argument_expectation = 0;
        for (const auto& c : conflicts) {
            if (c.kind == Conflict::Kind::ArgumentExpectation) ++argument_expectation;
        }
        check.expect(argument_expectation == 1,
                     "argument-expectation conflicts = " +
                         std::to_string(argument_expectation));
        const bool unchanged = serialize_workflow(result) == serialize_workflow(target);
        check.expect(unchanged, "conflicted application still produced a workflow");
    }

    // fig-3 topology: two input splice points, one output consumer
    {
        WorkflowDescription donor = fig3_target();
        donor.name = "donor";
        donor.find_node("mid")->command.arguments = {"-c", "cat b.dat a.dat > c.dat"};
        const Patch patch = extract_patch(donor, manual_mid_block(donor));
        const SpliceMap splice = identify_splice_points(target, patch, 0.8);
        check.expect(splice.inputs.size() == 2,
                     "input splice points = " + std::to_string(splice.inputs.size()));
        check.expect(splice.outputs.size() == 1,
                     "output splice points = " + std::to_string(splice.outputs.size()));
        check.expect(splice.removal == std::set<std::string>{"mid"}, "unexpected removal set");
    }
    if (check.ok) check.detail = "identity, conflict, and splice-shape checks";
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 7: superintendent correctness on a seeded two-block fixture
// ---------------------------------------------------------------------------

Check criterion_superintendent() {
    Check check;
    Scratch scratch;
    const std::filesystem::path library = std::filesystem::path(AWF_FIXTURE_DIR) / "library";
    const auto kb_dir = scratch.path / "kb";
    KnowledgeBase::init(kb_dir);
    KnowledgeBase kb(kb_dir, true);

    WorkflowDescription host =
        resolve_parameters(load_workflow_file(library / "expt1-fast.json"), {});
    WorkflowDescription alt =
        resolve_parameters(load_workflow_file(library / "expt1-careful.json"), {});
    std::map<std::string, std::string> alt_entries;
    register_workflow(kb, host, "host");
    for (const auto& [block, id] : register_workflow(kb, alt, "alt").blocks) {
        alt_entries[block.members.front()] = id;
    }
    kb.compute_edges();

    auto seed = [&](const WorkflowDescription& wf, const std::string& node, double wall) {
        ExecutionRecord r;
        r.interface_hash = interface_hash(wf, node).hex;
        r.workflow_id = wf.name;
        r.node = node;
        r.exit_code = 0;
        r.wall_seconds = wall;
        r.started_at = now_iso8601();
        r.finished_at = now_iso8601();
        kb.record_execution(r, {});
    };
    seed(host, "gen", 10.0);
    seed(host, "gen_report", 1.0);
    seed(host, "refine", 8.0);
    seed(alt, "gen", 2.0);
    seed(alt, "gen_report", 1.0);
    seed(alt, "refine", 3.0);

    CostFunction costfn;
    costfn.weights = {{"runtime", 1.0}};

    auto block_id = [&](const std::string& member) {
        for (const auto& block : factor(host).blocks) {
            if (block.members == std::vector<std::string>{member}) return block.id;
        }
        throw Error("block not found");
    };
    auto make_plan = [&](const std::string& id, const std::string& member) {
        SubstitutionPlan plan;
        plan.id = id;
        PlannedSubstitution s;
        s.block_id = block_id(member);
        s.block_members = {member};
        s.kb_entry = alt_entries.at(member);
        plan.substitutions.push_back(s);
        return plan;
    };

    // three seeded alternates: per-block proposals plus a combined one
    const auto plan_gen = make_plan("alt-gen", "gen");
    const auto plan_refine = make_plan("alt-refine", "refine");
    SubstitutionPlan plan_both = make_plan("alt-both", "gen");
    plan_both.substitutions.push_back(plan_refine.substitutions[0]);
    const std::vector<SubstitutionPlan> proposals{plan_gen, plan_refine, plan_both};

    const auto picked = superintend(proposals, host, kb, costfn, SuperintendMode::Pick);
    double brute = evaluate_plan(SubstitutionPlan{}, host, kb, costfn);
    for (const auto& p : proposals) brute = std::min(brute, evaluate_plan(p, host, kb, costfn));
    check.expect(evaluate_plan(picked, host, kb, costfn) == brute,
                 "pick-mode winner is not the brute-force minimum");

    const auto mixed = superintend(proposals, host, kb, costfn, SuperintendMode::Mix);
    check.expect(evaluate_plan(mixed, host, kb, costfn) <=
                     evaluate_plan(picked, host, kb, costfn),
                 "mix-mode result costs more than pick mode");

    // ties resolve to the lexicographically smallest id
    const auto tie_b = make_plan("tie-b", "gen");
    const auto tie_a = make_plan("tie-a", "gen");
    const auto tied = superintend({tie_b, tie_a}, host, kb, costfn, SuperintendMode::Pick);
    check.expect(tied.id == "tie-a", "tie resolved to " + tied.id);

    if (check.ok) check.detail = "pick = brute-force min, mix <= pick, ties lexicographic";
    return check;
}

// ---------------------------------------------------------------------------
// Criterion 8: canary non-interference plus adjudication boundaries
// ---------------------------------------------------------------------------

Check criterion_canary() {
    Check check;
    Scratch scratch;
    const auto kb_dir = scratch.path / "kb";
    KnowledgeBase::init(kb_dir);
    KnowledgeBase kb(kb_dir, true);

    WorkflowDescription host;
    host.name = "canary-host";
    ComponentNode calc;
    calc.name = "calc";
    calc.command.executable = "/bin/sh";
    calc.command.arguments = {"-c", "printf '%s' '42' > result.dat"};
    calc.outputs.push_back(OutputDecl{"result", "result.dat"});
    host.nodes.push_back(calc);
    validate_workflow(host);

    WorkflowDescription donor = host;
    donor.name = "surrogate-donor";
    donor.find_node("calc")->command.arguments = {"-c", "printf '%s' '41' > result.dat"};
    const Patch patch = extract_patch(donor, factor(donor).blocks.at(0));
    const auto patch_dir = scratch.path / "patch";
    patch.save(patch_dir);

    SurrogateBinding binding;
    binding.id = "bind-1";
    binding.nodes = {"calc"};
    binding.patch_dir = patch_dir;
    binding.comparator = {
        "/bin/sh", "-c",
        "a=$(cat \"$1\"/result.dat); b=$(cat \"$2\"/result.dat); "
        "if [ \"$a\" -ge \"$b\" ]; then echo $((a-b)); else echo $((b-a)); fi",
        "cmp"};
    binding.mode = "canary";

    RunOptions options;
    options.kb = &kb;
    options.max_parallel = 2;

    options.work_dir = scratch.path / "plain";
    const RunReport plain = execute(host, options);
    check.expect(plain.success, "plain run failed");

    const int runs = 3;
    for (int i = 0; i < runs; ++i) {
        options.work_dir = scratch.path / ("canary-" + std::to_string(i));
        const RunReport canary = canary_run(host, {binding}, options);
        check.expect(canary.success, "canary run failed");
        check.expect(canary.nodes.at("calc").output_digests ==
                         plain.nodes.at("calc").output_digests,
                     "canary changed the workflow outputs");
    }
    check.expect(kb.accuracy_stats("bind-1").count == std::size_t(runs),
                 "samples = " + std::to_string(kb.accuracy_stats("bind-1").count));

    // prior adjudication flips exactly at the (min samples, tolerance) edges
    AdjudicationRule rule;
    rule.min_samples = runs + 1;
    rule.statistic = AdjudicationRule::Statistic::Max;
    rule.tolerance = 1.5;
    check.expect(!prior_adjudicate("bind-1", kb, rule).approved,
                 "approved below min samples");
    rule.min_samples = runs;
    check.expect(prior_adjudicate("bind-1", kb, rule).approved,
                 "rejected with enough samples inside tolerance");
    rule.tolerance = 0.5;
    check.expect(!prior_adjudicate("bind-1", kb, rule).approved,
                 "approved beyond tolerance");

    // with the rule satisfied, the adjudicated run substitutes the surrogate
    rule.tolerance = 1.5;
    options.work_dir = scratch.path / "adjudicated";
    const RunReport substituted = adjudicated_run(host, {binding}, rule, options);
    check.expect(substituted.success, "adjudicated run failed");
    check.expect(substituted.substitutions.size() == 1, "no substitution recorded");
    check.expect(substituted.nodes.count("calc") &&
                     substituted.nodes.at("calc").output_digests.at("result") ==
                         sha256_hex("41"),
                 "surrogate output not in effect");

    if (check.ok) {
        check.detail = "outputs byte-identical, " + std::to_string(runs) +
                       " samples, adjudication flips at both boundaries";
    }
    return check;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Check (*fn)();
    };
    const std::vector<Criterion> criteria{
        {"1 memoization speedup", criterion_memoization_speedup},
        {"2 hash speed", criterion_hash_speed},
        {"3 composition adds ten", criterion_composition},
        {"4 WL grouping", criterion_wl_grouping},
        {"5 memoization fidelity", criterion_fidelity},
        {"6 patch round-trip and conflicts", criterion_patch},
        {"7 superintendent correctness", criterion_superintendent},
        {"8 canary and adjudication", criterion_canary},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.fn();
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(start);
        char line[512];
        std::snprintf(line, sizeof(line), "%s: criterion %s (%.2fs)%s%s",
                      check.ok ? "PASS" : "FAIL", criterion.name, elapsed,
                      check.detail.empty() ? "" : " - ", check.detail.c_str());
        std::cout << line << "\n";
        if (!check.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
