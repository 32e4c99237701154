// awf: approximation-aware workflow engine CLI.

#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "awf/digest.hpp"
#include "awf/equivalence.hpp"
#include "awf/errors.hpp"
#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "awf/model.hpp"
#include "awf/policy.hpp"
#include "awf/runtime.hpp"
#include "awf/substitution.hpp"
#include "awf/util.hpp"
#include "awf/version.hpp"

using namespace awf;

namespace {

struct GlobalConfig {
    std::string kb_dir;
    std::string format = "human";
    bool verbose = false;

    bool json() const { return format == "json"; }
    std::string kb_or_env() const {
        if (!kb_dir.empty()) return kb_dir;
        const char* env = std::getenv("AWF_KB");
        return env ? env : "";
    }
};

void emit(const GlobalConfig& config, const Json& doc, const std::string& human) {
    if (config.json()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << human;
    }
}

std::vector<ParameterLayer> load_layers(const std::vector<std::string>& files) {
    std::vector<ParameterLayer> layers;
    for (const auto& file : files) {
        const Json doc = Json::parse(read_text_file(file));
        ParameterLayer layer;
        layer.name = file;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            layer.overrides[it.key()] = it.value().is_string()
                                            ? it.value().get<std::string>()
                                            : it.value().dump();
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

WorkflowDescription load_resolved(const std::string& file,
                                  const std::vector<std::string>& layer_files) {
    WorkflowDescription wf = load_workflow_file(file);
    return resolve_parameters(wf, load_layers(layer_files));
}

std::unique_ptr<KnowledgeBase> open_kb(const GlobalConfig& config, bool writable,
                                       bool required) {
    const std::string dir = config.kb_or_env();
    if (dir.empty()) {
        if (required) throw KbError("no knowledge base configured (--kb or AWF_KB)");
        return nullptr;
    }
    return std::make_unique<KnowledgeBase>(dir, writable);
}

Json block_to_json(const Block& block) {
    return Json{{"id", block.id},
                {"members", block.members},
                {"boundary_inputs",
                 std::vector<std::string>(block.boundary_inputs.begin(),
                                          block.boundary_inputs.end())},
                {"boundary_outputs",
                 std::vector<std::string>(block.boundary_outputs.begin(),
                                          block.boundary_outputs.end())}};
}

const Block* find_block(const QuotientGraph& quotient, const std::string& selector) {
    for (const auto& block : quotient.blocks) {
        if (block.id == selector) return &block;
    }
    for (const auto& block : quotient.blocks) {
        if (block.id.rfind(selector, 0) == 0) return &block;
    }
    // comma-separated member list
    std::vector<std::string> members;
    std::stringstream ss(selector);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) members.push_back(item);
    }
    std::sort(members.begin(), members.end());
    for (const auto& block : quotient.blocks) {
        if (block.members == members) return &block;
    }
    return nullptr;
}

int run_command(const GlobalConfig& config, const std::string& wf_file,
                const std::string& platform_file, const std::vector<std::string>& layer_files,
                bool no_memo, int max_parallel, int restart_limit,
                const std::string& bindings_file, bool canary, bool adjudicate,
                const std::string& rule_file, const std::string& work_dir) {
    std::vector<std::string> layers = layer_files;
    if (!platform_file.empty()) layers.push_back(platform_file);
    WorkflowDescription wf = load_resolved(wf_file, layers);

    RunOptions options;
    options.memoize = !no_memo;
    options.max_parallel = max_parallel;
    options.restart_limit = restart_limit;
    options.work_dir = work_dir;
    if (!platform_file.empty()) {
        options.platform = std::filesystem::path(platform_file).stem().string();
    }

    std::unique_ptr<KnowledgeBase> kb;
    std::string kb_warning;
    if (options.memoize || adjudicate || canary) {
        try {
            kb = open_kb(config, true, false);
        } catch (const KbError& e) {
            kb_warning = std::string("knowledge base unavailable (") + e.what() +
                         "); memoization disabled";
        }
    }
    options.kb = kb.get();

    RunReport report;
    if (adjudicate || canary) {
        if (bindings_file.empty()) {
            throw Error("surrogate runs need --bindings");
        }
        const auto bindings = load_bindings(bindings_file);
        if (adjudicate) {
            if (rule_file.empty()) throw Error("--adjudicate needs --rule");
            const AdjudicationRule rule =
                AdjudicationRule::from_json(Json::parse(read_text_file(rule_file)));
            report = adjudicated_run(wf, bindings, rule, options);
        } else {
            report = canary_run(wf, bindings, options);
        }
    } else {
        report = execute(wf, options);
    }
    if (!kb_warning.empty()) report.warnings.push_back(kb_warning);

    std::string human;
    for (const auto& [name, r] : report.nodes) {
        human += name + ": " + r.state;
        if (r.attempts > 0) human += " (attempts " + std::to_string(r.attempts) + ")";
        if (!r.memoized_from.empty()) human += " [memoized]";
        human += "\n";
    }
    human += "wall seconds: " + std::to_string(report.wall_seconds) + "\n";
    human += "memo hits: " + std::to_string(report.memo_hits) + "\n";
    for (const auto& s : report.substitutions) {
        human += "substituted: " + s.binding_id + " " + s.detail + "\n";
    }
    for (const auto& w : report.warnings) human += "warning: " + w + "\n";
    human += std::string("result: ") + (report.success ? "success" : "failure") + "\n";
    human += "report: " + (report.run_dir / "report.json").string() + "\n";
    emit(config, report.to_json(), human);
    return report.success ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximation-aware workflow engine"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.allow_extras(false);

    GlobalConfig config;
    app.add_option("--kb", config.kb_dir, "knowledge base directory (or AWF_KB)");
    app.add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"human", "json"}));
    app.add_flag("-v,--verbose", config.verbose, "verbose diagnostics");

    // --- validate ---------------------------------------------------------
    auto* cmd_validate = app.add_subcommand("validate", "parse and validate a workflow");
    std::string validate_file;
    std::vector<std::string> validate_layers;
    cmd_validate->add_option("workflow", validate_file)->required();
    cmd_validate->add_option("--layers", validate_layers, "parameter layer files");

    // --- run ----------------------------------------------------------------
    auto* cmd_run = app.add_subcommand("run", "execute a workflow");
    std::string run_file, run_platform, run_bindings, run_rule, run_work_dir = "runs";
    std::vector<std::string> run_layers;
    bool run_no_memo = false, run_canary = false, run_adjudicate = false;
    int run_parallel = 4, run_restarts = 1;
    cmd_run->add_option("workflow", run_file)->required();
    cmd_run->add_option("--platform", run_platform, "platform parameter layer");
    cmd_run->add_option("--layers", run_layers, "parameter layer files");
    cmd_run->add_flag("--no-memo", run_no_memo, "disable memoization");
    cmd_run->add_option("--max-parallel", run_parallel)->check(CLI::PositiveNumber);
    cmd_run->add_option("--restart-limit", run_restarts)->check(CLI::NonNegativeNumber);
    cmd_run->add_option("--bindings", run_bindings, "surrogate bindings file");
    cmd_run->add_flag("--canary", run_canary, "canary-test surrogate bindings");
    cmd_run->add_flag("--adjudicate", run_adjudicate, "prior-policy adjudication");
    cmd_run->add_option("--rule", run_rule, "adjudication rule file");
    cmd_run->add_option("--work-dir", run_work_dir, "run directory root");

    // --- hash ------------------------------------------------------------------
    auto* cmd_hash = app.add_subcommand("hash", "print interface hashes");
    std::string hash_file, hash_node;
    std::vector<std::string> hash_layers;
    cmd_hash->add_option("workflow", hash_file)->required();
    cmd_hash->add_option("--node", hash_node, "hash only this node");
    cmd_hash->add_option("--layers", hash_layers, "parameter layer files");

    // --- similarity -----------------------------------------------------------
    auto* cmd_similarity = app.add_subcommand("similarity", "compare two workflows");
    std::string sim_a, sim_b, sim_metric, sim_mode = "command";
    cmd_similarity->add_option("a", sim_a)->required();
    cmd_similarity->add_option("b", sim_b)->required();
    cmd_similarity->add_option("--metric", sim_metric)
        ->required()
        ->check(CLI::IsMember({"domain", "codomain", "function"}));
    cmd_similarity->add_option("--wl-mode", sim_mode)
        ->check(CLI::IsMember({"name", "command"}));

    // --- factor -----------------------------------------------------------------
    auto* cmd_factor = app.add_subcommand("factor", "factor a workflow into blocks");
    std::string factor_file, factor_out;
    std::vector<std::string> factor_layers;
    cmd_factor->add_option("workflow", factor_file)->required();
    cmd_factor->add_option("-o,--output", factor_out, "write blocks as workflows");
    cmd_factor->add_option("--layers", factor_layers, "parameter layer files");

    // --- patch ------------------------------------------------------------------
    auto* cmd_patch = app.add_subcommand("patch", "extract or apply patches");
    cmd_patch->require_subcommand(1);
    auto* cmd_patch_extract = cmd_patch->add_subcommand("extract", "package a block");
    std::string pe_file, pe_block, pe_out;
    cmd_patch_extract->add_option("workflow", pe_file)->required();
    cmd_patch_extract->add_option("--block", pe_block, "block id (prefix) or member list")
        ->required();
    cmd_patch_extract->add_option("-o,--output", pe_out, "patch directory")->required();
    auto* cmd_patch_apply = cmd_patch->add_subcommand("apply", "splice a patch into a workflow");
    std::string pa_file, pa_dir, pa_out;
    double pa_threshold = 0.8;
    bool pa_force = false;
    cmd_patch_apply->add_option("workflow", pa_file)->required();
    cmd_patch_apply->add_option("patch", pa_dir)->required();
    cmd_patch_apply->add_option("--threshold", pa_threshold);
    cmd_patch_apply->add_flag("--force", pa_force);
    cmd_patch_apply->add_option("-o,--output", pa_out)->required();

    // --- compose -----------------------------------------------------------------
    auto* cmd_compose = app.add_subcommand("compose", "enumerate new compositions");
    std::string compose_library, compose_out;
    double compose_threshold = 0.8;
    cmd_compose->add_option("--library", compose_library, "directory of workflows")
        ->required();
    cmd_compose->add_option("--threshold", compose_threshold);
    cmd_compose->add_option("-o,--output", compose_out, "candidate output directory");

    // --- propose / apply-plan ----------------------------------------------------
    auto* cmd_propose = app.add_subcommand("propose", "run agents and the superintendent");
    std::string propose_file, propose_objectives, propose_mode = "pick", propose_out;
    std::string propose_bindings, propose_rule;
    cmd_propose->add_option("workflow", propose_file)->required();
    cmd_propose->add_option("--objectives", propose_objectives, "weights JSON file")
        ->required();
    cmd_propose->add_option("--mode", propose_mode)->check(CLI::IsMember({"pick", "mix"}));
    cmd_propose->add_option("-o,--output", propose_out, "plan file");
    cmd_propose->add_option("--bindings", propose_bindings, "surrogate bindings file");
    cmd_propose->add_option("--rule", propose_rule, "adjudication rule file");

    auto* cmd_apply_plan = app.add_subcommand("apply-plan", "apply a substitution plan");
    std::string ap_file, ap_plan, ap_out;
    double ap_threshold = 0.8;
    cmd_apply_plan->add_option("workflow", ap_file)->required();
    cmd_apply_plan->add_option("plan", ap_plan)->required();
    cmd_apply_plan->add_option("--threshold", ap_threshold);
    cmd_apply_plan->add_option("-o,--output", ap_out)->required();

    // --- kb ---------------------------------------------------------------------
    auto* cmd_kb = app.add_subcommand("kb", "knowledge base maintenance");
    cmd_kb->require_subcommand(1);
    auto* kb_init = cmd_kb->add_subcommand("init", "create a knowledge base");
    std::string kb_init_dir;
    double kb_init_threshold = 0.8, kb_init_floor = 0.1;
    kb_init->add_option("dir", kb_init_dir)->required();
    kb_init->add_option("--hypothesized-threshold", kb_init_threshold);
    kb_init->add_option("--edge-floor", kb_init_floor);
    auto* kb_register = cmd_kb->add_subcommand("register", "register a workflow's blocks");
    std::string kbr_file, kbr_nodes;
    std::vector<std::string> kbr_layers;
    kb_register->add_option("workflow", kbr_file)->required();
    kb_register->add_option("--nodes", kbr_nodes, "register one sub-graph (comma-separated)");
    kb_register->add_option("--layers", kbr_layers);
    auto* kb_edges = cmd_kb->add_subcommand("edges", "compute equivalence edges");
    bool kbe_recompute = false;
    kb_edges->add_flag("--recompute", kbe_recompute);
    auto* kb_query = cmd_kb->add_subcommand("query", "query executions or equivalents");
    std::string kbq_hash, kbq_entry, kbq_metric = "f";
    double kbq_threshold = 0.9;
    bool kbq_no_self = false;
    kb_query->add_option("--hash", kbq_hash);
    kb_query->add_option("--equivalent-to", kbq_entry);
    kb_query->add_option("--metric", kbq_metric);
    kb_query->add_option("--threshold", kbq_threshold);
    kb_query->add_flag("--no-self", kbq_no_self);
    auto* kb_stats = cmd_kb->add_subcommand("stats", "store statistics");
    auto* kb_verify = cmd_kb->add_subcommand("verify", "check blob integrity");

    // Global options (--kb, --format) are accepted after the subcommand too.
    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough(true);
        for (auto* nested : sub->get_subcommands(nullptr)) nested->fallthrough(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_validate) {
            WorkflowDescription wf = load_resolved(validate_file, validate_layers);
            emit(config,
                 Json{{"valid", true}, {"name", wf.name}, {"nodes", wf.nodes.size()}},
                 "valid: " + wf.name + " (" + std::to_string(wf.nodes.size()) + " nodes)\n");
            return 0;
        }

        if (*cmd_run) {
            return run_command(config, run_file, run_platform, run_layers, run_no_memo,
                               run_parallel, run_restarts, run_bindings, run_canary,
                               run_adjudicate, run_rule, run_work_dir);
        }

        if (*cmd_hash) {
            WorkflowDescription wf = load_resolved(hash_file, hash_layers);
            Json out = Json::object();
            std::string human;
            if (!hash_node.empty()) {
                const InterfaceHash h = interface_hash(wf, hash_node);
                out[hash_node] = h.hex;
                human = h.hex + "  " + hash_node + "\n";
            } else {
                const auto hashes = interface_hash_all(wf);
                for (const auto& name : topological_order(wf)) {
                    out[name] = hashes.at(name).hex;
                    human += hashes.at(name).hex + "  " + name + "\n";
                }
            }
            emit(config, out, human);
            return 0;
        }

        if (*cmd_similarity) {
            WorkflowDescription a = resolve_parameters(load_workflow_file(sim_a), {});
            WorkflowDescription b = resolve_parameters(load_workflow_file(sim_b), {});
            const SubgraphView va = whole_workflow(a);
            const SubgraphView vb = whole_workflow(b);
            double value = 0.0;
            if (sim_metric == "domain") {
                value = domain_similarity(domain_descriptors(va), domain_descriptors(vb)).value;
            } else if (sim_metric == "codomain") {
                value = codomain_similarity(codomain_descriptors(va), codomain_descriptors(vb))
                            .value;
            } else {
                WlConfig wl{3, sim_mode == "name" ? WlConfig::LabelMode::Name
                                                  : WlConfig::LabelMode::Command};
                value = function_similarity(va, vb, wl).value;
            }
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%.4f", value);
            emit(config, Json{{"metric", sim_metric}, {"score", value}},
                 std::string(buf) + "\n");
            return 0;
        }

        if (*cmd_factor) {
            WorkflowDescription wf = load_resolved(factor_file, factor_layers);
            const QuotientGraph quotient = factor(wf);
            Json out;
            out["workflow"] = wf.name;
            out["blocks"] = Json::array();
            for (const auto& block : quotient.blocks) out["blocks"].push_back(block_to_json(block));
            out["edges"] = Json::array();
            for (const auto& [from, to] : quotient.edges) {
                out["edges"].push_back(Json{{"from", from}, {"to", to}});
            }
            if (!factor_out.empty()) {
                std::filesystem::create_directories(factor_out);
                Json boundaries = Json::object();
                for (const auto& block : quotient.blocks) {
                    WorkflowDescription standalone = extract_block_workflow(wf, block);
                    write_text_file(std::filesystem::path(factor_out) /
                                        ("block-" + block.id.substr(0, 12) + ".json"),
                                    workflow_to_json(standalone).dump(2) + "\n");
                    boundaries[block.id] = block_to_json(block);
                }
                write_text_file(std::filesystem::path(factor_out) / "boundary.json",
                                boundaries.dump(2) + "\n");
            }
            emit(config, out, out.dump(2) + "\n");
            return 0;
        }

        if (*cmd_patch_extract) {
            WorkflowDescription wf = load_resolved(pe_file, {});
            const QuotientGraph quotient = factor(wf);
            const Block* block = find_block(quotient, pe_block);
            if (!block) throw Error("no block matches '" + pe_block + "'");
            const Patch patch = extract_patch(wf, *block);
            patch.save(pe_out);
            emit(config,
                 Json{{"patch", pe_out},
                      {"block", block->id},
                      {"inputs", patch.input_schema},
                      {"outputs", patch.output_schema}},
                 "patch written to " + pe_out + "\n");
            return 0;
        }

        if (*cmd_patch_apply) {
            WorkflowDescription wf = load_resolved(pa_file, {});
            const Patch patch = Patch::load(pa_dir);
            std::vector<Conflict> warnings;
            const SpliceMap splice =
                identify_splice_points(wf, patch, pa_threshold, pa_force, &warnings);
            auto [result, conflicts] = apply_patch(wf, patch, splice, pa_force);
            for (const auto& w : warnings) conflicts.push_back(w);
            Json conflict_json = Json::array();
            std::string human;
            for (const auto& c : conflicts) {
                conflict_json.push_back(Json{{"kind", conflict_kind_name(c.kind)},
                                             {"locus", c.locus},
                                             {"detail", c.detail}});
                human += "conflict: " + conflict_kind_name(c.kind) + " at " + c.locus + ": " +
                         c.detail + "\n";
            }
            const bool applied = conflicts.empty() || pa_force;
            if (applied) {
                write_text_file(pa_out, workflow_to_json(result).dump(2) + "\n");
                human += "wrote " + pa_out + "\n";
            } else {
                human += "no output written\n";
            }
            emit(config, Json{{"applied", applied}, {"conflicts", conflict_json}}, human);
            return applied ? 0 : 1;
        }

        if (*cmd_compose) {
            std::vector<LibraryWorkflow> library;
            std::vector<std::filesystem::path> files;
            for (const auto& entry : std::filesystem::directory_iterator(compose_library)) {
                if (entry.path().extension() == ".json" &&
                    entry.path().filename() != "manifest.json") {
                    files.push_back(entry.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& file : files) {
                LibraryWorkflow lib;
                lib.wf = resolve_parameters(load_workflow_file(file), {});
                lib.quotient = factor(lib.wf);
                lib.source = file.filename().string();
                library.push_back(std::move(lib));
            }
            // Ephemeral KB: composition needs producer/consumer knowledge but
            // must not mutate a user store.
            const auto tmp = std::filesystem::temp_directory_path() /
                             ("awf-compose-" + random_hex(6));
            KnowledgeBase::init(tmp);
            std::vector<CompositionCandidate> candidates;
            {
                KnowledgeBase kb(tmp, true);
                for (const auto& lib : library) {
                    register_workflow(kb, lib.wf, lib.source);
                }
                kb.compute_edges();
                candidates = enumerate_compositions(library, kb, compose_threshold);
            }
            std::filesystem::remove_all(tmp);

            Json out;
            out["version"] = kVersion;
            out["candidates"] = Json::array();
            std::string human;
            int recombinations = 0, standalones = 0;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const auto& c = candidates[i];
                (c.kind == "recombination" ? recombinations : standalones) += 1;
                Json jc{{"name", c.wf.name},
                        {"kind", c.kind},
                        {"template", c.template_source},
                        {"wl_digest", c.wl_digest}};
                if (!compose_out.empty()) {
                    std::filesystem::create_directories(compose_out);
                    const std::string filename =
                        "candidate-" + std::to_string(i + 1) + "-" + c.kind + ".json";
                    write_text_file(std::filesystem::path(compose_out) / filename,
                                    workflow_to_json(c.wf).dump(2) + "\n");
                    jc["file"] = filename;
                }
                out["candidates"].push_back(jc);
                human += c.kind + ": " + c.wf.name + " (from " + c.template_source + ")\n";
            }
            out["recombinations"] = recombinations;
            out["standalone_blocks"] = standalones;
            out["total"] = candidates.size();
            if (!compose_out.empty()) {
                write_text_file(std::filesystem::path(compose_out) / "candidates.json",
                                out.dump(2) + "\n");
            }
            human += "total: " + std::to_string(candidates.size()) + " (" +
                     std::to_string(recombinations) + " recombinations, " +
                     std::to_string(standalones) + " standalone blocks)\n";
            emit(config, out, human);
            return 0;
        }

        if (*cmd_propose) {
            WorkflowDescription wf = load_resolved(propose_file, {});
            auto kb = open_kb(config, false, true);
            const CostFunction costfn =
                CostFunction::from_json(Json::parse(read_text_file(propose_objectives)));
            AgentOptions agent_options;
            if (!propose_rule.empty()) {
                agent_options.rule =
                    AdjudicationRule::from_json(Json::parse(read_text_file(propose_rule)));
            }
            if (!propose_bindings.empty()) {
                const QuotientGraph quotient = factor(wf);
                for (const auto& binding : load_bindings(propose_bindings)) {
                    std::vector<std::string> members = binding.nodes;
                    std::sort(members.begin(), members.end());
                    for (const auto& block : quotient.blocks) {
                        if (block.members == members) {
                            agent_options.surrogate_bindings.push_back({binding.id, block.id});
                        }
                    }
                }
            }
            const auto proposals = run_agents(wf, *kb, agent_options);
            const SubstitutionPlan plan =
                superintend(proposals, wf, *kb, costfn,
                            propose_mode == "mix" ? SuperintendMode::Mix
                                                  : SuperintendMode::Pick);
            const double cost = evaluate_plan(plan, wf, *kb, costfn);
            Json out = plan.to_json();
            out["version"] = kVersion;
            out["cost"] = cost;
            out["proposals_considered"] = proposals.size();
            if (!propose_out.empty()) write_text_file(propose_out, out.dump(2) + "\n");
            emit(config, out,
                 "plan " + plan.id + " (" + std::to_string(plan.substitutions.size()) +
                     " substitutions, cost " + std::to_string(cost) + ")\n");
            return 0;
        }

        if (*cmd_apply_plan) {
            WorkflowDescription wf = load_resolved(ap_file, {});
            const SubstitutionPlan plan =
                SubstitutionPlan::from_json(Json::parse(read_text_file(ap_plan)));
            WorkflowDescription current = wf;
            for (const auto& s : plan.substitutions) {
                if (s.patch_workflow.empty()) {
                    throw Error("plan substitution for block " + s.block_id +
                                " carries no patch reference");
                }
                WorkflowDescription donor =
                    resolve_parameters(load_workflow_file(s.patch_workflow), {});
                const QuotientGraph donor_blocks = factor(donor);
                const Block* donor_block = nullptr;
                if (!s.kb_entry.empty()) {
                    auto kb = open_kb(config, false, true);
                    if (const KbNodeEntry* entry = kb->find_entry(s.kb_entry)) {
                        std::vector<std::string> members = entry->node_names;
                        std::sort(members.begin(), members.end());
                        for (const auto& block : donor_blocks.blocks) {
                            if (block.members == members) donor_block = &block;
                        }
                    }
                }
                if (!donor_block) donor_block = find_block(donor_blocks, s.patch_block_id);
                if (!donor_block) {
                    throw Error("cannot locate donor block for plan substitution " +
                                s.block_id);
                }
                const Patch patch = extract_patch(donor, *donor_block);
                const SpliceMap splice = identify_splice_points(current, patch, ap_threshold);
                auto [next, conflicts] = apply_patch(current, patch, splice, false);
                if (!conflicts.empty()) {
                    std::string detail;
                    for (const auto& c : conflicts) {
                        detail += " " + conflict_kind_name(c.kind) + "@" + c.locus;
                    }
                    throw Error("plan application conflicts:" + detail);
                }
                current = std::move(next);
            }
            write_text_file(ap_out, workflow_to_json(current).dump(2) + "\n");
            emit(config, Json{{"applied", plan.substitutions.size()}, {"output", ap_out}},
                 "wrote " + ap_out + "\n");
            return 0;
        }

        if (*kb_init) {
            KnowledgeBase::Config kb_config;
            kb_config.hypothesized_threshold = kb_init_threshold;
            kb_config.edge_floor = kb_init_floor;
            KnowledgeBase::init(kb_init_dir, kb_config);
            emit(config, Json{{"initialized", kb_init_dir}},
                 "initialized " + kb_init_dir + "\n");
            return 0;
        }
        if (*kb_register) {
            auto kb = open_kb(config, true, true);
            WorkflowDescription wf = load_resolved(kbr_file, kbr_layers);
            Json out;
            std::string human;
            if (!kbr_nodes.empty()) {
                std::vector<std::string> members;
                std::stringstream ss(kbr_nodes);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    if (!item.empty()) members.push_back(item);
                }
                const KbNodeEntry entry = build_entry(make_subgraph(wf, members), kbr_file);
                kb->register_subgraph(entry);
                out["entries"] = Json::array({entry.id});
                human = entry.id + "\n";
            } else {
                const RegisteredWorkflow reg = register_workflow(*kb, wf, kbr_file);
                out["workflow_entry"] = reg.workflow_entry;
                out["entries"] = Json::array();
                for (const auto& [block, id] : reg.blocks) {
                    out["entries"].push_back(Json{{"block", block.id}, {"entry", id}});
                    human += id + "  [";
                    for (std::size_t i = 0; i < block.members.size(); ++i) {
                        if (i) human += ",";
                        human += block.members[i];
                    }
                    human += "]\n";
                }
            }
            emit(config, out, human);
            return 0;
        }
        if (*kb_edges) {
            auto kb = open_kb(config, true, true);
            const std::size_t written = kb->compute_edges();
            emit(config, Json{{"edges_written", written}},
                 std::to_string(written) + " edges written\n");
            return 0;
        }
        if (*kb_query) {
            auto kb = open_kb(config, false, true);
            if (!kbq_hash.empty()) {
                if (auto record = kb->lookup_execution(kbq_hash)) {
                    emit(config, record->to_json(), record->to_json().dump(2) + "\n");
                    return 0;
                }
                emit(config, Json{{"found", false}}, "absent\n");
                return 1;
            }
            if (kbq_entry.empty()) throw Error("kb query needs --hash or --equivalent-to");
            const auto results =
                kb->find_equivalents(kbq_entry, kbq_metric, kbq_threshold, !kbq_no_self);
            Json out = Json::array();
            std::string human;
            for (const auto& [id, score] : results) {
                out.push_back(Json{{"entry", id}, {"score", score}});
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%.4f", score);
                human += std::string(buf) + "  " + id + "\n";
            }
            emit(config, out, human);
            return 0;
        }
        if (*kb_stats) {
            auto kb = open_kb(config, false, true);
            emit(config, kb->stats(), kb->stats().dump(2) + "\n");
            return 0;
        }
        if (*kb_verify) {
            auto kb = open_kb(config, false, true);
            const auto problems = kb->verify();
            Json out{{"ok", problems.empty()}, {"problems", problems}};
            std::string human = problems.empty() ? "ok\n" : "";
            for (const auto& p : problems) human += "problem: " + p + "\n";
            emit(config, out, human);
            return problems.empty() ? 0 : 1;
        }
    } catch (const SpliceError& e) {
        if (config.json()) {
            std::cout << Json{{"error", e.what()}, {"kind", e.kind()}}.dump(2) << "\n";
        }
        std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        if (config.json()) std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        if (config.json()) std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
