#include <doctest.h>

#include "awf/digest.hpp"
#include "awf/equivalence.hpp"
#include "awf/errors.hpp"
#include "awf/factoring.hpp"
#include "awf/knowledge_base.hpp"
#include "test_helpers.hpp"

using namespace awf;
using test::TempDir;

namespace {

// Independent oracle: the full recursive serialization of a node's functional
// interface. Two nodes must hash equal exactly when these serializations are
// equal.
Json full_serialization(const WorkflowDescription& wf, const std::string& node) {
    Json j;
    j["abstract"] = abstract_view(wf, node).doc;
    std::vector<std::string> literals;
    const ComponentNode* n = wf.find_node(node);
    for (const auto& binding : n->inputs) {
        if (const auto* lit = std::get_if<LiteralFileSource>(&binding.source)) {
            std::filesystem::path p(lit->path);
            if (p.is_relative() && !wf.base_dir.empty()) p = wf.base_dir / p;
            literals.push_back(read_text_file(p));
        }
    }
    std::sort(literals.begin(), literals.end());
    j["literal_contents"] = literals;
    std::set<std::string> producers;
    for (const auto& edge : dependency_graph(wf)) {
        if (edge.consumer == node) producers.insert(edge.producer);
    }
    std::vector<Json> upstream;
    for (const auto& p : producers) upstream.push_back(full_serialization(wf, p));
    std::sort(upstream.begin(), upstream.end(),
              [](const Json& a, const Json& b) { return a.dump() < b.dump(); });
    j["producers"] = upstream;
    return j;
}

WorkflowDescription two_step(const TempDir& tmp, const std::string& payload) {
    WorkflowDescription wf;
    wf.name = "two-step";
    wf.base_dir = tmp.path;
    tmp.file("input.dat", payload);
    ComponentNode gen = test::echo_node("gen", "g", "mid.dat");
    gen.inputs.push_back(test::literal_input("input.dat", "input.dat"));
    wf.nodes.push_back(gen);
    ComponentNode use = test::echo_node("use", "u", "final.dat");
    use.inputs.push_back(test::ref_input("mid.dat", "gen", "out"));
    wf.nodes.push_back(use);
    validate_workflow(wf);
    return wf;
}

} // namespace

TEST_CASE("interface hash is deterministic") {
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    CHECK(interface_hash(wf, "use").hex == interface_hash(wf, "use").hex);
    CHECK(interface_hash(wf, "use").algorithm == "sha256");
}

TEST_CASE("non-functional changes never move the hash") {
    TempDir tmp;
    auto wf = two_step(tmp, "payload");
    const auto before = interface_hash(wf, "use").hex;
    wf.find_node("gen")->resources["queue"] = "preempt";
    wf.find_node("use")->resources["platform"] = "cluster-b";
    wf.find_node("use")->annotations["restarts"] = "3";
    CHECK(interface_hash(wf, "use").hex == before);
}

TEST_CASE("flipping one literal byte moves the hash, with serialization oracle") {
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    const auto hash_before = interface_hash(wf, "use").hex;
    const Json full_before = full_serialization(wf, "use");

    tmp.file("input.dat", "paYload");
    const auto hash_after = interface_hash(wf, "use").hex;
    const Json full_after = full_serialization(wf, "use");

    CHECK(full_before.dump() != full_after.dump());
    CHECK(hash_before != hash_after);
}

TEST_CASE("literal digests can be supplied instead of files") {
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    LiteralDigests provided{{"input.dat", sha256_hex("payload")}};
    CHECK(interface_hash(wf, "gen", provided).hex == interface_hash(wf, "gen").hex);
}

TEST_CASE("unreadable literal input is an error") {
    TempDir tmp;
    auto wf = two_step(tmp, "payload");
    std::filesystem::remove(tmp.path / "input.dat");
    CHECK_THROWS_AS(interface_hash(wf, "gen"), Error);
}

TEST_CASE("environment variables stay non-functional unless opted in") {
    TempDir tmp;
    auto wf = two_step(tmp, "payload");
    const auto before = interface_hash(wf, "gen").hex;

    wf.find_node("gen")->command.environment["OMP_NUM_THREADS"] = "16";
    CHECK(interface_hash(wf, "gen").hex == before);

    // opting the variable in makes it part of the functional interface
    wf.find_node("gen")->annotations["functional-env"] = "OMP_NUM_THREADS";
    const auto opted = interface_hash(wf, "gen").hex;
    CHECK(opted != before);
    wf.find_node("gen")->command.environment["OMP_NUM_THREADS"] = "32";
    CHECK(interface_hash(wf, "gen").hex != opted);
}

TEST_CASE("jaccard similarity arithmetic") {
    const DescriptorSet a{"a", "b", "c"};
    const DescriptorSet b{"b", "c", "d"};
    CHECK(domain_similarity(a, a).value == doctest::Approx(1.0));
    CHECK(domain_similarity(a, {"x", "y"}).value == doctest::Approx(0.0));
    CHECK(domain_similarity(a, b).value == doctest::Approx(0.5));
    CHECK(domain_similarity({}, {}).value == doctest::Approx(1.0));
    CHECK(codomain_similarity({"out.dat"}, {}).value == doctest::Approx(0.0));
}

TEST_CASE("codomain reconstructed from consumer references matches declarations") {
    // Oracle: direct descriptor extraction. Every producer output is consumed,
    // so the consumer-derived view must coincide with the declared one.
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    const SubgraphView gen_view = make_subgraph(wf, {"gen"});
    const DescriptorSet direct = codomain_descriptors(gen_view);
    const DescriptorSet via_consumers = codomain_from_consumers(gen_view);
    CHECK(direct == via_consumers);

    const DescriptorSet third{"mid.dat", "other.dat"};
    CHECK(codomain_similarity(direct, third).value ==
          doctest::Approx(codomain_similarity(via_consumers, third).value));
}

TEST_CASE("function similarity of a sub-graph with itself is 1") {
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    const auto view = whole_workflow(wf);
    WlConfig config;
    CHECK(function_similarity(view, view, config).value == doctest::Approx(1.0));
}

TEST_CASE("node renaming is invisible in command mode") {
    TempDir tmp;
    const auto wf = two_step(tmp, "payload");
    WorkflowDescription renamed = wf;
    renamed.nodes[0].name = "alpha";
    renamed.nodes[1].name = "omega";
    for (auto& binding : renamed.nodes[1].inputs) {
        if (auto* ref = std::get_if<ReferenceSource>(&binding.source)) ref->node = "alpha";
    }
    validate_workflow(renamed);

    WlConfig command{3, WlConfig::LabelMode::Command};
    CHECK(function_similarity(whole_workflow(wf), whole_workflow(renamed), command).value ==
          doctest::Approx(1.0));
    CHECK(wl_hash(whole_workflow(wf), command) == wl_hash(whole_workflow(renamed), command));

    WlConfig name{3, WlConfig::LabelMode::Name};
    CHECK(function_similarity(whole_workflow(wf), whole_workflow(renamed), name).value <
          1.0);
}

TEST_CASE("single-node graphs with differing commands share no labels") {
    // Oracle by enumeration: a 1-node graph contributes one label per
    // iteration (iterations 0..k). Each label is derived from the previous
    // one, so differing initial commands keep every iteration's label
    // distinct: the multisets are disjoint and the score is exactly 0.
    WorkflowDescription a;
    a.name = "one";
    a.nodes.push_back(test::echo_node("n", "x", "o.dat"));
    WorkflowDescription b = a;
    b.nodes[0].command.arguments[1] += " --different";

    WlConfig config;
    const auto la = wl_label_multiset(whole_workflow(a), config);
    const auto lb = wl_label_multiset(whole_workflow(b), config);
    REQUIRE(la.size() == std::size_t(config.iterations) + 1);
    REQUIRE(lb.size() == la.size());
    for (const auto& label : la) {
        CHECK(std::find(lb.begin(), lb.end(), label) == lb.end());
    }
    const double score =
        function_similarity(whole_workflow(a), whole_workflow(b), config).value;
    CHECK(score == doctest::Approx(0.0));
    CHECK(score < 1.0);
}

TEST_CASE("wl_hash rejects empty sub-graphs") {
    WorkflowDescription wf;
    wf.name = "empty";
    const SubgraphView view{&wf, {}};
    WlConfig config;
    CHECK_THROWS_AS(wl_hash(view, config), ValidationError);
}

TEST_CASE("fixture blocks: six command classes, three name classes") {
    const Json manifest =
        Json::parse(read_text_file(test::fixture_dir() / "library" / "manifest.json"));
    std::map<std::string, WorkflowDescription> workflows;
    std::set<std::string> command_digests, name_digests;
    std::map<std::string, std::vector<std::string>> name_class_members;
    for (const auto& block : manifest["functional_blocks"]) {
        const std::string file = block["workflow"].get<std::string>();
        if (!workflows.count(file)) {
            workflows[file] = resolve_parameters(
                load_workflow_file(test::fixture_dir() / "library" / file), {});
        }
        std::vector<std::string> members;
        for (const auto& m : block["members"]) members.push_back(m.get<std::string>());
        const SubgraphView view = make_subgraph(workflows[file], members);
        command_digests.insert(wl_hash(view, WlConfig{3, WlConfig::LabelMode::Command}));
        const std::string name_digest = wl_hash(view, WlConfig{3, WlConfig::LabelMode::Name});
        name_digests.insert(name_digest);
        name_class_members[name_digest].push_back(block["type"].get<std::string>());
    }
    CHECK(command_digests.size() == 6);
    CHECK(name_digests.size() == 3);
    for (const auto& [digest, members] : name_class_members) {
        CHECK(members.size() == 2);
    }
}

TEST_CASE("equal wl hashes imply function similarity 1") {
    std::mt19937 rng(23);
    WlConfig config;
    int equal_pairs = 0;
    for (int i = 0; i < 40; ++i) {
        const WorkflowDescription wf = test::random_dag(rng);
        WorkflowDescription copy = wf;
        // random rename keeps command-mode labels intact
        for (std::size_t k = 0; k < copy.nodes.size(); ++k) {
            const std::string fresh = "renamed" + std::to_string(k);
            for (auto& node : copy.nodes) {
                for (auto& binding : node.inputs) {
                    if (auto* ref = std::get_if<ReferenceSource>(&binding.source)) {
                        if (ref->node == copy.nodes[k].name) ref->node = fresh;
                    }
                }
            }
            copy.nodes[k].name = fresh;
        }
        validate_workflow(copy);
        if (wl_hash(whole_workflow(wf), config) == wl_hash(whole_workflow(copy), config)) {
            ++equal_pairs;
            CHECK(function_similarity(whole_workflow(wf), whole_workflow(copy), config)
                      .value == doctest::Approx(1.0));
        }
    }
    CHECK(equal_pairs > 0);
}

TEST_CASE("similarity scores are symmetric and within range") {
    std::mt19937 rng(31);
    WlConfig config;
    for (int i = 0; i < 25; ++i) {
        const WorkflowDescription a = test::random_dag(rng);
        const WorkflowDescription b = test::random_dag(rng);
        const auto va = whole_workflow(a);
        const auto vb = whole_workflow(b);
        const double f_ab = function_similarity(va, vb, config).value;
        const double f_ba = function_similarity(vb, va, config).value;
        CHECK(f_ab == doctest::Approx(f_ba));
        CHECK(f_ab >= 0.0);
        CHECK(f_ab <= 1.0);
        const double d_ab = jaccard(domain_descriptors(va), domain_descriptors(vb));
        const double d_ba = jaccard(domain_descriptors(vb), domain_descriptors(va));
        CHECK(d_ab == doctest::Approx(d_ba));
    }
}

TEST_CASE("composability comes from recorded producer-consumer knowledge") {
    TempDir tmp;
    const auto w1 = resolve_parameters(
        load_workflow_file(test::fixture_dir() / "library" / "expt1-fast.json"), {});

    const auto kb_dir = tmp.path / "kb";
    KnowledgeBase::init(kb_dir);
    KnowledgeBase kb(kb_dir, true);

    const SubgraphView gen_view = make_subgraph(w1, {"gen"});
    const SubgraphView refine_view = make_subgraph(w1, {"refine"});

    // Nothing registered: no knowledge, composability 0.
    CHECK(composability(gen_view, refine_view, ComposabilityDirection::Downstream, kb).value ==
          doctest::Approx(0.0));

    register_workflow(kb, w1, "expt1-fast.json");

    // refine is a known consumer of gen, so downstream(gen, refine) is 1.
    CHECK(composability(gen_view, refine_view, ComposabilityDirection::Downstream, kb).value ==
          doctest::Approx(1.0));
    // and gen is a known producer for refine: upstream(gen, refine) is 1.
    CHECK(composability(gen_view, refine_view, ComposabilityDirection::Upstream, kb).value ==
          doctest::Approx(1.0));
    // nothing is known to consume refine's refined.dat here
    CHECK(composability(refine_view, gen_view, ComposabilityDirection::Downstream, kb).value ==
          doctest::Approx(0.0));
}

TEST_CASE("hypothesized composability transfers across equivalent consumers") {
    // B consumes A's outputs; C's interface looks like B's. The knowledge that
    // B consumes A lets us score hooking C behind A highly.
    TempDir tmp;
    const auto w1 = resolve_parameters(
        load_workflow_file(test::fixture_dir() / "library" / "expt1-fast.json"), {});
    const auto w2 = resolve_parameters(
        load_workflow_file(test::fixture_dir() / "library" / "expt1-careful.json"), {});

    const auto kb_dir = tmp.path / "kb";
    KnowledgeBase::init(kb_dir);
    KnowledgeBase kb(kb_dir, true);
    register_workflow(kb, w1, "expt1-fast.json");

    const SubgraphView gen_fast = make_subgraph(w1, {"gen"});
    const SubgraphView refine_careful = make_subgraph(w2, {"refine"});
    // refine-careful was never seen, but it consumes what the known consumer
    // of gen consumes.
    CHECK(composability(gen_fast, refine_careful, ComposabilityDirection::Downstream, kb)
              .value == doctest::Approx(1.0));
}
