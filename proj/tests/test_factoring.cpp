#include <doctest.h>

#include "awf/factoring.hpp"
#include "awf/model.hpp"
#include "test_helpers.hpp"

using namespace awf;

namespace {

// Brute-force oracle: reachable leaves by DFS over dependency edges.
std::map<std::string, std::set<std::string>> brute_force_signatures(
    const WorkflowDescription& wf) {
    std::map<std::string, std::vector<std::string>> successors;
    for (const auto& node : wf.nodes) successors[node.name];
    for (const auto& edge : dependency_graph(wf)) {
        successors[edge.producer].push_back(edge.consumer);
    }
    std::map<std::string, std::set<std::string>> out;
    for (const auto& node : wf.nodes) {
        std::set<std::string> visited;
        std::vector<std::string> stack{node.name};
        while (!stack.empty()) {
            const std::string n = stack.back();
            stack.pop_back();
            if (!visited.insert(n).second) continue;
            for (const auto& next : successors[n]) stack.push_back(next);
        }
        std::set<std::string> leaves;
        for (const auto& v : visited) {
            if (successors[v].empty()) leaves.insert(v);
        }
        out[node.name] = leaves;
    }
    return out;
}

WorkflowDescription chain_abc() {
    WorkflowDescription wf;
    wf.name = "chain";
    wf.nodes.push_back(test::echo_node("A", "a", "a.dat"));
    auto b = test::echo_node("B", "b", "b.dat");
    b.inputs.push_back(test::ref_input("a.dat", "A", "out"));
    wf.nodes.push_back(b);
    auto c = test::echo_node("C", "c", "c.dat");
    c.inputs.push_back(test::ref_input("b.dat", "B", "out"));
    wf.nodes.push_back(c);
    validate_workflow(wf);
    return wf;
}

} // namespace

TEST_CASE("leaf signatures of a chain collapse to the single leaf") {
    const auto wf = chain_abc();
    const auto sig = leaf_signatures(wf);
    const std::set<std::string> expected{"C"};
    CHECK(sig.at("A") == expected);
    CHECK(sig.at("B") == expected);
    CHECK(sig.at("C") == expected);
}

TEST_CASE("leaf signatures of a fan") {
    WorkflowDescription wf;
    wf.name = "fan";
    wf.nodes.push_back(test::echo_node("A", "a", "a.dat"));
    for (const char* leaf : {"B", "C"}) {
        auto node = test::echo_node(leaf, leaf, std::string(leaf) + ".dat");
        node.inputs.push_back(test::ref_input("a.dat", "A", "out"));
        wf.nodes.push_back(node);
    }
    validate_workflow(wf);
    const auto sig = leaf_signatures(wf);
    CHECK(sig.at("A") == std::set<std::string>{"B", "C"});
    CHECK(sig.at("B") == std::set<std::string>{"B"});
    CHECK(sig.at("C") == std::set<std::string>{"C"});
}

TEST_CASE("diamond signatures match the brute-force oracle") {
    WorkflowDescription wf;
    wf.name = "diamond";
    wf.nodes.push_back(test::echo_node("A", "a", "a.dat"));
    for (const char* mid : {"B", "C"}) {
        auto node = test::echo_node(mid, mid, std::string(mid) + ".dat");
        node.inputs.push_back(test::ref_input("a.dat", "A", "out"));
        wf.nodes.push_back(node);
    }
    auto d = test::echo_node("D", "d", "d.dat");
    d.inputs.push_back(test::ref_input("b.in", "B", "out"));
    d.inputs.push_back(test::ref_input("c.in", "C", "out"));
    wf.nodes.push_back(d);
    validate_workflow(wf);

    const auto oracle = brute_force_signatures(wf);
    const auto sig = leaf_signatures(wf);
    for (const auto& node : wf.nodes) {
        CHECK(sig.at(node.name) == oracle.at(node.name));
    }
    CHECK(sig.at("A") == std::set<std::string>{"D"});
    CHECK(factor(wf).blocks.size() == 1);
}

TEST_CASE("random DAG signatures match the brute-force oracle") {
    std::mt19937 rng(17);
    for (int i = 0; i < 60; ++i) {
        const auto wf = test::random_dag(rng);
        const auto oracle = brute_force_signatures(wf);
        const auto sig = leaf_signatures(wf);
        for (const auto& node : wf.nodes) {
            CHECK(sig.at(node.name) == oracle.at(node.name));
        }
    }
}

TEST_CASE("single-leaf workflows form one block") {
    const auto wf = chain_abc();
    const auto quotient = factor(wf);
    REQUIRE(quotient.blocks.size() == 1);
    CHECK(quotient.blocks[0].members == std::vector<std::string>{"A", "B", "C"});
    CHECK(quotient.edges.empty());
}

TEST_CASE("blocks partition the node set") {
    std::mt19937 rng(29);
    for (int i = 0; i < 40; ++i) {
        const auto wf = test::random_dag(rng);
        const auto quotient = factor(wf);
        std::set<std::string> seen;
        for (const auto& block : quotient.blocks) {
            for (const auto& member : block.members) {
                CHECK(seen.insert(member).second);
            }
        }
        CHECK(seen.size() == wf.nodes.size());
    }
}

TEST_CASE("every block lies inside or outside each leaf ancestor set") {
    // The textual refinement condition, checked by brute force.
    std::mt19937 rng(37);
    for (int i = 0; i < 40; ++i) {
        const auto wf = test::random_dag(rng, 20);
        std::map<std::string, std::vector<std::string>> predecessors;
        std::map<std::string, std::vector<std::string>> successors;
        for (const auto& node : wf.nodes) {
            predecessors[node.name];
            successors[node.name];
        }
        for (const auto& edge : dependency_graph(wf)) {
            predecessors[edge.consumer].push_back(edge.producer);
            successors[edge.producer].push_back(edge.consumer);
        }
        const auto quotient = factor(wf);
        for (const auto& node : wf.nodes) {
            if (!successors[node.name].empty()) continue; // not a leaf
            // ancestor set of this leaf
            std::set<std::string> ancestors;
            std::vector<std::string> stack{node.name};
            while (!stack.empty()) {
                const std::string n = stack.back();
                stack.pop_back();
                if (!ancestors.insert(n).second) continue;
                for (const auto& p : predecessors[n]) stack.push_back(p);
            }
            for (const auto& block : quotient.blocks) {
                std::size_t inside = 0;
                for (const auto& member : block.members) {
                    inside += ancestors.count(member);
                }
                const bool all_or_nothing = inside == 0 || inside == block.members.size();
                CHECK(all_or_nothing);
            }
        }
    }
}

TEST_CASE("fixture workflows factor into their declared partitions") {
    const Json manifest =
        Json::parse(read_text_file(test::fixture_dir() / "library" / "manifest.json"));
    for (auto it = manifest["files"].begin(); it != manifest["files"].end(); ++it) {
        const auto wf = resolve_parameters(
            load_workflow_file(test::fixture_dir() / "library" / it.key()), {});
        const auto quotient = factor(wf);
        std::set<std::vector<std::string>> actual;
        for (const auto& block : quotient.blocks) actual.insert(block.members);
        std::set<std::vector<std::string>> declared;
        for (const auto& part : it.value()["partition"]) {
            std::vector<std::string> members;
            for (const auto& m : part) members.push_back(m.get<std::string>());
            std::sort(members.begin(), members.end());
            declared.insert(members);
        }
        CHECK(actual == declared);
    }
}

TEST_CASE("block ids are stable across node reordering") {
    auto wf = chain_abc();
    const auto before = factor(wf);
    std::reverse(wf.nodes.begin(), wf.nodes.end());
    const auto after = factor(wf);
    REQUIRE(before.blocks.size() == after.blocks.size());
    CHECK(before.blocks[0].id == after.blocks[0].id);
}

TEST_CASE("extracted block workflows validate and expose their boundary") {
    const auto wf = resolve_parameters(
        load_workflow_file(test::fixture_dir() / "library" / "expt1-fast.json"), {});
    const auto quotient = factor(wf);
    REQUIRE(quotient.blocks.size() == 3);
    for (const auto& block : quotient.blocks) {
        const WorkflowDescription standalone = extract_block_workflow(wf, block);
        validate_workflow(standalone);
        if (block.members == std::vector<std::string>{"refine"}) {
            CHECK(block.boundary_inputs == DescriptorSet{"structure.dat"});
            CHECK(block.boundary_outputs == DescriptorSet{"refined.dat"});
            // the cross-boundary reference became a literal input
            const ComponentNode& refine = standalone.nodes.at(0);
            REQUIRE(refine.inputs.size() == 1);
            CHECK(std::holds_alternative<LiteralFileSource>(refine.inputs[0].source));
        }
    }
}

TEST_CASE("whole-workflow block extraction is the identity modulo rewrites") {
    const auto wf = chain_abc();
    const auto quotient = factor(wf);
    REQUIRE(quotient.blocks.size() == 1);
    const WorkflowDescription standalone = extract_block_workflow(wf, quotient.blocks[0]);
    CHECK(standalone.nodes.size() == wf.nodes.size());
    CHECK(dependency_graph(standalone).size() == dependency_graph(wf).size());
}
