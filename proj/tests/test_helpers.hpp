#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "awf/model.hpp"
#include "awf/util.hpp"

namespace awf::test {

inline std::filesystem::path fixture_dir() { return AWF_FIXTURE_DIR; }

// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        path = std::filesystem::temp_directory_path() / ("awf-test-" + random_hex(8));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name, const std::string& content) const {
        const auto p = path / name;
        write_text_file(p, content);
        return p;
    }
};

inline ComponentNode echo_node(const std::string& name, const std::string& text,
                               const std::string& out_path) {
    ComponentNode node;
    node.name = name;
    node.command.executable = "/bin/sh";
    node.command.arguments = {"-c", "printf '%s' '" + text + "' > " + out_path};
    node.outputs.push_back(OutputDecl{"out", out_path});
    return node;
}

inline InputBinding ref_input(const std::string& binding, const std::string& node,
                              const std::string& output) {
    return InputBinding{binding, ReferenceSource{node, output}};
}

inline InputBinding literal_input(const std::string& binding, const std::string& path) {
    return InputBinding{binding, LiteralFileSource{path}};
}

// Node that concatenates its bound inputs into its single output.
inline ComponentNode cat_node(const std::string& name, const std::vector<std::string>& inputs,
                              const std::string& out_path) {
    ComponentNode node;
    node.name = name;
    node.command.executable = "/bin/sh";
    std::string script = "cat";
    for (const auto& in : inputs) script += " " + in;
    script += " > " + out_path;
    node.command.arguments = {"-c", script};
    node.outputs.push_back(OutputDecl{"out", out_path});
    return node;
}

// Random DAG: every node may reference outputs of earlier nodes. All nodes
// carry one output and deterministic-ish commands.
inline WorkflowDescription random_dag(std::mt19937& rng, int max_nodes = 12) {
    std::uniform_int_distribution<int> node_count(1, max_nodes);
    const int n = node_count(rng);
    WorkflowDescription wf;
    wf.name = "random-" + std::to_string(n);
    for (int i = 0; i < n; ++i) {
        const std::string name = "n" + std::to_string(i);
        ComponentNode node = echo_node(name, "payload-" + std::to_string(i),
                                       "out" + std::to_string(i) + ".dat");
        if (i > 0) {
            std::uniform_int_distribution<int> edge_count(0, std::min(i, 3));
            const int edges = edge_count(rng);
            std::uniform_int_distribution<int> pick(0, i - 1);
            std::set<int> used;
            for (int e = 0; e < edges; ++e) {
                const int producer = pick(rng);
                if (!used.insert(producer).second) continue;
                node.inputs.push_back(ref_input("in" + std::to_string(producer),
                                                "n" + std::to_string(producer), "out"));
            }
        }
        wf.nodes.push_back(std::move(node));
    }
    return wf;
}

} // namespace awf::test
