#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awf/equivalence.hpp"
#include "awf/factoring.hpp"
#include "awf/model.hpp"

namespace awf {

// One registered sub-graph. The entry id is the digest of the representation,
// so re-registering an identical sub-graph is idempotent.
struct KbNodeEntry {
    std::string id;
    std::vector<std::string> node_hashes; // sorted member interface hashes
    std::string wl_name;                  // WL digest, name label mode
    std::string wl_command;               // WL digest, command label mode
    std::vector<std::string> wl_labels_name;
    std::vector<std::string> wl_labels_command;
    DescriptorSet domain;
    DescriptorSet codomain;
    std::string source_workflow_digest;
    std::string source_workflow; // name or path hint
    std::vector<std::string> node_names;
    std::string registered_at;

    Json to_json() const;
    static KbNodeEntry from_json(const Json& j);
};

struct KbEdge {
    enum class Kind { Equivalence, ProducerConsumer, SubgraphOf };
    Kind kind = Kind::Equivalence;
    std::string from;
    std::string to;

    // Equivalence weights.
    double domain = 0.0;
    double codomain = 0.0;
    double function_name = 0.0;
    double function_command = 0.0;

    // Producer-consumer weight; known pairs are exactly 1.0, hypothesized
    // edges live in [0,1).
    double weight = 0.0;
    bool hypothesized = false;

    std::string metric = "jaccard-v1";

    Json to_json() const;
    static KbEdge from_json(const Json& j);
};

struct ExecutionRecord {
    std::string interface_hash;
    std::string workflow_id;
    std::string node;
    std::string started_at;
    std::string finished_at;
    int exit_code = 0;
    std::map<std::string, std::string> output_digests; // output name -> content digest
    std::string platform;
    bool memoized = false;
    double wall_seconds = 0.0;

    Json to_json() const;
    static ExecutionRecord from_json(const Json& j);
};

struct AccuracySample {
    std::string binding_id;
    std::string physical_hash;
    std::string surrogate_hash;
    double error = 0.0;
    std::string comparator;
    std::string recorded_at;

    Json to_json() const;
    static AccuracySample from_json(const Json& j);
};

struct AccuracyStats {
    std::size_t count = 0;
    double mean_error = 0.0; // undefined when count == 0
    double max_error = 0.0;  // undefined when count == 0
};

// File-backed store: manifest.json plus append-only JSONL logs and a
// content-addressed objects/ tree. Single writer per directory (lock file),
// unlimited readers. Reloading from disk reproduces in-memory state exactly.
class KnowledgeBase {
public:
    struct Config {
        int format_version = 1;
        std::string digest_algorithm = "sha256";
        double hypothesized_threshold = 0.8;
        double edge_floor = 0.1;
    };

    static void init(const std::filesystem::path& dir);
    static void init(const std::filesystem::path& dir, const Config& config);

    KnowledgeBase(const std::filesystem::path& dir, bool writable);
    ~KnowledgeBase();

    KnowledgeBase(const KnowledgeBase&) = delete;
    KnowledgeBase& operator=(const KnowledgeBase&) = delete;

    const std::filesystem::path& dir() const { return dir_; }
    const Config& config() const { return config_; }
    bool writable() const { return writable_; }

    // --- sub-graph entries -------------------------------------------------
    std::string register_subgraph(const KbNodeEntry& entry);
    const KbNodeEntry* find_entry(const std::string& id) const;
    const std::map<std::string, KbNodeEntry>& entries() const { return entries_; }

    // --- edges ---------------------------------------------------------------
    // Recomputes equivalence edges pairwise (above the floor) and adds
    // hypothesized producer-consumer edges above the configured threshold.
    // Returns the number of edges written or updated.
    std::size_t compute_edges(const std::vector<std::string>& subset = {});
    void add_edge(const KbEdge& edge);
    const std::vector<KbEdge>& edges() const { return edges_; }
    std::vector<KbEdge> edges_for(const std::string& entry_id) const;

    std::vector<std::pair<std::string, double>> find_equivalents(
        const std::string& entry_id, const std::string& metric, double threshold,
        bool include_self = true) const;

    // --- executions ----------------------------------------------------------
    std::optional<ExecutionRecord> lookup_execution(const std::string& hash) const;
    // Copies output files into the object store and appends the record.
    // Returns the stored blob digests (one per file).
    std::vector<std::string> record_execution(const ExecutionRecord& record,
                                              const std::vector<std::filesystem::path>& files);
    std::optional<double> mean_wall_seconds(const std::string& hash) const;

    bool has_object(const std::string& digest) const;
    std::filesystem::path object_path(const std::string& digest) const;

    // --- accuracy samples ------------------------------------------------------
    void add_sample(const AccuracySample& sample);
    AccuracyStats accuracy_stats(const std::string& binding_id) const;
    const std::vector<AccuracySample>& samples() const { return samples_; }

    // Recomputes every blob digest and checks the manifest; returns the list
    // of problems (empty means the store is intact).
    std::vector<std::string> verify() const;

    Json stats() const;

private:
    void load();
    void append_line(const std::filesystem::path& file, const Json& j);
    std::string edge_key(const KbEdge& e) const;
    double entry_composability(const KbNodeEntry& a, const KbNodeEntry& b,
                               ComposabilityDirection direction) const;

    friend SimilarityScore composability(const SubgraphView&, const SubgraphView&,
                                         ComposabilityDirection, const KnowledgeBase&);

    std::filesystem::path dir_;
    bool writable_ = false;
    Config config_;

    std::map<std::string, KbNodeEntry> entries_;
    std::vector<KbEdge> edges_;
    std::map<std::string, std::size_t> edge_index_; // edge_key -> position
    std::map<std::string, ExecutionRecord> authoritative_; // successful, latest
    std::map<std::string, std::pair<double, std::size_t>> wall_sums_; // hash -> (sum, n)
    std::vector<AccuracySample> samples_;
};

// Factors the workflow, registers every block plus the whole workflow, and
// records known producer-consumer and sub-graph-of edges.
struct RegisteredWorkflow {
    std::string workflow_entry;
    std::vector<std::pair<Block, std::string>> blocks; // block -> entry id
};

RegisteredWorkflow register_workflow(KnowledgeBase& kb, const WorkflowDescription& wf,
                                     const std::string& source_hint,
                                     const LiteralDigests& literals = {});

// Builds an entry for an arbitrary sub-graph without registering it.
KbNodeEntry build_entry(const SubgraphView& view, const std::string& source_hint,
                        const LiteralDigests& literals = {});

} // namespace awf
