#include "awf/knowledge_base.hpp"

#include <algorithm>
#include <fstream>

#include "awf/digest.hpp"
#include "awf/errors.hpp"
#include "awf/util.hpp"

namespace awf {

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kEntries = "entries.jsonl";
constexpr const char* kEdges = "edges.jsonl";
constexpr const char* kExecutions = "executions.jsonl";
constexpr const char* kSamples = "samples.jsonl";
constexpr const char* kLock = "kb.lock";

std::string kind_to_string(KbEdge::Kind k) {
    switch (k) {
        case KbEdge::Kind::Equivalence: return "equivalence";
        case KbEdge::Kind::ProducerConsumer: return "producer-consumer";
        case KbEdge::Kind::SubgraphOf: return "subgraph-of";
    }
    return "equivalence";
}

KbEdge::Kind kind_from_string(const std::string& s) {
    if (s == "producer-consumer") return KbEdge::Kind::ProducerConsumer;
    if (s == "subgraph-of") return KbEdge::Kind::SubgraphOf;
    return KbEdge::Kind::Equivalence;
}

double multiset_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::map<std::string, std::size_t> ca, cb;
    for (const auto& x : a) ca[x]++;
    for (const auto& x : b) cb[x]++;
    std::size_t intersection = 0, unity = 0;
    for (const auto& [k, n] : ca) {
        const auto it = cb.find(k);
        const std::size_t m = it == cb.end() ? 0 : it->second;
        intersection += std::min(n, m);
        unity += std::max(n, m);
    }
    for (const auto& [k, m] : cb) {
        if (!ca.count(k)) unity += m;
    }
    return unity == 0 ? 1.0 : double(intersection) / double(unity);
}

} // namespace

// ---------------------------------------------------------------------------
// Record (de)serialization
// ---------------------------------------------------------------------------

Json KbNodeEntry::to_json() const {
    Json j;
    j["id"] = id;
    j["node_hashes"] = node_hashes;
    j["wl"] = Json{{"name", wl_name}, {"command", wl_command}};
    j["wl_labels"] = Json{{"name", wl_labels_name}, {"command", wl_labels_command}};
    j["domain"] = std::vector<std::string>(domain.begin(), domain.end());
    j["codomain"] = std::vector<std::string>(codomain.begin(), codomain.end());
    j["source"] = Json{{"workflow_digest", source_workflow_digest},
                       {"workflow", source_workflow},
                       {"nodes", node_names}};
    j["registered_at"] = registered_at;
    return j;
}

KbNodeEntry KbNodeEntry::from_json(const Json& j) {
    KbNodeEntry e;
    e.id = j.value("id", std::string());
    e.node_hashes = j.value("node_hashes", std::vector<std::string>{});
    if (j.contains("wl")) {
        e.wl_name = j["wl"].value("name", std::string());
        e.wl_command = j["wl"].value("command", std::string());
    }
    if (j.contains("wl_labels")) {
        e.wl_labels_name = j["wl_labels"].value("name", std::vector<std::string>{});
        e.wl_labels_command = j["wl_labels"].value("command", std::vector<std::string>{});
    }
    for (const auto& d : j.value("domain", std::vector<std::string>{})) e.domain.insert(d);
    for (const auto& d : j.value("codomain", std::vector<std::string>{})) e.codomain.insert(d);
    if (j.contains("source")) {
        e.source_workflow_digest = j["source"].value("workflow_digest", std::string());
        e.source_workflow = j["source"].value("workflow", std::string());
        e.node_names = j["source"].value("nodes", std::vector<std::string>{});
    }
    e.registered_at = j.value("registered_at", std::string());
    return e;
}

Json KbEdge::to_json() const {
    Json j;
    j["kind"] = kind_to_string(kind);
    j["from"] = from;
    j["to"] = to;
    j["metric"] = metric;
    if (kind == Kind::Equivalence) {
        j["weights"] = Json{{"domain", domain},
                            {"codomain", codomain},
                            {"function_name", function_name},
                            {"function_command", function_command}};
    } else {
        j["weight"] = weight;
        j["status"] = hypothesized ? "hypothesized" : "known";
    }
    return j;
}

KbEdge KbEdge::from_json(const Json& j) {
    KbEdge e;
    e.kind = kind_from_string(j.value("kind", std::string("equivalence")));
    e.from = j.value("from", std::string());
    e.to = j.value("to", std::string());
    e.metric = j.value("metric", std::string("jaccard-v1"));
    if (j.contains("weights")) {
        e.domain = j["weights"].value("domain", 0.0);
        e.codomain = j["weights"].value("codomain", 0.0);
        e.function_name = j["weights"].value("function_name", 0.0);
        e.function_command = j["weights"].value("function_command", 0.0);
    }
    e.weight = j.value("weight", 0.0);
    e.hypothesized = j.value("status", std::string("known")) == "hypothesized";
    return e;
}

Json ExecutionRecord::to_json() const {
    return Json{{"hash", interface_hash},
                {"workflow", workflow_id},
                {"node", node},
                {"started_at", started_at},
                {"finished_at", finished_at},
                {"exit_code", exit_code},
                {"outputs", Json(output_digests)},
                {"platform", platform},
                {"memoized", memoized},
                {"wall_seconds", wall_seconds}};
}

ExecutionRecord ExecutionRecord::from_json(const Json& j) {
    ExecutionRecord r;
    r.interface_hash = j.value("hash", std::string());
    r.workflow_id = j.value("workflow", std::string());
    r.node = j.value("node", std::string());
    r.started_at = j.value("started_at", std::string());
    r.finished_at = j.value("finished_at", std::string());
    r.exit_code = j.value("exit_code", 0);
    if (j.contains("outputs")) {
        for (auto it = j["outputs"].begin(); it != j["outputs"].end(); ++it) {
            r.output_digests[it.key()] = it.value().get<std::string>();
        }
    }
    r.platform = j.value("platform", std::string());
    r.memoized = j.value("memoized", false);
    r.wall_seconds = j.value("wall_seconds", 0.0);
    return r;
}

Json AccuracySample::to_json() const {
    return Json{{"binding", binding_id},
                {"physical_hash", physical_hash},
                {"surrogate_hash", surrogate_hash},
                {"error", error},
                {"comparator", comparator},
                {"recorded_at", recorded_at}};
}

AccuracySample AccuracySample::from_json(const Json& j) {
    AccuracySample s;
    s.binding_id = j.value("binding", std::string());
    s.physical_hash = j.value("physical_hash", std::string());
    s.surrogate_hash = j.value("surrogate_hash", std::string());
    s.error = j.value("error", 0.0);
    s.comparator = j.value("comparator", std::string());
    s.recorded_at = j.value("recorded_at", std::string());
    return s;
}

// ---------------------------------------------------------------------------
// KnowledgeBase
// ---------------------------------------------------------------------------

void KnowledgeBase::init(const std::filesystem::path& dir) { init(dir, Config{}); }

void KnowledgeBase::init(const std::filesystem::path& dir, const Config& config) {
    std::filesystem::create_directories(dir);
    if (std::filesystem::exists(dir / kManifest)) {
        throw KbError("knowledge base already initialized: " + dir.string());
    }
    Json manifest{{"format_version", config.format_version},
                  {"digest_algorithm", config.digest_algorithm},
                  {"hypothesized_threshold", config.hypothesized_threshold},
                  {"edge_floor", config.edge_floor},
                  {"created_at", now_iso8601()}};
    write_text_file(dir / kManifest, manifest.dump(2) + "\n");
    std::filesystem::create_directories(dir / "objects");
}

KnowledgeBase::KnowledgeBase(const std::filesystem::path& dir, bool writable)
    : dir_(dir), writable_(writable) {
    if (!std::filesystem::exists(dir_ / kManifest)) {
        throw KbError("not a knowledge base (missing manifest): " + dir_.string());
    }
    Json manifest;
    try {
        manifest = Json::parse(read_text_file(dir_ / kManifest));
    } catch (const Json::parse_error& e) {
        throw KbError("corrupt manifest: " + std::string(e.what()));
    }
    config_.format_version = manifest.value("format_version", 1);
    config_.digest_algorithm = manifest.value("digest_algorithm", std::string("sha256"));
    config_.hypothesized_threshold = manifest.value("hypothesized_threshold", 0.8);
    config_.edge_floor = manifest.value("edge_floor", 0.1);
    if (config_.digest_algorithm != kDigestAlgorithm) {
        throw KbError("knowledge base uses digest algorithm '" + config_.digest_algorithm +
                      "', this build provides only '" + std::string(kDigestAlgorithm) + "'");
    }

    if (writable_) {
        // Single-writer lock. O_EXCL-style create; stale locks must be removed
        // by the operator.
        const auto lock = dir_ / kLock;
        if (std::filesystem::exists(lock)) {
            throw KbError("knowledge base is locked by another writer: " + lock.string());
        }
        write_text_file(lock, now_iso8601() + "\n");
    }
    load();
}

KnowledgeBase::~KnowledgeBase() {
    if (writable_) {
        std::error_code ec;
        std::filesystem::remove(dir_ / kLock, ec);
    }
}

void KnowledgeBase::load() {
    auto each_line = [&](const char* file, auto&& fn) {
        std::ifstream in(dir_ / file);
        if (!in) return;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                fn(Json::parse(line));
            } catch (const Json::parse_error&) {
                throw KbError(std::string(file) + ":" + std::to_string(lineno) +
                              ": corrupt record");
            }
        }
    };
    each_line(kEntries, [&](const Json& j) {
        KbNodeEntry e = KbNodeEntry::from_json(j);
        entries_[e.id] = std::move(e);
    });
    each_line(kEdges, [&](const Json& j) {
        KbEdge e = KbEdge::from_json(j);
        const std::string key = edge_key(e);
        auto it = edge_index_.find(key);
        if (it == edge_index_.end()) {
            edge_index_[key] = edges_.size();
            edges_.push_back(std::move(e));
        } else {
            edges_[it->second] = std::move(e); // later lines supersede
        }
    });
    each_line(kExecutions, [&](const Json& j) {
        ExecutionRecord r = ExecutionRecord::from_json(j);
        auto& agg = wall_sums_[r.interface_hash];
        agg.first += r.wall_seconds;
        agg.second += 1;
        if (r.exit_code == 0 && !r.memoized) {
            authoritative_[r.interface_hash] = std::move(r);
        }
    });
    each_line(kSamples, [&](const Json& j) {
        samples_.push_back(AccuracySample::from_json(j));
    });
}

void KnowledgeBase::append_line(const std::filesystem::path& file, const Json& j) {
    if (!writable_) throw KbError("knowledge base opened read-only");
    std::ofstream out(dir_ / file, std::ios::app);
    if (!out) throw KbError("cannot append to " + (dir_ / file).string());
    out << j.dump() << "\n";
    out.flush();
    if (!out) throw KbError("short append to " + (dir_ / file).string());
}

std::string KnowledgeBase::edge_key(const KbEdge& e) const {
    // Equivalence edges are undirected: store under sorted endpoints.
    std::string a = e.from, b = e.to;
    if (e.kind == KbEdge::Kind::Equivalence && b < a) std::swap(a, b);
    return kind_to_string(e.kind) + "|" + a + "|" + b + "|" + e.metric;
}

// --- entries ---------------------------------------------------------------

std::string KnowledgeBase::register_subgraph(const KbNodeEntry& entry) {
    if (entry.id.empty()) throw KbError("entry id must be set");
    auto it = entries_.find(entry.id);
    if (it != entries_.end()) {
        return entry.id; // identical representation ⇒ idempotent
    }
    entries_[entry.id] = entry;
    append_line(kEntries, entry.to_json());
    return entry.id;
}

const KbNodeEntry* KnowledgeBase::find_entry(const std::string& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

// --- edges -------------------------------------------------------------------

void KnowledgeBase::add_edge(const KbEdge& edge) {
    if (edge.kind == KbEdge::Kind::ProducerConsumer) {
        if (!edge.hypothesized && edge.weight != 1.0) {
            throw KbError("known producer-consumer edges must have weight 1.0");
        }
        if (edge.hypothesized && (edge.weight < 0.0 || edge.weight >= 1.0)) {
            throw KbError("hypothesized edge weight must be in [0,1)");
        }
    }
    const std::string key = edge_key(edge);
    auto it = edge_index_.find(key);
    if (it != edge_index_.end()) {
        if (edges_[it->second].to_json() == edge.to_json()) return; // unchanged
        edges_[it->second] = edge;
    } else {
        edge_index_[key] = edges_.size();
        edges_.push_back(edge);
    }
    append_line(kEdges, edge.to_json());
}

std::vector<KbEdge> KnowledgeBase::edges_for(const std::string& entry_id) const {
    std::vector<KbEdge> out;
    for (const auto& e : edges_) {
        if (e.from == entry_id || e.to == entry_id) out.push_back(e);
    }
    return out;
}

double KnowledgeBase::entry_composability(const KbNodeEntry& a, const KbNodeEntry& b,
                                          ComposabilityDirection direction) const {
    // Instances of the same block type share a WL command digest; aggregate
    // producer/consumer knowledge across them.
    double best = 0.0;
    for (const auto& e : edges_) {
        if (e.kind != KbEdge::Kind::ProducerConsumer || e.hypothesized) continue;
        const KbNodeEntry* from = find_entry(e.from);
        const KbNodeEntry* to = find_entry(e.to);
        if (!from || !to) continue;
        if (direction == ComposabilityDirection::Downstream) {
            // consumers of anything that looks like `a`; compare domains with b
            if (from->wl_command == a.wl_command) {
                best = std::max(best, jaccard(b.domain, to->domain));
            }
        } else {
            // producers of anything that looks like `b`; compare codomains with a
            if (to->wl_command == b.wl_command) {
                best = std::max(best, jaccard(a.codomain, from->codomain));
            }
        }
    }
    return best;
}

std::size_t KnowledgeBase::compute_edges(const std::vector<std::string>& subset) {
    std::vector<const KbNodeEntry*> pool;
    if (subset.empty()) {
        for (const auto& [id, e] : entries_) pool.push_back(&e);
    } else {
        for (const auto& id : subset) {
            const KbNodeEntry* e = find_entry(id);
            if (!e) throw KbError("unknown entry '" + id + "'");
            pool.push_back(e);
        }
    }
    if (pool.size() < 2) return 0;

    std::size_t written = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t k = i + 1; k < pool.size(); ++k) {
            const KbNodeEntry& a = *pool[i];
            const KbNodeEntry& b = *pool[k];
            KbEdge e;
            e.kind = KbEdge::Kind::Equivalence;
            e.from = std::min(a.id, b.id);
            e.to = std::max(a.id, b.id);
            e.domain = jaccard(a.domain, b.domain);
            e.codomain = jaccard(a.codomain, b.codomain);
            e.function_name = multiset_jaccard(a.wl_labels_name, b.wl_labels_name);
            e.function_command = multiset_jaccard(a.wl_labels_command, b.wl_labels_command);
            const double strongest = std::max({e.domain, e.codomain, e.function_name,
                                               e.function_command});
            if (strongest < config_.edge_floor) continue; // sub-floor pairs are implicit zeros
            const std::string key = edge_key(e);
            auto it = edge_index_.find(key);
            if (it != edge_index_.end() && edges_[it->second].to_json() == e.to_json()) {
                continue;
            }
            add_edge(e);
            ++written;
        }
    }

    // Hypothesized producer-consumer edges.
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t k = 0; k < pool.size(); ++k) {
            if (i == k) continue;
            const KbNodeEntry& a = *pool[i];
            const KbNodeEntry& b = *pool[k];
            bool known = false;
            for (const auto& e : edges_) {
                if (e.kind == KbEdge::Kind::ProducerConsumer && !e.hypothesized &&
                    e.from == a.id && e.to == b.id) {
                    known = true;
                    break;
                }
            }
            if (known) continue;
            const double score = std::max(
                entry_composability(a, b, ComposabilityDirection::Downstream),
                entry_composability(a, b, ComposabilityDirection::Upstream));
            if (score >= config_.hypothesized_threshold && score < 1.0 + 1e-12) {
                KbEdge e;
                e.kind = KbEdge::Kind::ProducerConsumer;
                e.from = a.id;
                e.to = b.id;
                e.weight = std::min(score, 0.999999); // hypothesized stays below 1.0
                e.hypothesized = true;
                const std::string key = edge_key(e);
                auto it = edge_index_.find(key);
                if (it != edge_index_.end() &&
                    edges_[it->second].to_json() == e.to_json()) {
                    continue;
                }
                add_edge(e);
                ++written;
            }
        }
    }
    return written;
}

std::vector<std::pair<std::string, double>> KnowledgeBase::find_equivalents(
    const std::string& entry_id, const std::string& metric, double threshold,
    bool include_self) const {
    const KbNodeEntry* self = find_entry(entry_id);
    if (!self) throw KbError("unknown entry '" + entry_id + "'");

    auto metric_value = [&](const KbEdge& e) {
        if (metric == "d" || metric == "domain") return e.domain;
        if (metric == "c" || metric == "codomain") return e.codomain;
        if (metric == "f" || metric == "function" || metric == "f-name") {
            return e.function_name;
        }
        if (metric == "f-command") return e.function_command;
        throw KbError("unknown metric '" + metric + "'");
    };

    std::vector<std::pair<std::string, double>> out;
    if (include_self && threshold <= 1.0) out.push_back({entry_id, 1.0});
    for (const auto& e : edges_) {
        if (e.kind != KbEdge::Kind::Equivalence) continue;
        std::string other;
        if (e.from == entry_id) other = e.to;
        else if (e.to == entry_id) other = e.from;
        else continue;
        const double v = metric_value(e);
        if (v >= threshold) out.push_back({other, v});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

// --- executions -----------------------------------------------------------

std::optional<ExecutionRecord> KnowledgeBase::lookup_execution(const std::string& hash) const {
    auto it = authoritative_.find(hash);
    if (it == authoritative_.end()) return std::nullopt;
    return it->second;
}

std::filesystem::path KnowledgeBase::object_path(const std::string& digest) const {
    if (digest.size() < 4) throw KbError("invalid object digest '" + digest + "'");
    return dir_ / "objects" / digest.substr(0, 2) / digest.substr(2, 2) / digest;
}

bool KnowledgeBase::has_object(const std::string& digest) const {
    return std::filesystem::exists(object_path(digest));
}

std::vector<std::string> KnowledgeBase::record_execution(
    const ExecutionRecord& record, const std::vector<std::filesystem::path>& files) {
    std::vector<std::string> digests;
    for (const auto& file : files) {
        const std::string digest = sha256_file(file);
        const auto target = object_path(digest);
        if (!std::filesystem::exists(target)) {
            std::filesystem::create_directories(target.parent_path());
            const auto tmp = target.parent_path() / (target.filename().string() + ".tmp." +
                                                     random_hex(4));
            std::filesystem::copy_file(file, tmp,
                                       std::filesystem::copy_options::overwrite_existing);
            if (sha256_file(tmp) != digest) {
                std::filesystem::remove(tmp);
                throw KbError("digest mismatch while storing blob for " + file.string());
            }
            std::filesystem::rename(tmp, target);
        }
        digests.push_back(digest);
    }
    append_line(kExecutions, record.to_json());
    auto& agg = wall_sums_[record.interface_hash];
    agg.first += record.wall_seconds;
    agg.second += 1;
    if (record.exit_code == 0 && !record.memoized) {
        authoritative_[record.interface_hash] = record;
    }
    return digests;
}

std::optional<double> KnowledgeBase::mean_wall_seconds(const std::string& hash) const {
    auto it = wall_sums_.find(hash);
    if (it == wall_sums_.end() || it->second.second == 0) return std::nullopt;
    return it->second.first / double(it->second.second);
}

// --- samples ---------------------------------------------------------------

void KnowledgeBase::add_sample(const AccuracySample& sample) {
    if (sample.error < 0.0) throw KbError("accuracy sample error must be >= 0");
    samples_.push_back(sample);
    append_line(kSamples, sample.to_json());
}

AccuracyStats KnowledgeBase::accuracy_stats(const std::string& binding_id) const {
    AccuracyStats stats;
    double sum = 0.0;
    for (const auto& s : samples_) {
        if (s.binding_id != binding_id) continue;
        stats.count += 1;
        sum += s.error;
        stats.max_error = std::max(stats.max_error, s.error);
    }
    if (stats.count > 0) stats.mean_error = sum / double(stats.count);
    return stats;
}

// --- maintenance --------------------------------------------------------------

std::vector<std::string> KnowledgeBase::verify() const {
    std::vector<std::string> problems;
    const auto objects = dir_ / "objects";
    if (std::filesystem::exists(objects)) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(objects)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name.find(".tmp.") != std::string::npos) continue;
            const std::string actual = sha256_file(entry.path());
            if (actual != name) {
                problems.push_back("object " + name + " has digest " + actual);
            }
        }
    }
    for (const auto& [hash, record] : authoritative_) {
        for (const auto& [output, digest] : record.output_digests) {
            if (!has_object(digest)) {
                problems.push_back("execution " + hash + " output '" + output +
                                   "' missing blob " + digest);
            }
        }
    }
    return problems;
}

Json KnowledgeBase::stats() const {
    std::size_t executions = 0;
    for (const auto& [h, agg] : wall_sums_) executions += agg.second;
    std::size_t objects = 0;
    const auto obj_dir = dir_ / "objects";
    if (std::filesystem::exists(obj_dir)) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(obj_dir)) {
            if (entry.is_regular_file()) ++objects;
        }
    }
    return Json{{"entries", entries_.size()},
                {"edges", edges_.size()},
                {"executions", executions},
                {"authoritative_executions", authoritative_.size()},
                {"samples", samples_.size()},
                {"objects", objects}};
}

// ---------------------------------------------------------------------------
// Registration helpers and sub-graph composability
// ---------------------------------------------------------------------------

KbNodeEntry build_entry(const SubgraphView& view, const std::string& source_hint,
                        const LiteralDigests& literals) {
    KbNodeEntry entry;
    const auto all_hashes = interface_hash_all(*view.wf, literals);
    for (const auto& name : view.nodes) {
        entry.node_hashes.push_back(all_hashes.at(name).hex);
        entry.node_names.push_back(name);
    }
    std::sort(entry.node_hashes.begin(), entry.node_hashes.end());

    WlConfig name_config{3, WlConfig::LabelMode::Name};
    WlConfig command_config{3, WlConfig::LabelMode::Command};
    entry.wl_name = wl_hash(view, name_config);
    entry.wl_command = wl_hash(view, command_config);
    entry.wl_labels_name = wl_label_multiset(view, name_config);
    entry.wl_labels_command = wl_label_multiset(view, command_config);
    entry.domain = domain_descriptors(view);
    entry.codomain = codomain_descriptors(view);
    entry.source_workflow = source_hint;
    entry.source_workflow_digest = sha256_hex(serialize_workflow(*view.wf));
    entry.registered_at = now_iso8601();

    Json representation;
    representation["node_hashes"] = entry.node_hashes;
    representation["wl"] = Json{{"name", entry.wl_name}, {"command", entry.wl_command}};
    representation["domain"] = std::vector<std::string>(entry.domain.begin(), entry.domain.end());
    representation["codomain"] =
        std::vector<std::string>(entry.codomain.begin(), entry.codomain.end());
    entry.id = sha256_hex(representation.dump());
    return entry;
}

RegisteredWorkflow register_workflow(KnowledgeBase& kb, const WorkflowDescription& wf,
                                     const std::string& source_hint,
                                     const LiteralDigests& literals) {
    if (!parameters_resolved(wf)) {
        throw ValidationError("workflow must be parameter-resolved before registration");
    }
    RegisteredWorkflow out;
    const QuotientGraph q = factor(wf);

    std::map<std::string, std::string> block_entry; // block id -> entry id
    for (const auto& block : q.blocks) {
        const SubgraphView view = make_subgraph(wf, block.members);
        KbNodeEntry entry = build_entry(view, source_hint, literals);
        kb.register_subgraph(entry);
        block_entry[block.id] = entry.id;
        out.blocks.push_back({block, entry.id});
    }

    KbNodeEntry whole = build_entry(whole_workflow(wf), source_hint, literals);
    kb.register_subgraph(whole);
    out.workflow_entry = whole.id;

    for (const auto& [from, to] : q.edges) {
        KbEdge e;
        e.kind = KbEdge::Kind::ProducerConsumer;
        e.from = block_entry[from];
        e.to = block_entry[to];
        e.weight = 1.0;
        e.hypothesized = false;
        kb.add_edge(e);
    }
    if (q.blocks.size() > 1) {
        for (const auto& block : q.blocks) {
            KbEdge e;
            e.kind = KbEdge::Kind::SubgraphOf;
            e.from = block_entry[block.id];
            e.to = whole.id;
            e.weight = 1.0;
            kb.add_edge(e);
        }
    }
    return out;
}

SimilarityScore composability(const SubgraphView& a, const SubgraphView& b,
                              ComposabilityDirection direction, const KnowledgeBase& kb) {
    // Resolve both sub-graphs to block types via their WL command digests and
    // descriptor sets; no registration required.
    WlConfig command_config{3, WlConfig::LabelMode::Command};
    KbNodeEntry ea;
    ea.wl_command = wl_hash(a, command_config);
    ea.domain = domain_descriptors(a);
    ea.codomain = codomain_descriptors(a);
    KbNodeEntry eb;
    eb.wl_command = wl_hash(b, command_config);
    eb.domain = domain_descriptors(b);
    eb.codomain = codomain_descriptors(b);
    const double value = kb.entry_composability(ea, eb, direction);
    return SimilarityScore{value, direction == ComposabilityDirection::Upstream
                                      ? "composability-upstream"
                                      : "composability-downstream"};
}

} // namespace awf
