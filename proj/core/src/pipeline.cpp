#include "dqas/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include "json.hpp"
#include <sstream>

#include "dqas/circuitgen.hpp"
#include "dqas/dag.hpp"
#include "dqas/error.hpp"
#include "dqas/parallel.hpp"
#include "dqas/random.hpp"
#include "dqas/vcg.hpp"
#include "jsonl.hpp"

namespace dqas {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_relative() && !base.empty() ? base / p : p; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class Manifest {
public:
    explicit Manifest(fs::path dir) : path_(std::move(dir) / files::manifest) {
        if (fs::exists(path_)) {
            std::ifstream in(path_);
            try {
                data_ = json::parse(in);
            } catch (const json::exception& e) {
                throw Error("manifest " + path_.string() + " is unreadable: " + e.what());
            }
        }
    }

    [[nodiscard]] bool exists() const { return !data_.is_null(); }
    [[nodiscard]] const json& data() const { return data_; }

    void init(const PipelineConfig& cfg) {
        data_ = json::object();
        data_["config_hash"] = cfg.hash();
        data_["config"] = json::parse(cfg.canonical_text());
        json stages = json::object();
        for (Stage s : kStages) stages[std::string(to_string(s))] = std::string(to_string(StageStatus::pending));
        data_["stages"] = stages;
        save();
    }

    [[nodiscard]] StageStatus status(Stage s) const {
        if (!exists()) return StageStatus::pending;
        const auto& stages = data_.at("stages");
        const auto key = std::string(to_string(s));
        if (!stages.contains(key)) return StageStatus::pending;
        const auto v = stages.at(key).get<std::string>();
        if (v == "done") return StageStatus::done;
        if (v == "partial") return StageStatus::partial;
        return StageStatus::pending;
    }

    void set(Stage s, StageStatus status) {
        const auto value = std::string(to_string(status));
        auto& slot = data_["stages"][std::string(to_string(s))];
        if (slot == value) return;
        slot = value;
        save();
    }

    void set_value(const char* key, json value) {
        data_[key] = std::move(value);
        save();
    }

private:
    void save() const { detail::write_atomic(path_, data_.dump(2) + "\n"); }

    fs::path path_;
    json data_;
};

json recipe_json(const CircuitRecipe& r) {
    return {{"seed", r.seed}, {"gate_dist", r.gate_dist}, {"p_nl", r.p_nonlocal}};
}

CircuitRecipe recipe_from(const json& j) {
    CircuitRecipe r;
    r.id = j.at("id").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.gate_dist = j.at("gate_dist").get<std::array<double, 3>>();
    r.p_nonlocal = j.at("p_nl").get<double>();
    return r;
}

/// Shared state for one pipeline invocation.
class Runner {
public:
    explicit Runner(const PipelineConfig& cfg)
        : cfg_(cfg), dir_(cfg.output_dir), device_(load_pipeline_device(cfg)), sets_(derive_position_sets(device_)),
          manifest_((fs::create_directories(dir_), dir_)) {
        if (manifest_.exists()) {
            if (manifest_.data().value("config_hash", "") != cfg.hash())
                throw ConfigError("output directory " + dir_.string() +
                                  " holds results of a different configuration; choose another output_dir");
        } else {
            for (const char* f : {files::generated, files::paths_top, files::expressibility, files::candidates,
                                  files::queries})
                if (fs::exists(dir_ / f))
                    throw ConfigError("output directory " + dir_.string() + " has " + f + " but no manifest");
            manifest_.init(cfg);
        }
    }

    void run(Stage last) {
        generate();
        if (last == Stage::generate) return;
        rank_paths();
        if (last == Stage::paths) return;
        score_expressibility();
        if (last == Stage::expressibility) return;
        train();
    }

    void run_only(Stage s) {
        switch (s) {
            case Stage::generate: generate(); break;
            case Stage::paths: rank_paths(); break;
            case Stage::expressibility: score_expressibility(); break;
            case Stage::train: train(); break;
        }
    }

private:
    void timing(const json& record) { detail::append_lines(dir_ / files::timings, {record.dump()}); }

    void generate() {
        if (manifest_.status(Stage::generate) == StageStatus::done) return;
        const fs::path path = dir_ / files::generated;
        auto existing = detail::read_jsonl(path);
        for (std::size_t i = 0; i < existing.size(); ++i)
            if (existing[i].at("id").get<std::size_t>() != i) throw Error(path.string() + ": ids are not contiguous");
        int next = static_cast<int>(existing.size());
        while (next < cfg_.k_a) {
            const int count = std::min(cfg_.chunk_size, cfg_.k_a - next);
            std::vector<std::string> lines(count);
            const auto t0 = std::chrono::steady_clock::now();
            parallel_for(count, cfg_.workers, [&](std::size_t j) {
                const CircuitRecipe r = recipe_for(cfg_, next + static_cast<int>(j));
                const Circuit c = build_circuit(device_, sets_, cfg_, r);
                json rec = {{"id", r.id}};
                rec.update(recipe_json(r));
                rec["ebits"] = c.ebits;
                rec["n_params"] = c.n_params;
                rec["paths"] = count_paths(c).str();
                lines[j] = rec.dump();
            });
            detail::append_lines(path, lines);
            timing({{"stage", "generate"}, {"first", next}, {"count", count}, {"wall_s", seconds_since(t0)}});
            next += count;
            manifest_.set(Stage::generate, next < cfg_.k_a ? StageStatus::partial : StageStatus::done);
        }
        manifest_.set(Stage::generate, StageStatus::done);
    }

    void rank_paths() {
        if (manifest_.status(Stage::paths) == StageStatus::done) return;
        const auto generated = detail::read_jsonl(dir_ / files::generated);
        if (static_cast<int>(generated.size()) != cfg_.k_a)
            throw Error("generation stage is incomplete; run `dqas generate` first");
        std::vector<PathCount> paths;
        paths.reserve(generated.size());
        for (const auto& g : generated) paths.emplace_back(g.at("paths").get<std::string>());
        std::vector<int> order(generated.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return paths[a] > paths[b]; });
        order.resize(cfg_.k_p);
        std::string out;
        for (int rank = 0; rank < cfg_.k_p; ++rank) {
            const json& g = generated[order[rank]];
            json rec = {{"rank", rank}, {"id", g.at("id")}, {"paths", g.at("paths")}, {"ebits", g.at("ebits")}};
            rec.update(recipe_json(recipe_from(g)));
            out += rec.dump() + "\n";
        }
        detail::write_atomic(dir_ / files::paths_top, out);
        manifest_.set(Stage::paths, StageStatus::done);
    }

    void score_expressibility() {
        if (manifest_.status(Stage::expressibility) == StageStatus::done) return;
        const auto top = detail::read_jsonl(dir_ / files::paths_top);
        if (static_cast<int>(top.size()) != cfg_.k_p) throw Error("path ranking stage is incomplete; run `dqas score-paths` first");
        const fs::path path = dir_ / files::expressibility;
        auto scored = detail::read_jsonl(path);
        for (std::size_t i = 0; i < scored.size(); ++i)
            if (scored[i].at("rank").get<std::size_t>() != i) throw Error(path.string() + ": ranks are not contiguous");
        int next = static_cast<int>(scored.size());
        while (next < cfg_.k_p) {
            const int count = std::min(cfg_.chunk_size, cfg_.k_p - next);
            std::vector<json> recs(count);
            const auto t0 = std::chrono::steady_clock::now();
            parallel_for(count, cfg_.workers, [&](std::size_t j) {
                const int rank = next + static_cast<int>(j);
                const json& t = top[rank];
                const CircuitRecipe r = recipe_from(t);
                const Circuit c = build_circuit(device_, sets_, cfg_, r);
                const std::uint64_t seed = derive_seed(cfg_.master_seed, streams::expressibility, r.id);
                const auto est = estimate_expressibility(c, cfg_.expressibility, seed);
                recs[j] = {{"rank", rank},          {"id", r.id},           {"expressibility", est.value},
                           {"n_samples", est.n_samples}, {"n_bins", est.n_bins}, {"seed", seed}};
            });
            std::vector<std::string> lines;
            for (auto& r : recs) lines.push_back(r.dump());
            detail::append_lines(path, lines);
            scored.insert(scored.end(), recs.begin(), recs.end());
            timing({{"stage", "expressibility"}, {"first", next}, {"count", count}, {"wall_s", seconds_since(t0)}});
            next += count;
            if (next < cfg_.k_p) manifest_.set(Stage::expressibility, StageStatus::partial);
        }

        std::vector<int> order(scored.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return scored[a].at("expressibility").get<double>() < scored[b].at("expressibility").get<double>();
        });
        order.resize(cfg_.k_e);
        std::vector<std::string> lines(cfg_.k_e);
        parallel_for(lines.size(), cfg_.workers, [&](std::size_t rank) {
            const json& t = top[order[rank]];
            const CircuitRecipe r = recipe_from(t);
            const Circuit c = build_circuit(device_, sets_, cfg_, r);
            json rec = {{"rank", rank},
                        {"id", r.id},
                        {"expressibility", scored[order[rank]].at("expressibility")},
                        {"paths", t.at("paths")},
                        {"ebits", c.ebits}};
            rec.update(recipe_json(r));
            rec["circuit"] = json::parse(circuit_to_text(c));
            lines[rank] = rec.dump();
        });
        std::string out;
        for (auto& l : lines) out += l + "\n";
        detail::write_atomic(dir_ / files::candidates, out);
        manifest_.set(Stage::expressibility, StageStatus::done);
    }

    void train() {
        const PauliHamiltonian h = load_task(cfg_.task);
        if (h.num_qubits() != cfg_.n_logical)
            throw ConfigError("task acts on " + std::to_string(h.num_qubits()) + " qubits but n_logical is " +
                              std::to_string(cfg_.n_logical));
        double ground = 0.0;
        if (manifest_.data().contains("ground_energy")) {
            ground = manifest_.data().at("ground_energy").get<double>();
        } else {
            ground = exact_ground_energy(h);
            manifest_.set_value("ground_energy", ground);
        }
        TrainConfig tc = cfg_.train;
        tc.target_energy = ground;
        tc.workers = 1;

        const auto candidates = detail::read_jsonl(dir_ / files::candidates);
        if (static_cast<int>(candidates.size()) != cfg_.k_e) throw Error("expressibility stage is incomplete; run `dqas score-expressibility` first");
        const fs::path path = dir_ / files::queries;
        auto done = detail::read_jsonl(path);
        int solved = 0;
        for (std::size_t i = 0; i < done.size(); ++i) {
            if (done[i].at("query").get<std::size_t>() != i) throw Error(path.string() + ": queries are not contiguous");
            solved += done[i].at("solved").get<bool>() ? 1 : 0;
        }
        const int budget = std::min(cfg_.effective_query_budget(), cfg_.k_e);
        auto finished = [&](int n) {
            return n >= budget || (cfg_.stop_after_solutions && solved >= *cfg_.stop_after_solutions);
        };
        int next = static_cast<int>(done.size());
        const int batch = static_cast<int>(std::max(1u, cfg_.workers));
        while (!finished(next)) {
            const int count = std::min(batch, budget - next);
            std::vector<json> recs(count);
            std::vector<double> walls(count);
            parallel_for(count, cfg_.workers, [&](std::size_t j) {
                const auto t0 = std::chrono::steady_clock::now();
                const int q = next + static_cast<int>(j);
                const json& cand = candidates[q];
                const Circuit c = circuit_from_text(cand.at("circuit").dump());
                const int id = cand.at("id").get<int>();
                const QueryResult r = train_query(c, h, tc, derive_seed(cfg_.master_seed, streams::query, id));
                recs[j] = {{"query", q},
                           {"id", id},
                           {"best_energy", r.best_energy},
                           {"restart_energies", r.restart_energies},
                           {"iterations", r.iterations_used},
                           {"solved", r.solved},
                           {"ebits", cand.at("ebits")}};
                walls[j] = seconds_since(t0);
            });
            std::vector<std::string> lines;
            for (int j = 0; j < count && !finished(next); ++j) {
                lines.push_back(recs[j].dump());
                timing({{"stage", "train"}, {"query", next}, {"wall_s", walls[j]}});
                solved += recs[j].at("solved").get<bool>() ? 1 : 0;
                ++next;
            }
            detail::append_lines(path, lines);
            if (!finished(next)) manifest_.set(Stage::train, StageStatus::partial);
        }
        manifest_.set(Stage::train, StageStatus::done);
    }

    const PipelineConfig& cfg_;
    fs::path dir_;
    DeviceGraph device_;
    PositionSets sets_;
    Manifest manifest_;
};

}  // namespace

int PipelineConfig::effective_query_budget() const { return query_budget ? *query_budget : std::min(k_e, 200); }

void PipelineConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("config: " + msg);
    };
    require(k_e >= 1, "K_e must be at least 1");
    require(k_p >= k_e, "K_p must be at least K_e");
    require(k_a >= k_p, "K_a must be at least K_p");
    require(n_gates >= 1, "n_gates must be positive");
    require(n_logical >= 1, "n_logical must be positive");
    require(task.kind == "tfim" || task.kind == "heisenberg" || task.kind == "file",
            "task.kind must be tfim, heisenberg or file");
    require(task.kind == "file" || task.n >= 2, "task.n must be at least 2");
    require(task.kind != "file" || !task.path.empty(), "task.path is required for a file task");
    require(expressibility.n_samples >= 1, "expressibility.n_samples must be positive");
    require(expressibility.n_bins >= 1, "expressibility.n_bins must be positive");
    require(!query_budget || *query_budget >= 1, "query_budget must be positive");
    require(!stop_after_solutions || *stop_after_solutions >= 1, "stop_after_solutions must be positive");
    require(chunk_size >= 1, "chunk_size must be positive");
    require(!output_dir.empty(), "output_dir must not be empty");
    train.validate();
}

std::string PipelineConfig::canonical_text() const {
    const DeviceGraph device = load_pipeline_device(*this);
    json task_json = {{"kind", task.kind}};
    if (task.kind == "file")
        task_json["hamiltonian"] = fnv1a_hex(load_task(task).to_text());
    else
        task_json.update({{"n", task.n}, {"periodic", task.periodic}});
    json j = {
        {"K_a", k_a},
        {"K_p", k_p},
        {"K_e", k_e},
        {"n_gates", n_gates},
        {"method", std::string(to_string(method))},
        {"n_logical", n_logical},
        {"master_seed", master_seed},
        {"device", device.fingerprint()},
        {"task", task_json},
        {"expressibility", {{"n_samples", expressibility.n_samples}, {"n_bins", expressibility.n_bins}}},
        {"train",
         {{"learning_rate", train.learning_rate},
          {"max_iters", train.max_iters},
          {"n_restarts", train.n_restarts},
          {"accuracy_threshold", train.accuracy_threshold},
          {"convergence_window", train.convergence_window},
          {"convergence_tol", train.convergence_tol},
          {"beta1", train.beta1},
          {"beta2", train.beta2},
          {"epsilon", train.epsilon}}},
    };
    return j.dump();
}

std::string PipelineConfig::hash() const { return fnv1a_hex(canonical_text()); }

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(j,
                   {"K_a", "K_p", "K_e", "n_gates", "method", "n_logical", "master_seed", "device", "task",
                    "expressibility", "train", "query_budget", "stop_after_solutions", "workers", "chunk_size",
                    "output_dir"},
                   "config");
    PipelineConfig cfg;
    read_field(j, "K_a", cfg.k_a);
    read_field(j, "K_p", cfg.k_p);
    read_field(j, "K_e", cfg.k_e);
    read_field(j, "n_gates", cfg.n_gates);
    read_field(j, "n_logical", cfg.n_logical);
    read_field(j, "master_seed", cfg.master_seed);
    read_field(j, "workers", cfg.workers);
    read_field(j, "chunk_size", cfg.chunk_size);
    if (j.contains("method")) {
        std::string m;
        read_field(j, "method", m);
        cfg.method = parse_method(m);
    }
    if (j.contains("device")) {
        std::string p;
        read_field(j, "device", p);
        cfg.device_path = resolve(p, base_dir);
    }
    if (j.contains("query_budget") && !j.at("query_budget").is_null()) {
        int b = 0;
        read_field(j, "query_budget", b);
        cfg.query_budget = b;
    }
    if (j.contains("stop_after_solutions") && !j.at("stop_after_solutions").is_null()) {
        int s = 0;
        read_field(j, "stop_after_solutions", s);
        cfg.stop_after_solutions = s;
    }
    if (j.contains("output_dir")) {
        std::string p;
        read_field(j, "output_dir", p);
        cfg.output_dir = resolve(p, base_dir);
    }
    if (j.contains("task")) {
        const json& t = j.at("task");
        reject_unknown(t, {"kind", "n", "periodic", "path"}, "task");
        read_field(t, "kind", cfg.task.kind);
        read_field(t, "n", cfg.task.n);
        read_field(t, "periodic", cfg.task.periodic);
        if (t.contains("path")) {
            std::string p;
            read_field(t, "path", p);
            cfg.task.path = resolve(p, base_dir);
        }
    }
    if (j.contains("expressibility")) {
        const json& e = j.at("expressibility");
        reject_unknown(e, {"n_samples", "n_bins"}, "expressibility");
        read_field(e, "n_samples", cfg.expressibility.n_samples);
        read_field(e, "n_bins", cfg.expressibility.n_bins);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        reject_unknown(t,
                       {"learning_rate", "max_iters", "n_restarts", "accuracy_threshold", "convergence_window",
                        "convergence_tol", "beta1", "beta2", "epsilon"},
                       "train");
        read_field(t, "learning_rate", cfg.train.learning_rate);
        read_field(t, "max_iters", cfg.train.max_iters);
        read_field(t, "n_restarts", cfg.train.n_restarts);
        read_field(t, "accuracy_threshold", cfg.train.accuracy_threshold);
        read_field(t, "convergence_window", cfg.train.convergence_window);
        read_field(t, "convergence_tol", cfg.train.convergence_tol);
        read_field(t, "beta1", cfg.train.beta1);
        read_field(t, "beta2", cfg.train.beta2);
        read_field(t, "epsilon", cfg.train.epsilon);
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

DeviceGraph load_pipeline_device(const PipelineConfig& cfg) {
    return cfg.device_path ? load_device_file(*cfg.device_path) : two_yorktown_device();
}

PauliHamiltonian load_task(const TaskSpec& task) {
    if (task.kind == "tfim") return build_tfim(task.n, task.periodic);
    if (task.kind == "heisenberg") return build_heisenberg(task.n, task.periodic);
    if (task.kind == "file") return load_hamiltonian_file(task.path);
    throw ConfigError("unknown task kind '" + task.kind + "'");
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::generate: return "generate";
        case Stage::paths: return "paths";
        case Stage::expressibility: return "expressibility";
        case Stage::train: return "train";
    }
    return "unknown";
}

std::string_view to_string(StageStatus s) {
    switch (s) {
        case StageStatus::pending: return "pending";
        case StageStatus::partial: return "partial";
        case StageStatus::done: return "done";
    }
    return "unknown";
}

CircuitRecipe recipe_for(const PipelineConfig& cfg, int id) {
    const auto uid = static_cast<std::uint64_t>(id);
    Rng choice(derive_seed(cfg.master_seed, streams::choice, uid));
    CircuitRecipe r;
    r.id = id;
    r.gate_dist = kGateDistributions[uniform_index(choice, kGateDistributions.size())];
    r.p_nonlocal = kNonlocalProbabilities[uniform_index(choice, kNonlocalProbabilities.size())];
    r.seed = derive_seed(cfg.master_seed, streams::circuit, uid);
    return r;
}

Circuit build_circuit(const DeviceGraph& device, const PipelineConfig& cfg, const CircuitRecipe& recipe) {
    return build_circuit(device, derive_position_sets(device), cfg, recipe);
}

Circuit build_circuit(const DeviceGraph& device, const PositionSets& sets, const PipelineConfig& cfg,
                      const CircuitRecipe& recipe) {
    GenerationRequest req;
    req.n_gates = cfg.n_gates;
    req.gate_dist = recipe.gate_dist;
    req.p_nonlocal = recipe.p_nonlocal;
    req.method = cfg.method;
    req.n_logical = cfg.n_logical;
    Rng rng(recipe.seed);
    Circuit c = generate(device, sets, req, rng);
    c.meta->seed = recipe.seed;
    return c;
}

PipelineReport run_pipeline(const PipelineConfig& cfg, Stage last) {
    cfg.validate();
    Runner(cfg).run(last);
    return load_report(cfg.output_dir);
}

PipelineReport run_stage(const PipelineConfig& cfg, Stage stage) {
    cfg.validate();
    Runner(cfg).run_only(stage);
    return load_report(cfg.output_dir);
}

}  // namespace dqas
