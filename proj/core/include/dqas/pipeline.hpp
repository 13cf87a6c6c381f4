#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqas/circuit.hpp"
#include "dqas/device.hpp"
#include "dqas/expressibility.hpp"
#include "dqas/hamiltonian.hpp"
#include "dqas/vcg.hpp"
#include "dqas/vqe.hpp"

namespace dqas {

struct TaskSpec {
    std::string kind = "tfim";  ///< tfim, heisenberg or file
    int n = 6;
    bool periodic = true;
    std::filesystem::path path;  ///< Hamiltonian file for kind == "file"
};

struct PipelineConfig {
    int k_a = 100000;
    int k_p = 10000;
    int k_e = 1000;
    int n_gates = 50;
    Method method = Method::telegate;
    int n_logical = 6;
    std::uint64_t master_seed = 0;
    std::optional<std::filesystem::path> device_path;  ///< built-in two-QPU device when unset
    TaskSpec task;
    ExpressibilitySettings expressibility;
    TrainConfig train;
    std::optional<int> query_budget;          ///< min(k_e, 200) when unset
    std::optional<int> stop_after_solutions;  ///< keep querying to the budget when unset
    unsigned workers = 1;
    int chunk_size = 256;  ///< records computed between appends to a scoreboard
    std::filesystem::path output_dir = "dqas_out";

    [[nodiscard]] int effective_query_budget() const;
    /// Throws ConfigError when a field is out of range.
    void validate() const;
    /// Canonical JSON of every field that influences results. Worker count,
    /// chunk size and output directory are excluded.
    [[nodiscard]] std::string canonical_text() const;
    [[nodiscard]] std::string hash() const;
};

/// Parses a JSON config. Relative paths resolve against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

DeviceGraph load_pipeline_device(const PipelineConfig& cfg);
PauliHamiltonian load_task(const TaskSpec& task);

enum class Stage { generate, paths, expressibility, train };
inline constexpr Stage kStages[] = {Stage::generate, Stage::paths, Stage::expressibility, Stage::train};
std::string_view to_string(Stage s);

/// Scoreboard file names inside the output directory.
namespace files {
inline constexpr const char* manifest = "manifest.json";
inline constexpr const char* generated = "generated.jsonl";
inline constexpr const char* paths_top = "paths_top.jsonl";
inline constexpr const char* expressibility = "expressibility.jsonl";
inline constexpr const char* candidates = "candidates.jsonl";
inline constexpr const char* queries = "queries.jsonl";
inline constexpr const char* timings = "timings.jsonl";
}  // namespace files

/// Stream tags for derive_seed.
namespace streams {
inline constexpr std::uint64_t choice = 1;
inline constexpr std::uint64_t circuit = 2;
inline constexpr std::uint64_t expressibility = 3;
inline constexpr std::uint64_t query = 4;
}  // namespace streams

/// Per-circuit generation choice for circuit `id`.
struct CircuitRecipe {
    int id = 0;
    std::uint64_t seed = 0;
    std::array<double, 3> gate_dist{};
    double p_nonlocal = 0.0;
};
CircuitRecipe recipe_for(const PipelineConfig& cfg, int id);
Circuit build_circuit(const DeviceGraph& device, const PipelineConfig& cfg, const CircuitRecipe& recipe);
Circuit build_circuit(const DeviceGraph& device, const PositionSets& sets, const PipelineConfig& cfg,
                      const CircuitRecipe& recipe);

/// One line of queries.jsonl.
struct QueryRecord {
    int query = 0;
    int id = 0;
    double best_energy = 0.0;
    std::vector<double> restart_energies;
    std::vector<int> iterations;
    bool solved = false;
    int ebits = 0;
};

enum class StageStatus { pending, partial, done };
std::string_view to_string(StageStatus s);

struct StageSummary {
    Stage stage = Stage::generate;
    StageStatus status = StageStatus::pending;
    std::size_t records = 0;
};

struct PipelineReport {
    std::vector<StageSummary> stages;
    std::vector<std::string> generated_paths;  ///< stage-1 path counts, decimal
    std::vector<int> generated_ebits;
    std::vector<double> expressibility;        ///< stage-3 values in path-rank order
    std::vector<int> candidate_ebits;
    std::vector<QueryRecord> queries;
    std::vector<double> query_trace;           ///< lowest energy after each query
    std::optional<double> ground_energy;
    int n_solutions = 0;
    std::optional<int> min_solution_ebits;
    std::optional<double> gap;                 ///< best queried energy minus ground energy

    [[nodiscard]] StageStatus status(Stage s) const;
};

/// Runs every stage up to and including `last`, resuming from whatever the
/// output directory already holds. Throws ConfigError when the directory holds
/// results of a different configuration.
PipelineReport run_pipeline(const PipelineConfig& cfg, Stage last = Stage::train);

/// Runs a single stage. Throws Error when an earlier stage is incomplete.
PipelineReport run_stage(const PipelineConfig& cfg, Stage stage);

/// Reads the scoreboards in `dir`. Throws Error when no pipeline state exists.
PipelineReport load_report(const std::filesystem::path& dir);

/// Writes paths_hist.csv, expressibility_hist.csv, ebits_hist.csv,
/// query_trace.csv and summary.csv into `dir` and returns the summary table.
std::string write_report(const std::filesystem::path& dir);

}  // namespace dqas
