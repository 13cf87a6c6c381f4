#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dqas/circuit.hpp"
#include "dqas/hamiltonian.hpp"
#include "dqas/simulator.hpp"

namespace dqas {

struct TrainConfig {
    double learning_rate = 0.01;
    int max_iters = 10000;
    int n_restarts = 10;
    double accuracy_threshold = 0.0016;
    std::optional<double> target_energy;  ///< no accuracy stop when unset
    int convergence_window = 50;
    double convergence_tol = 1e-8;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    unsigned workers = 1;  ///< threads used for restarts

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;
};

/// Energy <0|V(theta)^dag H V(theta)|0> and its exact gradient, computed by
/// one forward pass and one reverse (adjoint) pass over the circuit.
EnergyGradient energy_and_gradient(const WireProgram& program, std::span<const double> params,
                                   const PauliHamiltonian& h);
EnergyGradient energy_and_gradient(const Circuit& circuit, std::span<const double> params,
                                   const PauliHamiltonian& h);

double energy(const Circuit& circuit, std::span<const double> params, const PauliHamiltonian& h);

struct RestartResult {
    double best_energy = 0.0;   ///< lowest energy seen during the descent
    double initial_energy = 0.0;
    double final_energy = 0.0;  ///< energy at the last evaluated point
    std::vector<double> best_params;
    int iterations = 0;         ///< Adam steps taken
    enum class Stop { accuracy, converged, max_iters, no_parameters } stop = Stop::max_iters;
};

struct QueryResult {
    double best_energy = 0.0;
    std::vector<double> best_params;
    std::vector<double> restart_energies;
    std::vector<int> iterations_used;
    bool solved = false;
};

/// One Adam descent from angles drawn uniformly on [0, 2pi) with `seed`.
RestartResult train_restart(const WireProgram& program, const PauliHamiltonian& h, const TrainConfig& cfg,
                            std::uint64_t seed);

/// Seed of restart r within a query seeded with `seed`.
std::uint64_t restart_seed(std::uint64_t seed, int r);

/// cfg.n_restarts independent descents; the query's result is the best of them.
QueryResult train_query(const Circuit& circuit, const PauliHamiltonian& h, const TrainConfig& cfg,
                        std::uint64_t seed);

std::string_view to_string(RestartResult::Stop s);

}  // namespace dqas
