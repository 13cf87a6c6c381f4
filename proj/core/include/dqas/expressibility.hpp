#pragma once

#include <cstdint>
#include <vector>

#include "dqas/circuit.hpp"

namespace dqas {

struct ExpressibilitySettings {
    int n_samples = 5000;
    int n_bins = 75;
};

struct ExpressibilityEstimate {
    double value = 0.0;  ///< nats; lower is more expressive
    int n_samples = 0;
    int n_bins = 0;
};

/// Probability mass of each of n_bins equal fidelity bins on [0, 1] under the
/// fidelity distribution of Haar-random pure states of dimension `dim`.
/// Masses are floored at the smallest positive normal double.
std::vector<double> haar_bin_masses(double dim, int n_bins);

/// Bin index of fidelity f in [0, 1]; f = 1 falls in the last bin.
int fidelity_bin(double f, int n_bins);

/// KL divergence of a fidelity histogram from the Haar bin masses. Every
/// empirical bin probability is shifted by 1e-12 and the result renormalised.
double kl_from_haar(const std::vector<std::uint64_t>& counts, double dim);

/**
 * KL divergence between the distribution of F = |<psi(theta)|psi(theta')>|^2
 * over independent parameter pairs, each angle uniform on [0, 2pi), and the
 * Haar fidelity distribution. Deterministic for a fixed seed.
 */
ExpressibilityEstimate estimate_expressibility(const Circuit& circuit, const ExpressibilitySettings& settings,
                                               std::uint64_t seed);

}  // namespace dqas
