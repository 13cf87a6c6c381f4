#include "dqas/expressibility.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "dqas/error.hpp"
#include "dqas/random.hpp"
#include "dqas/simulator.hpp"

namespace dqas {

namespace {

constexpr double kSmoothing = 1e-12;

}  // namespace

std::vector<double> haar_bin_masses(double dim, int n_bins) {
    if (n_bins < 1) throw PreconditionError("expressibility: n_bins must be positive");
    if (dim < 2) throw PreconditionError("expressibility: Hilbert space dimension must be at least 2");
    std::vector<double> masses(n_bins);
    for (int k = 0; k < n_bins; ++k) {
        const double a = static_cast<double>(k) / n_bins;
        const double b = static_cast<double>(k + 1) / n_bins;
        const double m = std::pow(1.0 - a, dim - 1) - std::pow(1.0 - b, dim - 1);
        masses[k] = std::max(m, DBL_MIN);
    }
    return masses;
}

int fidelity_bin(double f, int n_bins) {
    const int k = static_cast<int>(std::floor(f * n_bins));
    return std::clamp(k, 0, n_bins - 1);
}

double kl_from_haar(const std::vector<std::uint64_t>& counts, double dim) {
    const int n_bins = static_cast<int>(counts.size());
    const auto haar = haar_bin_masses(dim, n_bins);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw PreconditionError("expressibility: empty histogram");
    const double norm = 1.0 + n_bins * kSmoothing;
    double kl = 0.0;
    for (int k = 0; k < n_bins; ++k) {
        const double p = (static_cast<double>(counts[k]) / static_cast<double>(total) + kSmoothing) / norm;
        kl += p * std::log(p / haar[k]);
    }
    return std::max(kl, 0.0);
}

ExpressibilityEstimate estimate_expressibility(const Circuit& circuit, const ExpressibilitySettings& settings,
                                               std::uint64_t seed) {
    if (settings.n_samples < 1) throw PreconditionError("expressibility: n_samples must be positive");
    if (settings.n_bins < 1) throw PreconditionError("expressibility: n_bins must be positive");
    if (circuit.num_logical() < 1) throw PreconditionError("expressibility: circuit has no logical qubits");
    const WireProgram program = compile(circuit);
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> p0(program.n_params);
    std::vector<double> p1(program.n_params);
    std::vector<std::uint64_t> counts(settings.n_bins, 0);
    const Statevector zero(program.n_wires);
    for (int s = 0; s < settings.n_samples; ++s) {
        for (auto& x : p0) x = angle(rng);
        for (auto& x : p1) x = angle(rng);
        Statevector a = zero;
        Statevector b = zero;
        run(program, p0, a);
        run(program, p1, b);
        ++counts[fidelity_bin(fidelity(a, b), settings.n_bins)];
    }
    const double dim = std::ldexp(1.0, program.n_wires);
    return {kl_from_haar(counts, dim), settings.n_samples, settings.n_bins};
}

}  // namespace dqas
