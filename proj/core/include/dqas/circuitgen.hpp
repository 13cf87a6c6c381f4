#pragma once

#include <array>
#include <cstdint>

#include "dqas/assembler.hpp"
#include "dqas/circuit.hpp"
#include "dqas/device.hpp"
#include "dqas/random.hpp"

namespace dqas {

struct GenerationRequest {
    int n_gates = 50;
    std::array<double, 3> gate_dist{0.5, 0.25, 0.25};  ///< U, CNOT, SWAP
    double p_nonlocal = 0.2;
    Method method = Method::telegate;
    int n_logical = 6;
    int max_rejections = 1000;  ///< consecutive rejected samples before giving up
};

/// Gate-type distributions a pipeline draws from for each circuit.
inline constexpr std::array<std::array<double, 3>, 3> kGateDistributions{{
    {0.4, 0.2, 0.4},
    {0.5, 0.25, 0.25},
    {0.6, 0.3, 0.1},
}};
inline constexpr std::array<double, 4> kNonlocalProbabilities{0.1, 0.2, 0.3, 0.4};

/**
 * Random distributed circuit with exactly `request.n_gates` gates.
 *
 * Draws a uniform qubit assignment, then repeatedly samples a gate type and a
 * position. Candidates that are redundant or have no legal position are
 * resampled without consuming a slot. Nonlocal CNOTs are realised with
 * TeleGate (cat-entangler plus virtual edges), TeleData (teleport into an
 * empty qubit), or either, per `request.method`.
 *
 * Throws PreconditionError for invalid requests and GenerationError when
 * max_rejections consecutive samples fail.
 */
Circuit generate(const DeviceGraph& device, const PositionSets& sets, const GenerationRequest& request,
                 Rng& rng);

/// Seeded convenience overload; records the seed in the circuit's metadata.
Circuit generate(const DeviceGraph& device, const GenerationRequest& request, std::uint64_t seed);

}  // namespace dqas
