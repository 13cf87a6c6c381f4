#pragma once

#include <span>

#include "dqas/circuit.hpp"
#include "dqas/device.hpp"
#include "dqas/statevector.hpp"

namespace dqas {

/// Largest device register apply_physical will simulate.
inline constexpr int kMaxPhysicalQubits = 20;

/**
 * Reference simulation of a circuit on the whole device register, including
 * communication qubits. Every entangler, disentangler and teleportation is
 * simulated gate by gate, with each mid-circuit measurement and its classical
 * correction replaced by the equivalent controlled gate. Bell pairs are
 * prepared on the link endpoints when consumed.
 *
 * Returns the data wires at their final positions in logical order, projected
 * onto |0> of every other qubit and not renormalised, so any leakage into the
 * communication or empty qubits shows up as lost norm.
 */
Statevector apply_physical(const Circuit& circuit, std::span<const double> params, const DeviceGraph& device,
                           const Statevector& initial);
Statevector apply_physical(const Circuit& circuit, std::span<const double> params, const DeviceGraph& device);

}  // namespace dqas
