#pragma once

#include <span>
#include <vector>

#include "dqas/circuit.hpp"
#include "dqas/hamiltonian.hpp"
#include "dqas/statevector.hpp"

namespace dqas {

/// One gate on logical wires.
struct WireOp {
    GateKind kind = GateKind::U;
    int w0 = -1;
    int w1 = -1;
    int param_offset = -1;
};

/**
 * A circuit lowered onto its logical wires. Wire i is logical qubit i.
 * TeleGate CNOTs become plain CNOTs, TeleData relocations and SWAPs into
 * empty qubits become relabelings, and SWAPs of two occupied qubits stay
 * SWAPs on the wires they hold.
 */
struct WireProgram {
    int n_wires = 0;
    int n_params = 0;
    std::vector<WireOp> ops;
    std::vector<QubitId> final_positions;  ///< data qubit holding each wire at the end
};

WireProgram compile(const Circuit& circuit);

/// Applies the program to `state` in place. params.size() must equal n_params.
void run(const WireProgram& program, std::span<const double> params, Statevector& state);

/// Output state of the circuit on its logical register. Throws
/// PreconditionError on a parameter-count or dimension mismatch.
Statevector apply_circuit(const Circuit& circuit, std::span<const double> params, const Statevector& initial);
Statevector apply_circuit(const Circuit& circuit, std::span<const double> params);

/// H|psi>.
Statevector apply_hamiltonian(const PauliHamiltonian& h, const Statevector& state);

/// <psi|H|psi>.
double expectation(const Statevector& state, const PauliHamiltonian& h);

}  // namespace dqas
