#include "dqas/simulator.hpp"

#include <bit>

#include "dqas/error.hpp"

namespace dqas {

namespace {

const Complex kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_dimension(const PauliHamiltonian& h, const Statevector& state) {
    if (h.num_qubits() != state.num_qubits())
        throw PreconditionError("hamiltonian acts on " + std::to_string(h.num_qubits()) + " qubits, state has " +
                                std::to_string(state.num_qubits()));
}

}  // namespace

WireProgram compile(const Circuit& circuit) {
    WireProgram program;
    program.n_wires = circuit.num_logical();
    program.n_params = circuit.n_params;
    Placement placement(circuit.assignment, circuit.data_qubits);
    auto wire = [&](QubitId q) {
        const int w = placement.wire_at(q);
        if (w < 0) throw PreconditionError("compile: gate on empty qubit " + std::to_string(q));
        return w;
    };
    program.ops.reserve(circuit.gates.size());
    for (const Gate& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::U:
                if (g.param_offset < 0 || g.param_offset + 3 > circuit.n_params)
                    throw PreconditionError("compile: U gate parameter offset out of range");
                program.ops.push_back({GateKind::U, wire(g.qubits[0]), -1, g.param_offset});
                break;
            case GateKind::CNOT:
                if (g.nonlocal && g.nonlocal->relocation)
                    placement.move(g.nonlocal->relocation->from, g.nonlocal->relocation->to);
                program.ops.push_back({GateKind::CNOT, wire(g.qubits[0]), wire(g.qubits[1]), -1});
                break;
            case GateKind::SWAP: {
                const bool a = placement.occupied(g.qubits[0]);
                const bool b = placement.occupied(g.qubits[1]);
                if (a && b)
                    program.ops.push_back({GateKind::SWAP, wire(g.qubits[0]), wire(g.qubits[1]), -1});
                else if (a || b)
                    placement.exchange(g.qubits[0], g.qubits[1]);
                else
                    throw PreconditionError("compile: SWAP of two empty qubits");
                break;
            }
        }
    }
    program.final_positions = placement.positions();
    return program;
}

void run(const WireProgram& program, std::span<const double> params, Statevector& state) {
    if (static_cast<int>(params.size()) != program.n_params)
        throw PreconditionError("expected " + std::to_string(program.n_params) + " parameters, got " +
                                std::to_string(params.size()));
    if (state.num_qubits() != program.n_wires)
        throw PreconditionError("expected a " + std::to_string(program.n_wires) + "-qubit state, got " +
                                std::to_string(state.num_qubits()));
    for (const WireOp& op : program.ops) {
        switch (op.kind) {
            case GateKind::U:
                state.apply_u(op.w0, params[op.param_offset], params[op.param_offset + 1], params[op.param_offset + 2]);
                break;
            case GateKind::CNOT: state.apply_cnot(op.w0, op.w1); break;
            case GateKind::SWAP: state.apply_swap(op.w0, op.w1); break;
        }
    }
}

Statevector apply_circuit(const Circuit& circuit, std::span<const double> params, const Statevector& initial) {
    Statevector state = initial;
    run(compile(circuit), params, state);
    return state;
}

Statevector apply_circuit(const Circuit& circuit, std::span<const double> params) {
    return apply_circuit(circuit, params, Statevector(circuit.num_logical()));
}

Statevector apply_hamiltonian(const PauliHamiltonian& h, const Statevector& state) {
    check_dimension(h, state);
    std::vector<Complex> out(state.dimension(), Complex(0.0));
    const auto amp = state.amplitudes();
    for (std::size_t t = 0; t < h.terms().size(); ++t) {
        const auto& m = h.masks()[t];
        const Complex c = h.terms()[t].coefficient * kPhase[m.n_y & 3];
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const Complex v = c * amp[i];
            out[i ^ m.flip] += (std::popcount(i & m.phase) & 1) ? -v : v;
        }
    }
    return Statevector::from_amplitudes(std::move(out));
}

double expectation(const Statevector& state, const PauliHamiltonian& h) {
    check_dimension(h, state);
    const auto amp = state.amplitudes();
    double energy = 0.0;
    for (std::size_t t = 0; t < h.terms().size(); ++t) {
        const auto& m = h.masks()[t];
        Complex acc(0.0);
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const Complex v = std::conj(amp[i ^ m.flip]) * amp[i];
            acc += (std::popcount(i & m.phase) & 1) ? -v : v;
        }
        energy += h.terms()[t].coefficient * (kPhase[m.n_y & 3] * acc).real();
    }
    return energy;
}

}  // namespace dqas
