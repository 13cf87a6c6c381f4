#include "dqas/physical.hpp"

#include "dqas/assembler.hpp"
#include "dqas/error.hpp"

namespace dqas {

namespace {

using Kind = ProtocolStep::Kind;

void bell_pair(Statevector& s, QubitId a, QubitId b) {
    s.apply_h(a);
    s.apply_cnot(a, b);
}

std::size_t embed(std::size_t logical, const std::vector<QubitId>& positions, const Statevector& reg, int n_wires) {
    std::size_t index = 0;
    for (int w = 0; w < n_wires; ++w)
        if (logical & (std::size_t{1} << (n_wires - 1 - w))) index |= reg.mask(positions[w]);
    return index;
}

}  // namespace

Statevector apply_physical(const Circuit& circuit, std::span<const double> params, const DeviceGraph& device,
                           const Statevector& initial) {
    if (device.num_qubits() > kMaxPhysicalQubits)
        throw PreconditionError("apply_physical: device has " + std::to_string(device.num_qubits()) +
                                " qubits, limit is " + std::to_string(kMaxPhysicalQubits));
    const int n_wires = circuit.num_logical();
    if (initial.num_qubits() != n_wires) throw PreconditionError("apply_physical: initial state dimension mismatch");
    if (static_cast<int>(params.size()) != circuit.n_params)
        throw PreconditionError("apply_physical: parameter count mismatch");

    const ReplayResult replayed = replay(circuit, device);

    Statevector reg(device.num_qubits());
    reg[0] = 0.0;
    const auto& start = circuit.assignment.logical_to_physical;
    for (std::size_t l = 0; l < initial.dimension(); ++l) reg[embed(l, start, reg, n_wires)] = initial[l];

    for (const ProtocolStep& s : replayed.steps) {
        switch (s.kind) {
            case Kind::u:
                reg.apply_u(s.a, params[s.param_offset], params[s.param_offset + 1], params[s.param_offset + 2]);
                break;
            case Kind::cnot: reg.apply_cnot(s.a, s.b); break;
            case Kind::swap: reg.apply_swap(s.a, s.b); break;
            case Kind::cat_entangle:  // a control, b near, c far
                bell_pair(reg, s.b, s.c);
                reg.apply_cnot(s.a, s.b);
                reg.apply_cnot(s.b, s.c);  // measure near, X on far
                reg.apply_h(s.b);          // near back to |0>
                break;
            case Kind::remote_cnot: reg.apply_cnot(s.a, s.b); break;
            case Kind::cat_disentangle:
                reg.apply_h(s.c);
                reg.apply_cz(s.c, s.a);  // measure far, Z on control
                reg.apply_h(s.c);
                break;
            case Kind::teleport:  // a mover, b near, c far, d landing
                bell_pair(reg, s.b, s.c);
                reg.apply_cnot(s.a, s.b);
                reg.apply_h(s.a);
                reg.apply_cnot(s.b, s.c);  // measure near, X on far
                reg.apply_cz(s.a, s.c);    // measure mover, Z on far
                reg.apply_h(s.a);
                reg.apply_h(s.b);
                reg.apply_swap(s.c, s.d);
                break;
        }
    }

    std::vector<Complex> out(initial.dimension());
    const auto& final_positions = replayed.final_placement.positions();
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = reg[embed(l, final_positions, reg, n_wires)];
    return Statevector::from_amplitudes(std::move(out));
}

Statevector apply_physical(const Circuit& circuit, std::span<const double> params, const DeviceGraph& device) {
    return apply_physical(circuit, params, device, Statevector(circuit.num_logical()));
}

}  // namespace dqas
