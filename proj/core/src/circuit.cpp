#include "dqas/circuit.hpp"

#include <algorithm>
#include <numeric>

#include "dqas/error.hpp"

namespace dqas {

std::string_view to_string(GateKind k) {
    switch (k) {
        case GateKind::U: return "U";
        case GateKind::CNOT: return "CNOT";
        case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::telegate: return "telegate";
        case Method::teledata: return "teledata";
        case Method::both: return "both";
    }
    return "?";
}

std::string_view to_string(NonlocalMethod m) {
    return m == NonlocalMethod::telegate ? "telegate" : "teledata";
}

GateKind parse_gate_kind(std::string_view s) {
    if (s == "U") return GateKind::U;
    if (s == "CNOT") return GateKind::CNOT;
    if (s == "SWAP") return GateKind::SWAP;
    throw ConfigError("unknown gate kind '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
    if (s == "telegate") return Method::telegate;
    if (s == "teledata") return Method::teledata;
    if (s == "both") return Method::both;
    throw ConfigError("unknown method '" + std::string(s) + "' (expected telegate, teledata or both)");
}

NonlocalMethod parse_nonlocal_method(std::string_view s) {
    if (s == "telegate") return NonlocalMethod::telegate;
    if (s == "teledata") return NonlocalMethod::teledata;
    throw ConfigError("unknown nonlocal tag '" + std::string(s) + "'");
}

Circuit Circuit::on_line(int n) {
    Circuit c;
    c.data_qubits.resize(n);
    std::iota(c.data_qubits.begin(), c.data_qubits.end(), 0);
    c.assignment.logical_to_physical = c.data_qubits;
    return c;
}

Circuit& Circuit::add_u(QubitId q) {
    gates.push_back(Gate::u(q, n_params));
    n_params += 3;
    return *this;
}

Circuit& Circuit::add_cnot(QubitId c, QubitId t) {
    gates.push_back(Gate::cnot(c, t));
    return *this;
}

Circuit& Circuit::add_swap(QubitId a, QubitId b) {
    gates.push_back(Gate::swap(a, b));
    return *this;
}

Placement::Placement(const QubitAssignment& assignment, const std::vector<QubitId>& data_qubits) {
    const QubitId max_q = data_qubits.empty() ? -1 : *std::max_element(data_qubits.begin(), data_qubits.end());
    wire_.assign(max_q + 1, -1);
    position_ = assignment.logical_to_physical;
    for (int w = 0; w < static_cast<int>(position_.size()); ++w) {
        const QubitId q = position_[w];
        if (q < 0 || q > max_q || wire_[q] != -1)
            throw PreconditionError("placement: invalid assignment of logical qubit " + std::to_string(w));
        wire_[q] = w;
    }
}

void Placement::move(QubitId from, QubitId to) {
    if (!occupied(from) || to < 0 || to >= static_cast<int>(wire_.size()) || occupied(to))
        throw PreconditionError("placement: move q" + std::to_string(from) + " -> q" + std::to_string(to) +
                                " needs an occupied source and an empty destination");
    exchange(from, to);
}

void Placement::exchange(QubitId a, QubitId b) {
    if (a < 0 || b < 0 || a >= static_cast<int>(wire_.size()) || b >= static_cast<int>(wire_.size()))
        throw PreconditionError("placement: qubit outside the data register");
    std::swap(wire_[a], wire_[b]);
    if (wire_[a] >= 0) position_[wire_[a]] = a;
    if (wire_[b] >= 0) position_[wire_[b]] = b;
}

}  // namespace dqas
