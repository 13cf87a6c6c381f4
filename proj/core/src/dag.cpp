#include "dqas/dag.hpp"

#include <algorithm>

#include "dqas/error.hpp"

namespace dqas {

CircuitDag::CircuitDag(const std::vector<std::vector<int>>& gate_wires, int n_wires)
    : n_wires_(n_wires), in_(gate_wires.size() + 2), out_(gate_wires.size() + 2) {
    if (n_wires < 0) throw PreconditionError("dag: negative wire count");
    std::vector<int> frontier(n_wires, kSource);
    for (std::size_t i = 0; i < gate_wires.size(); ++i) {
        const int node = static_cast<int>(i) + 2;
        for (int w : gate_wires[i]) {
            if (w < 0 || w >= n_wires) throw PreconditionError("dag: gate references wire " + std::to_string(w));
            in_[node].push_back(frontier[w]);
            out_[frontier[w]].push_back(node);
            frontier[w] = node;
        }
    }
    for (int w = 0; w < n_wires; ++w) {
        in_[kSink].push_back(frontier[w]);
        out_[frontier[w]].push_back(kSink);
    }
}

CircuitDag build_dag(const Circuit& circuit) {
    const auto& wires = circuit.data_qubits;
    auto index_of = [&](QubitId q) {
        const auto it = std::lower_bound(wires.begin(), wires.end(), q);
        if (it == wires.end() || *it != q)
            throw PreconditionError("dag: q" + std::to_string(q) + " is not a data qubit of the circuit");
        return static_cast<int>(it - wires.begin());
    };
    std::vector<std::vector<int>> gate_wires;
    gate_wires.reserve(circuit.gates.size());
    for (const auto& g : circuit.gates) {
        std::vector<int> ws{index_of(g.qubits[0])};
        if (g.arity() == 2) ws.push_back(index_of(g.qubits[1]));
        gate_wires.push_back(std::move(ws));
    }
    return CircuitDag(gate_wires, static_cast<int>(wires.size()));
}

PathCount count_paths(const CircuitDag& dag) {
    // Gate nodes are numbered in a topological order; the sink comes last.
    std::vector<PathCount> paths(dag.num_nodes());
    paths[CircuitDag::kSource] = 1;
    for (int node = 2; node < dag.num_nodes(); ++node)
        for (int p : dag.predecessors(node)) paths[node] += paths[p];
    PathCount total = 0;
    for (int p : dag.predecessors(CircuitDag::kSink)) total += paths[p];
    return total;
}

}  // namespace dqas
