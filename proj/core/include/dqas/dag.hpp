#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "dqas/circuit.hpp"

namespace dqas {

using PathCount = boost::multiprecision::cpp_int;

/**
 * DAG view of a circuit: one source, one sink, one node per gate, and one
 * edge per wire segment. Parallel edges between the same pair of nodes are
 * kept as separate entries.
 *
 * Node 0 is the source, node 1 the sink, node 2 + i is gate i.
 */
class CircuitDag {
public:
    static constexpr int kSource = 0;
    static constexpr int kSink = 1;

    /// Builds the DAG from wire lists: gate i touches wires gate_wires[i].
    CircuitDag(const std::vector<std::vector<int>>& gate_wires, int n_wires);

    [[nodiscard]] int num_nodes() const noexcept { return static_cast<int>(in_.size()); }
    [[nodiscard]] int num_wires() const noexcept { return n_wires_; }
    /// Predecessor of each in-edge, one entry per edge.
    [[nodiscard]] const std::vector<int>& predecessors(int node) const { return in_.at(node); }
    [[nodiscard]] const std::vector<int>& successors(int node) const { return out_.at(node); }

private:
    int n_wires_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> out_;
};

/// DAG over the circuit's data qubits; wire i is circuit.data_qubits[i].
CircuitDag build_dag(const Circuit& circuit);

/// Number of distinct source-to-sink paths, counting parallel edges separately.
PathCount count_paths(const CircuitDag& dag);

inline PathCount count_paths(const Circuit& circuit) { return count_paths(build_dag(circuit)); }

}  // namespace dqas
