#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dqas/random.hpp"

namespace dqas {

using QubitId = int;

enum class QubitRole { data, communication };

struct QubitSpec {
    QubitId id = 0;
    QubitRole role = QubitRole::data;
    int qpu = 0;
};

/// Undirected edge, stored with first < second.
using Edge = std::pair<QubitId, QubitId>;

constexpr Edge make_edge(QubitId a, QubitId b) noexcept {
    return a < b ? Edge{a, b} : Edge{b, a};
}

/**
 * A distributed quantum computing system: qubits split into data and
 * communication roles, intra-QPU couplings and inter-QPU quantum links.
 *
 * Construction validates every structural invariant:
 * - qubit ids are exactly 0..n-1;
 * - couplings join two distinct qubits on the same QPU;
 * - links join two communication qubits on different QPUs, at most once per pair;
 * - every data qubit is coupled to at most one communication qubit.
 *
 * Instances are immutable and safe to share between threads.
 */
class DeviceGraph {
public:
    DeviceGraph(std::vector<QubitSpec> qubits, std::vector<Edge> couplings,
                std::vector<Edge> links);

    [[nodiscard]] int num_qubits() const noexcept { return static_cast<int>(qubits_.size()); }
    [[nodiscard]] bool contains(QubitId q) const noexcept { return q >= 0 && q < num_qubits(); }
    [[nodiscard]] QubitRole role(QubitId q) const { return qubits_.at(q).role; }
    [[nodiscard]] bool is_data(QubitId q) const { return contains(q) && role(q) == QubitRole::data; }
    [[nodiscard]] bool is_communication(QubitId q) const {
        return contains(q) && role(q) == QubitRole::communication;
    }
    [[nodiscard]] int qpu_of(QubitId q) const { return qubits_.at(q).qpu; }

    [[nodiscard]] const std::vector<QubitSpec>& qubits() const noexcept { return qubits_; }
    [[nodiscard]] const std::vector<QubitId>& data_qubits() const noexcept { return data_; }
    [[nodiscard]] const std::vector<Edge>& couplings() const noexcept { return couplings_; }
    [[nodiscard]] const std::vector<Edge>& links() const noexcept { return links_; }

    /// Coupling neighbours of q (any role), sorted ascending.
    [[nodiscard]] const std::vector<QubitId>& neighbors(QubitId q) const { return adjacency_.at(q); }
    [[nodiscard]] bool coupled(QubitId a, QubitId b) const;

    /// The communication qubit coupled to a data qubit, if any.
    [[nodiscard]] std::optional<QubitId> communication_neighbor(QubitId q) const;

    /// Indices into links() of the links touching communication qubit q.
    [[nodiscard]] std::vector<std::size_t> links_of(QubitId q) const;

    /// Canonical JSON text. load_device(to_text()) reproduces an equal graph
    /// whose to_text() is byte-identical.
    [[nodiscard]] std::string to_text() const;

    /// FNV-1a hash of to_text(), printed as 16 hex digits.
    [[nodiscard]] std::string fingerprint() const;

    friend bool operator==(const DeviceGraph& a, const DeviceGraph& b) {
        return a.to_text() == b.to_text();
    }

private:
    std::vector<QubitSpec> qubits_;
    std::vector<Edge> couplings_;
    std::vector<Edge> links_;
    std::vector<QubitId> data_;
    std::vector<std::vector<QubitId>> adjacency_;
};

/// Parses a topology document. Throws ConfigError on malformed input or any
/// invariant violation.
DeviceGraph load_device(std::string_view text);
DeviceGraph load_device_file(const std::filesystem::path& path);

/// Two five-qubit IBM Yorktown QPUs joined by one link between q4 and q5.
/// q4 and q5 are communication qubits; R'(q4) = {q2, q3}, R'(q5) = {q6, q7}.
DeviceGraph two_yorktown_device();

/// Injective map from logical qubits to data qubits.
struct QubitAssignment {
    std::vector<QubitId> logical_to_physical;
    std::vector<QubitId> empty;  ///< data qubits outside the image, ascending

    [[nodiscard]] int num_logical() const noexcept {
        return static_cast<int>(logical_to_physical.size());
    }
    friend bool operator==(const QubitAssignment&, const QubitAssignment&) = default;
};

/// Validates `logical_to_physical` against the device and fills in the empty set.
QubitAssignment make_assignment(const DeviceGraph& device, std::vector<QubitId> logical_to_physical);

/// Uniform random injective assignment of n_logical logical qubits.
QubitAssignment sample_assignment(const DeviceGraph& device, int n_logical, Rng& rng);

}  // namespace dqas
