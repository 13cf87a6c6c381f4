#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqas/device.hpp"

namespace dqas {

enum class GateKind { U, CNOT, SWAP };

/// How a circuit's nonlocal CNOTs may be realised.
enum class Method { telegate, teledata, both };

/// How one particular nonlocal CNOT was realised.
enum class NonlocalMethod { telegate, teledata };

std::string_view to_string(GateKind k);
std::string_view to_string(Method m);
std::string_view to_string(NonlocalMethod m);
GateKind parse_gate_kind(std::string_view s);
Method parse_method(std::string_view s);
NonlocalMethod parse_nonlocal_method(std::string_view s);

/// A logical qubit teleported from one data qubit into an empty one.
struct Relocation {
    QubitId from = -1;
    QubitId to = -1;
    friend bool operator==(const Relocation&, const Relocation&) = default;
};

struct NonlocalTag {
    NonlocalMethod method = NonlocalMethod::telegate;
    int cycle = -1;  ///< index of the ebit that made this gate possible
    std::optional<Relocation> relocation;  ///< set for TeleData; applied before the gate
    friend bool operator==(const NonlocalTag&, const NonlocalTag&) = default;
};

/**
 * One native gate on physical data qubits. CNOT positions are (control, target).
 * U gates read parameters [param_offset, param_offset + 3) as (theta, phi, lambda).
 * A TeleData CNOT is recorded on the positions it acts on after the relocation.
 */
struct Gate {
    GateKind kind = GateKind::U;
    std::array<QubitId, 2> qubits{-1, -1};
    int param_offset = -1;
    std::optional<NonlocalTag> nonlocal;

    [[nodiscard]] int arity() const noexcept { return kind == GateKind::U ? 1 : 2; }

    static Gate u(QubitId q, int param_offset = -1) { return {GateKind::U, {q, -1}, param_offset, {}}; }
    static Gate cnot(QubitId c, QubitId t) { return {GateKind::CNOT, {c, t}, -1, {}}; }
    static Gate swap(QubitId a, QubitId b) { return {GateKind::SWAP, {a, b}, -1, {}}; }

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct GenerationMeta {
    std::array<double, 3> gate_dist{};  ///< probabilities of U, CNOT, SWAP
    double p_nonlocal = 0.0;
    Method method = Method::telegate;
    std::uint64_t seed = 0;
    friend bool operator==(const GenerationMeta&, const GenerationMeta&) = default;
};

/**
 * An ordered gate list over the data qubits of a device plus the bookkeeping
 * needed to simulate it: the initial logical assignment, the data-qubit order
 * used as DAG wires, and the ebit cost.
 */
struct Circuit {
    std::vector<Gate> gates;
    int n_params = 0;
    int ebits = 0;
    QubitAssignment assignment;
    std::vector<QubitId> data_qubits;  ///< ascending
    std::string device_fingerprint;
    std::optional<GenerationMeta> meta;

    [[nodiscard]] int num_logical() const noexcept { return assignment.num_logical(); }
    [[nodiscard]] int num_u_gates() const noexcept { return n_params / 3; }

    /// Empty circuit on n qubits numbered 0..n-1, logical qubit i on qubit i.
    /// For hand-built circuits that are simulated but not replayed on a device.
    static Circuit on_line(int n);

    Circuit& add_u(QubitId q);
    Circuit& add_cnot(QubitId c, QubitId t);
    Circuit& add_swap(QubitId a, QubitId b);

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Tracks which logical wire sits on each data qubit while a circuit runs.
class Placement {
public:
    Placement() = default;
    Placement(const QubitAssignment& assignment, const std::vector<QubitId>& data_qubits);

    [[nodiscard]] int wire_at(QubitId q) const {
        return q >= 0 && q < static_cast<int>(wire_.size()) ? wire_[q] : -1;
    }
    [[nodiscard]] bool occupied(QubitId q) const { return wire_at(q) >= 0; }
    [[nodiscard]] QubitId position_of(int wire) const { return position_.at(wire); }
    [[nodiscard]] const std::vector<QubitId>& positions() const noexcept { return position_; }
    [[nodiscard]] int num_wires() const noexcept { return static_cast<int>(position_.size()); }

    /// Moves the wire on `from` into the empty qubit `to`.
    void move(QubitId from, QubitId to);
    /// Exchanges the contents of two qubits; either may be empty.
    void exchange(QubitId a, QubitId b);

private:
    std::vector<int> wire_;
    std::vector<QubitId> position_;
};

/// JSON text for one circuit on a single line (no trailing newline).
std::string circuit_to_text(const Circuit& circuit);
/// Inverse of circuit_to_text. Throws ConfigError on malformed input.
Circuit circuit_from_text(std::string_view text);

}  // namespace dqas
