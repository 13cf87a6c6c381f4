#pragma once

#include <optional>
#include <vector>

#include "dqas/circuit.hpp"
#include "dqas/device.hpp"
#include "dqas/vcg.hpp"

namespace dqas {

/**
 * Per-qubit gate history used to reject redundant gates.
 *
 * A candidate is redundant when it
 *  - is a U directly after a U on the same qubit;
 *  - is a CNOT directly after the identical CNOT (same control and target);
 *  - repeats SWAP(a, b) while neither a nor b has joined another two-qubit
 *    gate or a teleportation since;
 *  - is a CNOT whose control has not been touched by any gate;
 *  - is a SWAP of two untouched qubits, neither of them empty.
 *
 * History follows the physical qubit; a teleportation carries the "untouched"
 * flag to the landing qubit and leaves the source empty and untouched.
 */
class RedundancyTracker {
public:
    RedundancyTracker() = default;
    RedundancyTracker(const QubitAssignment& assignment, const std::vector<QubitId>& data_qubits);

    /// Judges `g` as recorded; a TeleData relocation on `g` is applied first.
    [[nodiscard]] bool is_redundant(const Gate& g) const;

    void relocate(QubitId from, QubitId to);
    /// Records `g` as gate number `index`. Does not apply g's relocation.
    void record(const Gate& g, int index);

    [[nodiscard]] bool untouched(QubitId q) const { return slot(q).fresh; }
    [[nodiscard]] bool empty(QubitId q) const { return slot(q).empty; }

private:
    struct Mark {
        int index = -1;
        GateKind kind = GateKind::U;
        QubitId a = -1;
        QubitId b = -1;
    };
    struct Slot {
        std::optional<Mark> last_gate;
        std::optional<Mark> last_pair;
        bool fresh = true;
        bool empty = true;
    };
    [[nodiscard]] const Slot& slot(QubitId q) const;
    [[nodiscard]] bool judge(const Gate& g) const;

    std::vector<Slot> slots_;
};

/// One physical operation of the protocol-level lowering of a circuit.
struct ProtocolStep {
    enum class Kind {
        u,                ///< a: qubit, param_offset
        cnot,             ///< a: control, b: target (local)
        swap,             ///< a, b
        cat_entangle,     ///< a: control, b: near comm qubit, c: far comm qubit
        remote_cnot,      ///< a: far comm qubit acting as control, b: target
        cat_disentangle,  ///< a: control, b: near comm qubit, c: far comm qubit
        teleport,         ///< a: mover, b: near comm, c: far comm, d: landing qubit
    };
    Kind kind = Kind::u;
    QubitId a = -1, b = -1, c = -1, d = -1;
    int param_offset = -1;

    friend bool operator==(const ProtocolStep&, const ProtocolStep&) = default;
};

/// A way to teleport `mover` across a link into an empty landing qubit.
struct TeledataRoute {
    QubitId mover = -1;
    QubitId near = -1;
    QubitId far = -1;
    QubitId landing = -1;
    std::size_t link = 0;
    friend bool operator==(const TeledataRoute&, const TeledataRoute&) = default;
};

/// Routes that teleport `mover` next to `partner` (landing coupled to partner).
std::vector<TeledataRoute> teledata_routes(const DeviceGraph& device, const Placement& placement,
                                           QubitId mover, QubitId partner);

/// Executes a teleportation on the virtual-connectivity state: frees the link,
/// takes the mover and landing qubit out of control mode, charges one ebit,
/// and moves the logical qubit. Returns the ebit cycle. Releases are appended
/// to `released` when given.
int apply_teledata(VcgState& state, Placement& placement, const TeledataRoute& route,
                   std::vector<LinkRelease>* released = nullptr);

/**
 * Incrementally builds a distributed circuit while enforcing its legality:
 * permissible positions, empty-qubit rules, control-mode exits, link
 * occupancy, and ebit accounting. Used both by the generator and to replay a
 * stored circuit. When a protocol trace is requested every physical step
 * (entanglers, disentanglers, teleports, local gates) is appended to it.
 */
class CircuitAssembler {
public:
    CircuitAssembler(const DeviceGraph& device, const PositionSets& sets, QubitAssignment assignment);

    void enable_trace() { tracing_ = true; }
    [[nodiscard]] const std::vector<ProtocolStep>& trace() const noexcept { return trace_; }

    [[nodiscard]] const DeviceGraph& device() const noexcept { return *device_; }
    [[nodiscard]] const VcgState& vcg() const noexcept { return vcg_; }
    [[nodiscard]] const Placement& placement() const noexcept { return placement_; }
    [[nodiscard]] const RedundancyTracker& history() const noexcept { return history_; }
    [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }
    [[nodiscard]] bool occupied(QubitId q) const { return placement_.occupied(q); }
    [[nodiscard]] bool is_redundant(const Gate& g) const { return history_.is_redundant(g); }

    /// Validates and appends `g`. Fills in the U parameter offset and the
    /// nonlocal cycle when they are unset (-1); otherwise they must match.
    /// Throws PreconditionError for an illegal gate.
    const Gate& append(Gate g);

    /// Disentangles every remaining control qubit (trace only) and returns the circuit.
    Circuit finish();

private:
    void exit_control(QubitId q);
    void emit(const std::vector<LinkRelease>& released);
    void step(ProtocolStep s) {
        if (tracing_) trace_.push_back(s);
    }

    const DeviceGraph* device_;
    VcgState vcg_;
    QubitAssignment assignment_;
    Placement placement_;
    RedundancyTracker history_;
    std::vector<Gate> gates_;
    int n_params_ = 0;
    bool tracing_ = false;
    std::vector<ProtocolStep> trace_;
};

struct ReplayResult {
    std::vector<ProtocolStep> steps;
    Placement final_placement;
    int ebits = 0;
};

/// Re-executes a stored circuit on `device` and checks every gate for legality
/// and non-redundancy and the recorded ebit count. Throws PreconditionError.
ReplayResult replay(const Circuit& circuit, const DeviceGraph& device);

/// Whether `candidate` would be redundant after the gates of `so_far`.
bool is_redundant(const Circuit& so_far, const Gate& candidate);

}  // namespace dqas
