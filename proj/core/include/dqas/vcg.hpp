#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dqas/device.hpp"

namespace dqas {

/// (control, target) for nonlocal CNOT positions.
using OrderedPair = std::pair<QubitId, QubitId>;

/**
 * Static permissible gate positions over the data qubits of a device.
 *
 * `local` and `swap` hold undirected pairs (first < second); `telegate` and
 * `teledata` hold ordered (control, target) pairs. Every vector is sorted.
 */
struct PositionSets {
    std::vector<Edge> local;
    std::vector<Edge> swap;
    std::vector<OrderedPair> telegate;
    std::vector<OrderedPair> teledata;

    [[nodiscard]] bool is_local(QubitId a, QubitId b) const;
    [[nodiscard]] bool is_swap(QubitId a, QubitId b) const;
    [[nodiscard]] bool is_telegate(QubitId c, QubitId t) const;
    [[nodiscard]] bool is_teledata(QubitId c, QubitId t) const;

    /// Debug dump as JSON text.
    [[nodiscard]] std::string to_text() const;

    friend bool operator==(const PositionSets&, const PositionSets&) = default;
};

PositionSets derive_position_sets(const DeviceGraph& device);

/// Active cat-entangler occupying one link.
struct LinkOwner {
    QubitId control = -1;
    QubitId near = -1;  ///< communication qubit coupled to control
    QubitId far = -1;   ///< communication qubit on the remote QPU
    int cycle = -1;     ///< ebit index charged when the entangler was created

    friend bool operator==(const LinkOwner&, const LinkOwner&) = default;
};

/// A link released by a cat-disentangler.
struct LinkRelease {
    std::size_t link = 0;
    LinkOwner owner;
};

/**
 * Dynamic virtual-connectivity state: which data qubits are in control mode,
 * which links they occupy, the virtual edges this opens, and the ebits used.
 *
 * Holds a reference to the device, which must outlive the state. Single owner;
 * not thread-safe.
 */
class VcgState {
public:
    VcgState(const DeviceGraph& device, PositionSets sets);
    explicit VcgState(const DeviceGraph& device);

    [[nodiscard]] const DeviceGraph& device() const noexcept { return *device_; }
    [[nodiscard]] const PositionSets& sets() const noexcept { return sets_; }

    [[nodiscard]] bool control_mode(QubitId q) const;
    [[nodiscard]] bool has_virtual_edge(QubitId control, QubitId target) const {
        return virtual_edges_.contains({control, target});
    }
    [[nodiscard]] const std::set<OrderedPair>& virtual_edges() const noexcept { return virtual_edges_; }
    [[nodiscard]] const std::optional<LinkOwner>& link_owner(std::size_t link) const {
        return owners_.at(link);
    }
    [[nodiscard]] int ebits_consumed() const noexcept { return ebits_; }

    /// The link joining the communication neighbours of c and t, if one exists.
    [[nodiscard]] std::optional<std::size_t> link_between(QubitId c, QubitId t) const;

    /// Puts `control` into control mode over `link`, releasing the link's
    /// current owner first. Charges one ebit. Returns the releases performed.
    std::vector<LinkRelease> cat_entangle(QubitId control, std::size_t link);

    /// Takes `control` out of control mode, freeing every link it holds.
    /// Throws PreconditionError if `control` is not in control mode.
    std::vector<LinkRelease> cat_disentangle(QubitId control);

    /// cat_disentangle(q) when q is in control mode; no-op otherwise.
    std::vector<LinkRelease> exit_control_mode(QubitId q);

    /// Frees `link` by disentangling its owner, if any.
    std::vector<LinkRelease> release_link(std::size_t link);

    /// Charges one ebit for a teleportation; returns its cycle index.
    int consume_teledata_ebit();

    /// Throws PreconditionError if any structural invariant is violated.
    void check_invariants() const;

private:
    const DeviceGraph* device_;
    PositionSets sets_;
    std::vector<std::optional<LinkOwner>> owners_;
    std::set<OrderedPair> virtual_edges_;
    int ebits_ = 0;
};

}  // namespace dqas
