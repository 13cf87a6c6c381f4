#include "dqas/assembler.hpp"

#include <algorithm>
#include <string>

#include "dqas/error.hpp"

namespace dqas {

namespace {

std::string q(QubitId id) { return "q" + std::to_string(id); }

}  // namespace

RedundancyTracker::RedundancyTracker(const QubitAssignment& assignment,
                                     const std::vector<QubitId>& data_qubits) {
    const QubitId max_q = data_qubits.empty() ? -1 : *std::max_element(data_qubits.begin(), data_qubits.end());
    slots_.assign(max_q + 1, Slot{});
    for (QubitId p : assignment.logical_to_physical) slots_.at(p).empty = false;
}

const RedundancyTracker::Slot& RedundancyTracker::slot(QubitId id) const {
    if (id < 0 || id >= static_cast<int>(slots_.size()))
        throw PreconditionError("redundancy: " + q(id) + " is outside the data register");
    return slots_[id];
}

bool RedundancyTracker::is_redundant(const Gate& g) const {
    if (g.nonlocal && g.nonlocal->relocation) {
        RedundancyTracker moved = *this;
        moved.relocate(g.nonlocal->relocation->from, g.nonlocal->relocation->to);
        return moved.judge(g);
    }
    return judge(g);
}

bool RedundancyTracker::judge(const Gate& g) const {
    const QubitId a = g.qubits[0];
    const QubitId b = g.qubits[1];
    switch (g.kind) {
        case GateKind::U: {
            const auto& last = slot(a).last_gate;
            return last && last->kind == GateKind::U;
        }
        case GateKind::CNOT: {
            if (slot(a).fresh) return true;
            const auto& lc = slot(a).last_gate;
            const auto& lt = slot(b).last_gate;
            return lc && lt && lc->index == lt->index && lc->kind == GateKind::CNOT && lc->a == a &&
                   lc->b == b;
        }
        case GateKind::SWAP: {
            const auto& pa = slot(a).last_pair;
            const auto& pb = slot(b).last_pair;
            if (pa && pb && pa->index == pb->index && pa->kind == GateKind::SWAP) return true;
            const Slot& sa = slot(a);
            const Slot& sb = slot(b);
            return sa.fresh && sb.fresh && !sa.empty && !sb.empty;
        }
    }
    return false;
}

void RedundancyTracker::relocate(QubitId from, QubitId to) {
    (void)slot(from);
    (void)slot(to);
    Slot landed;
    landed.fresh = slots_[from].fresh;
    landed.empty = false;
    slots_[to] = landed;
    slots_[from] = Slot{};
}

void RedundancyTracker::record(const Gate& g, int index) {
    const QubitId a = g.qubits[0];
    const QubitId b = g.qubits[1];
    const Mark mark{index, g.kind, a, b};
    (void)slot(a);
    if (g.kind == GateKind::U) {
        slots_[a].last_gate = mark;
        slots_[a].fresh = false;
        return;
    }
    (void)slot(b);
    if (g.kind == GateKind::CNOT) {
        slots_[b].fresh = slots_[b].fresh && slots_[a].fresh;
    } else {
        std::swap(slots_[a].fresh, slots_[b].fresh);
        std::swap(slots_[a].empty, slots_[b].empty);
    }
    for (QubitId x : {a, b}) {
        slots_[x].last_gate = mark;
        slots_[x].last_pair = mark;
    }
}

std::vector<TeledataRoute> teledata_routes(const DeviceGraph& device, const Placement& placement,
                                           QubitId mover, QubitId partner) {
    std::vector<TeledataRoute> routes;
    const auto near = device.communication_neighbor(mover);
    if (!near || !placement.occupied(mover)) return routes;
    for (std::size_t link : device.links_of(*near)) {
        const auto [u, v] = device.links()[link];
        const QubitId far = (u == *near) ? v : u;
        for (QubitId landing : device.neighbors(far)) {
            if (device.is_data(landing) && !placement.occupied(landing) && landing != partner &&
                device.coupled(landing, partner))
                routes.push_back({mover, *near, far, landing, link});
        }
    }
    return routes;
}

int apply_teledata(VcgState& state, Placement& placement, const TeledataRoute& r,
                   std::vector<LinkRelease>* released) {
    const DeviceGraph& d = state.device();
    if (r.link >= d.links().size() || d.links()[r.link] != make_edge(r.near, r.far))
        throw PreconditionError("teledata: route does not follow a link");
    if (!placement.occupied(r.mover) || !d.coupled(r.mover, r.near) || !d.is_communication(r.near))
        throw PreconditionError("teledata: mover " + q(r.mover) +
                                " must hold a logical qubit and be adjacent to a communication qubit");
    if (!d.is_data(r.landing) || placement.occupied(r.landing) || !d.coupled(r.landing, r.far))
        throw PreconditionError("teledata: no empty landing qubit " + q(r.landing) + " next to " + q(r.far));
    auto collect = [&](std::vector<LinkRelease> rel) {
        if (released) released->insert(released->end(), rel.begin(), rel.end());
    };
    collect(state.release_link(r.link));
    collect(state.exit_control_mode(r.mover));
    collect(state.exit_control_mode(r.landing));
    const int cycle = state.consume_teledata_ebit();
    placement.move(r.mover, r.landing);
    return cycle;
}

CircuitAssembler::CircuitAssembler(const DeviceGraph& device, const PositionSets& sets,
                                   QubitAssignment assignment)
    : device_(&device),
      vcg_(device, sets),
      assignment_(std::move(assignment)),
      placement_(assignment_, device.data_qubits()),
      history_(assignment_, device.data_qubits()) {}

void CircuitAssembler::emit(const std::vector<LinkRelease>& released) {
    for (const auto& r : released)
        step({ProtocolStep::Kind::cat_disentangle, r.owner.control, r.owner.near, r.owner.far, -1, -1});
}

void CircuitAssembler::exit_control(QubitId id) { emit(vcg_.exit_control_mode(id)); }

const Gate& CircuitAssembler::append(Gate g) {
    const std::string where = "gate " + std::to_string(gates_.size()) + ": ";
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) throw PreconditionError(where + msg);
    };
    const auto& sets = vcg_.sets();
    const QubitId a = g.qubits[0];
    const QubitId b = g.qubits[1];

    switch (g.kind) {
        case GateKind::U: {
            require(!g.nonlocal, "U gates cannot carry a nonlocal tag");
            require(device_->is_data(a) && occupied(a), "U target " + q(a) + " must hold a logical qubit");
            if (g.param_offset == -1) g.param_offset = n_params_;
            require(g.param_offset == n_params_, "U parameter offset must be " + std::to_string(n_params_));
            exit_control(a);
            step({ProtocolStep::Kind::u, a, -1, -1, -1, g.param_offset});
            n_params_ += 3;
            break;
        }
        case GateKind::CNOT: {
            require(a != b, "CNOT needs two distinct qubits");
            require(g.param_offset == -1, "CNOT has no parameters");
            if (!g.nonlocal) {
                require(sets.is_local(a, b), "(" + q(a) + "," + q(b) + ") is not a local position");
                require(occupied(a) && occupied(b), "CNOT qubits must hold logical qubits");
                exit_control(b);
                step({ProtocolStep::Kind::cnot, a, b, -1, -1, -1});
            } else if (g.nonlocal->method == NonlocalMethod::telegate) {
                require(!g.nonlocal->relocation, "TeleGate CNOT cannot relocate qubits");
                require(sets.is_telegate(a, b), "(" + q(a) + "," + q(b) + ") is not a TeleGate position");
                require(occupied(a) && occupied(b), "CNOT qubits must hold logical qubits");
                const auto link = vcg_.link_between(a, b);
                require(link.has_value(), "no link joins " + q(a) + " and " + q(b));
                exit_control(b);
                if (!vcg_.has_virtual_edge(a, b)) {
                    emit(vcg_.cat_entangle(a, *link));
                    const auto& o = *vcg_.link_owner(*link);
                    step({ProtocolStep::Kind::cat_entangle, a, o.near, o.far, -1, -1});
                }
                const auto& owner = *vcg_.link_owner(*link);
                require(owner.control == a, "link is not held by " + q(a));
                if (g.nonlocal->cycle == -1) g.nonlocal->cycle = owner.cycle;
                require(g.nonlocal->cycle == owner.cycle,
                        "recorded ebit cycle " + std::to_string(g.nonlocal->cycle) + " but replay gives " +
                            std::to_string(owner.cycle));
                step({ProtocolStep::Kind::remote_cnot, owner.far, b, -1, -1, -1});
            } else {
                require(g.nonlocal->relocation.has_value(), "TeleData CNOT needs a relocation");
                const auto [from, to] = *g.nonlocal->relocation;
                require((a == to) != (b == to), "relocation target must be exactly one CNOT qubit");
                const QubitId partner = (a == to) ? b : a;
                const QubitId c0 = (a == to) ? from : a;
                const QubitId t0 = (b == to) ? from : b;
                require(sets.is_teledata(c0, t0), "(" + q(c0) + "," + q(t0) + ") is not a TeleData position");
                require(occupied(partner), "CNOT partner " + q(partner) + " must hold a logical qubit");
                require(sets.is_local(to, partner), "landing " + q(to) + " is not coupled to " + q(partner));
                const auto near = device_->communication_neighbor(from);
                const auto far = device_->communication_neighbor(to);
                require(near && far, "relocation endpoints must touch communication qubits");
                const auto& links = device_->links();
                const auto it = std::find(links.begin(), links.end(), make_edge(*near, *far));
                require(it != links.end(), "no link joins " + q(*near) + " and " + q(*far));
                const TeledataRoute route{from, *near, *far, to, static_cast<std::size_t>(it - links.begin())};

                exit_control(partner);
                std::vector<LinkRelease> released;
                const int cycle = apply_teledata(vcg_, placement_, route, &released);
                emit(released);
                step({ProtocolStep::Kind::teleport, from, *near, *far, to, -1});
                history_.relocate(from, to);
                if (g.nonlocal->cycle == -1) g.nonlocal->cycle = cycle;
                require(g.nonlocal->cycle == cycle, "recorded ebit cycle does not match replay");
                step({ProtocolStep::Kind::cnot, a, b, -1, -1, -1});
            }
            break;
        }
        case GateKind::SWAP: {
            require(!g.nonlocal, "SWAP gates cannot carry a nonlocal tag");
            require(g.param_offset == -1, "SWAP has no parameters");
            require(sets.is_swap(a, b), "(" + q(a) + "," + q(b) + ") is not a SWAP position");
            require(occupied(a) || occupied(b), "SWAP needs at least one non-empty qubit");
            exit_control(a);
            exit_control(b);
            step({ProtocolStep::Kind::swap, a, b, -1, -1, -1});
            if (occupied(a) != occupied(b)) placement_.exchange(a, b);
            break;
        }
    }
    history_.record(g, static_cast<int>(gates_.size()));
    gates_.push_back(std::move(g));
    return gates_.back();
}

Circuit CircuitAssembler::finish() {
    for (std::size_t i = 0; i < device_->links().size(); ++i) emit(vcg_.release_link(i));
    Circuit c;
    c.gates = gates_;
    c.n_params = n_params_;
    c.ebits = vcg_.ebits_consumed();
    c.assignment = assignment_;
    c.data_qubits = device_->data_qubits();
    c.device_fingerprint = device_->fingerprint();
    return c;
}

ReplayResult replay(const Circuit& circuit, const DeviceGraph& device) {
    if (!circuit.device_fingerprint.empty() && circuit.device_fingerprint != device.fingerprint())
        throw PreconditionError("replay: circuit was generated for a different device");
    if (circuit.data_qubits != device.data_qubits())
        throw PreconditionError("replay: data-qubit list does not match the device");
    auto assignment = make_assignment(device, circuit.assignment.logical_to_physical);
    if (assignment.empty != circuit.assignment.empty)
        throw PreconditionError("replay: recorded empty set is inconsistent");

    CircuitAssembler assembler(device, derive_position_sets(device), std::move(assignment));
    assembler.enable_trace();
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        if (assembler.is_redundant(circuit.gates[i]))
            throw PreconditionError("replay: gate " + std::to_string(i) + " is redundant");
        assembler.append(circuit.gates[i]);
    }
    ReplayResult out;
    out.final_placement = assembler.placement();
    const Circuit rebuilt = assembler.finish();
    if (rebuilt.ebits != circuit.ebits)
        throw PreconditionError("replay: recorded " + std::to_string(circuit.ebits) + " ebits, replay counts " +
                                std::to_string(rebuilt.ebits));
    if (rebuilt.n_params != circuit.n_params) throw PreconditionError("replay: parameter count mismatch");
    out.steps = assembler.trace();
    out.ebits = rebuilt.ebits;
    return out;
}

bool is_redundant(const Circuit& so_far, const Gate& candidate) {
    RedundancyTracker tracker(so_far.assignment, so_far.data_qubits);
    for (std::size_t i = 0; i < so_far.gates.size(); ++i) {
        const auto& g = so_far.gates[i];
        if (g.nonlocal && g.nonlocal->relocation)
            tracker.relocate(g.nonlocal->relocation->from, g.nonlocal->relocation->to);
        tracker.record(g, static_cast<int>(i));
    }
    return tracker.is_redundant(candidate);
}

}  // namespace dqas
