#include "dqas/vcg.hpp"

#include <algorithm>

#include "dqas/error.hpp"
#include "json.hpp"

namespace dqas {

namespace {

template <typename T>
bool sorted_contains(const std::vector<T>& v, const T& x) {
    return std::binary_search(v.begin(), v.end(), x);
}

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// R'(x) restricted to data qubits.
std::vector<QubitId> data_neighbors(const DeviceGraph& d, QubitId x) {
    std::vector<QubitId> out;
    for (QubitId y : d.neighbors(x))
        if (d.is_data(y)) out.push_back(y);
    return out;
}

/// R'(R'(x)) - {x}, every stage restricted to data qubits.
std::vector<QubitId> second_neighbors(const DeviceGraph& d, QubitId x) {
    std::vector<QubitId> out;
    for (QubitId y : data_neighbors(d, x))
        for (QubitId z : data_neighbors(d, y))
            if (z != x) out.push_back(z);
    sort_unique(out);
    return out;
}

}  // namespace

bool PositionSets::is_local(QubitId a, QubitId b) const { return sorted_contains(local, make_edge(a, b)); }
bool PositionSets::is_swap(QubitId a, QubitId b) const { return sorted_contains(swap, make_edge(a, b)); }
bool PositionSets::is_telegate(QubitId c, QubitId t) const { return sorted_contains(telegate, {c, t}); }
bool PositionSets::is_teledata(QubitId c, QubitId t) const { return sorted_contains(teledata, {c, t}); }

std::string PositionSets::to_text() const {
    nlohmann::json doc;
    auto pairs = [](const auto& v) {
        auto arr = nlohmann::json::array();
        for (const auto& [a, b] : v) arr.push_back({a, b});
        return arr;
    };
    doc["local"] = pairs(local);
    doc["swap"] = pairs(swap);
    doc["telegate"] = pairs(telegate);
    doc["teledata"] = pairs(teledata);
    return doc.dump() + "\n";
}

PositionSets derive_position_sets(const DeviceGraph& device) {
    PositionSets s;
    for (const auto& [a, b] : device.couplings())
        if (device.is_data(a) && device.is_data(b)) s.local.emplace_back(a, b);
    sort_unique(s.local);

    auto local_neighbors = [&](QubitId x) {
        std::vector<QubitId> out;
        for (const auto& [a, b] : s.local) {
            if (a == x) out.push_back(b);
            if (b == x) out.push_back(a);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    for (const auto& [a, b] : s.local) {
        auto ra = local_neighbors(a);
        auto rb = local_neighbors(b);
        std::erase(ra, b);
        std::erase(rb, a);
        if (ra != rb) s.swap.emplace_back(a, b);
    }

    for (const auto& [u, v] : device.links()) {
        for (const auto& [a, b] : {Edge{u, v}, Edge{v, u}}) {
            const auto near = data_neighbors(device, a);
            const auto far = data_neighbors(device, b);
            for (QubitId c : near)
                for (QubitId t : far) s.telegate.emplace_back(c, t);
            for (QubitId c : second_neighbors(device, a))
                for (QubitId t : far) s.teledata.emplace_back(c, t);
            for (QubitId c : near)
                for (QubitId t : second_neighbors(device, b)) s.teledata.emplace_back(c, t);
        }
    }
    sort_unique(s.telegate);
    sort_unique(s.teledata);
    return s;
}

VcgState::VcgState(const DeviceGraph& device, PositionSets sets)
    : device_(&device), sets_(std::move(sets)), owners_(device.links().size()) {}

VcgState::VcgState(const DeviceGraph& device) : VcgState(device, derive_position_sets(device)) {}

bool VcgState::control_mode(QubitId q) const {
    return std::any_of(owners_.begin(), owners_.end(),
                       [&](const auto& o) { return o && o->control == q; });
}

std::optional<std::size_t> VcgState::link_between(QubitId c, QubitId t) const {
    const auto cn = device_->communication_neighbor(c);
    const auto tn = device_->communication_neighbor(t);
    if (!cn || !tn) return std::nullopt;
    const auto& links = device_->links();
    const auto it = std::find(links.begin(), links.end(), make_edge(*cn, *tn));
    if (it == links.end()) return std::nullopt;
    return static_cast<std::size_t>(it - links.begin());
}

std::vector<LinkRelease> VcgState::cat_entangle(QubitId control, std::size_t link) {
    if (link >= owners_.size()) throw PreconditionError("cat_entangle: unknown link");
    const auto [u, v] = device_->links()[link];
    QubitId near = -1;
    QubitId far = -1;
    if (device_->is_data(control) && device_->coupled(control, u)) {
        near = u;
        far = v;
    } else if (device_->is_data(control) && device_->coupled(control, v)) {
        near = v;
        far = u;
    } else {
        throw PreconditionError("cat_entangle: q" + std::to_string(control) +
                                " is not a data qubit adjacent to link (q" + std::to_string(u) +
                                ",q" + std::to_string(v) + ")");
    }
    auto released = release_link(link);
    owners_[link] = LinkOwner{control, near, far, ebits_};
    ++ebits_;
    for (QubitId t : device_->neighbors(far))
        if (device_->is_data(t)) virtual_edges_.emplace(control, t);
    return released;
}

std::vector<LinkRelease> VcgState::cat_disentangle(QubitId control) {
    std::vector<LinkRelease> released;
    for (std::size_t i = 0; i < owners_.size(); ++i) {
        if (owners_[i] && owners_[i]->control == control) {
            released.push_back({i, *owners_[i]});
            owners_[i].reset();
        }
    }
    if (released.empty())
        throw PreconditionError("cat_disentangle: q" + std::to_string(control) + " is not in control mode");
    std::erase_if(virtual_edges_, [&](const OrderedPair& e) { return e.first == control; });
    return released;
}

std::vector<LinkRelease> VcgState::exit_control_mode(QubitId q) {
    if (!control_mode(q)) return {};
    return cat_disentangle(q);
}

std::vector<LinkRelease> VcgState::release_link(std::size_t link) {
    if (!owners_.at(link)) return {};
    return cat_disentangle(owners_[link]->control);
}

int VcgState::consume_teledata_ebit() { return ebits_++; }

void VcgState::check_invariants() const {
    std::set<OrderedPair> expected;
    for (std::size_t i = 0; i < owners_.size(); ++i) {
        if (!owners_[i]) continue;
        const auto& o = *owners_[i];
        if (make_edge(o.near, o.far) != device_->links()[i])
            throw PreconditionError("vcg: owner endpoints do not match its link");
        if (!device_->coupled(o.control, o.near))
            throw PreconditionError("vcg: control qubit not adjacent to its link");
        if (o.cycle < 0 || o.cycle >= ebits_) throw PreconditionError("vcg: owner cycle out of range");
        for (QubitId t : device_->neighbors(o.far))
            if (device_->is_data(t)) expected.emplace(o.control, t);
    }
    if (expected != virtual_edges_) throw PreconditionError("vcg: virtual edges out of sync with owners");
    for (const auto& [c, t] : virtual_edges_) {
        if (!control_mode(c)) throw PreconditionError("vcg: virtual edge without control mode");
        if (!sets_.is_telegate(c, t)) throw PreconditionError("vcg: virtual edge outside S_tg");
    }
}

}  // namespace dqas
