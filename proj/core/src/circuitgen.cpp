#include "dqas/circuitgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqas/error.hpp"

namespace dqas {

namespace {

void validate(const DeviceGraph& device, const GenerationRequest& r) {
    if (r.n_gates < 0) throw PreconditionError("generate: n_gates must be non-negative");
    double total = 0.0;
    for (double p : r.gate_dist) {
        if (!(p >= 0.0)) throw PreconditionError("generate: gate probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("generate: gate_dist must sum to 1");
    if (!(r.p_nonlocal >= 0.0 && r.p_nonlocal <= 1.0))
        throw PreconditionError("generate: p_nonlocal must lie in [0, 1]");
    if (r.n_logical < 1 || r.n_logical > static_cast<int>(device.data_qubits().size()))
        throw PreconditionError("generate: n_logical must be between 1 and the number of data qubits");
    if (r.max_rejections < 1) throw PreconditionError("generate: max_rejections must be positive");
}

GateKind sample_kind(const std::array<double, 3>& dist, Rng& rng) {
    const double x = uniform01(rng);
    if (x < dist[0]) return GateKind::U;
    if (x < dist[0] + dist[1]) return GateKind::CNOT;
    return GateKind::SWAP;
}

class Generator {
public:
    Generator(const DeviceGraph& device, const PositionSets& sets, const GenerationRequest& request, Rng& rng)
        : device_(device),
          sets_(sets),
          request_(request),
          rng_(rng),
          assembler_(device, sets, sample_assignment(device, request.n_logical, rng)) {}

    Circuit run() {
        int rejections = 0;
        while (static_cast<int>(assembler_.gates().size()) < request_.n_gates) {
            if (try_add()) {
                rejections = 0;
            } else if (++rejections >= request_.max_rejections) {
                throw GenerationError("generate: " + std::to_string(rejections) +
                                      " consecutive rejected samples at gate " +
                                      std::to_string(assembler_.gates().size()));
            }
        }
        return assembler_.finish();
    }

private:
    bool occupied(QubitId q) const { return assembler_.occupied(q); }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform_index(rng_, v.size())];
    }

    bool try_add() {
        switch (sample_kind(request_.gate_dist, rng_)) {
            case GateKind::U: return add_u();
            case GateKind::CNOT:
                if (uniform01(rng_) > request_.p_nonlocal) return add_local_cnot();
                return add_nonlocal_cnot();
            case GateKind::SWAP: return add_swap();
        }
        return false;
    }

    bool commit(const Gate& g) {
        if (assembler_.is_redundant(g)) return false;
        assembler_.append(g);
        return true;
    }

    bool add_u() {
        std::vector<QubitId> candidates;
        for (QubitId q : device_.data_qubits())
            if (occupied(q)) candidates.push_back(q);
        return commit(Gate::u(pick(candidates)));
    }

    bool add_local_cnot() {
        std::vector<OrderedPair> candidates;
        for (const auto& [a, b] : sets_.local) {
            if (!occupied(a) || !occupied(b)) continue;
            candidates.emplace_back(a, b);
            candidates.emplace_back(b, a);
        }
        if (candidates.empty()) return false;
        const auto [c, t] = pick(candidates);
        return commit(Gate::cnot(c, t));
    }

    bool add_swap() {
        std::vector<Edge> candidates;
        for (const auto& e : sets_.swap)
            if (occupied(e.first) || occupied(e.second)) candidates.push_back(e);
        if (candidates.empty()) return false;
        const auto [a, b] = pick(candidates);
        return commit(Gate::swap(a, b));
    }

    std::vector<OrderedPair> nonempty_pairs(const std::vector<OrderedPair>& set) const {
        std::vector<OrderedPair> out;
        for (const auto& [c, t] : set)
            if (occupied(c) && occupied(t)) out.emplace_back(c, t);
        return out;
    }

    bool add_nonlocal_cnot() {
        std::vector<OrderedPair> candidates;
        switch (request_.method) {
            case Method::telegate: candidates = nonempty_pairs(sets_.telegate); break;
            case Method::teledata: candidates = nonempty_pairs(sets_.teledata); break;
            case Method::both: {
                std::vector<OrderedPair> all = sets_.telegate;
                all.insert(all.end(), sets_.teledata.begin(), sets_.teledata.end());
                std::sort(all.begin(), all.end());
                all.erase(std::unique(all.begin(), all.end()), all.end());
                candidates = nonempty_pairs(all);
                break;
            }
        }
        if (candidates.empty()) return false;
        const auto [c, t] = pick(candidates);
        if (assembler_.is_redundant(Gate::cnot(c, t))) return false;

        const bool telegate_ok = request_.method != Method::teledata && sets_.is_telegate(c, t);
        const bool teledata_ok = request_.method != Method::telegate && sets_.is_teledata(c, t);
        if (telegate_ok) {
            if (assembler_.vcg().has_virtual_edge(c, t)) return telegate(c, t);
            if (teledata_ok && has_route(c, t) && uniform_index(rng_, 2) == 1) return teledata(c, t);
            return telegate(c, t);
        }
        if (teledata_ok) return teledata(c, t);
        return false;
    }

    bool telegate(QubitId c, QubitId t) {
        Gate g = Gate::cnot(c, t);
        g.nonlocal = NonlocalTag{NonlocalMethod::telegate, -1, std::nullopt};
        assembler_.append(g);
        return true;
    }

    bool has_route(QubitId c, QubitId t) const {
        const auto& pl = assembler_.placement();
        return !teledata_routes(device_, pl, c, t).empty() || !teledata_routes(device_, pl, t, c).empty();
    }

    bool teledata(QubitId c, QubitId t) {
        const auto& pl = assembler_.placement();
        const auto via_c = teledata_routes(device_, pl, c, t);
        const auto via_t = teledata_routes(device_, pl, t, c);
        if (via_c.empty() && via_t.empty()) return false;
        const bool move_control = via_t.empty() || (!via_c.empty() && uniform_index(rng_, 2) == 0);
        const TeledataRoute route = move_control ? pick(via_c) : pick(via_t);

        Gate g = move_control ? Gate::cnot(route.landing, t) : Gate::cnot(c, route.landing);
        g.nonlocal = NonlocalTag{NonlocalMethod::teledata, -1, Relocation{route.mover, route.landing}};
        assembler_.append(g);
        return true;
    }

    const DeviceGraph& device_;
    const PositionSets& sets_;
    const GenerationRequest& request_;
    Rng& rng_;
    CircuitAssembler assembler_;
};

}  // namespace

Circuit generate(const DeviceGraph& device, const PositionSets& sets, const GenerationRequest& request,
                 Rng& rng) {
    validate(device, request);
    Circuit c = Generator(device, sets, request, rng).run();
    c.meta = GenerationMeta{request.gate_dist, request.p_nonlocal, request.method, 0};
    return c;
}

Circuit generate(const DeviceGraph& device, const GenerationRequest& request, std::uint64_t seed) {
    Rng rng(seed);
    Circuit c = generate(device, derive_position_sets(device), request, rng);
    c.meta->seed = seed;
    return c;
}

}  // namespace dqas
