#include <gtest/gtest.h>

#include <set>

#include "dqas/assembler.hpp"
#include "dqas/circuitgen.hpp"
#include "dqas/error.hpp"
#include "dqas/vcg.hpp"
#include "oracles.hpp"

using namespace dqas;

namespace {

GenerationRequest request(Method m, int n_gates = 50, double p_nl = 0.3, int n_logical = 6) {
    GenerationRequest r;
    r.method = m;
    r.n_gates = n_gates;
    r.p_nonlocal = p_nl;
    r.n_logical = n_logical;
    return r;
}

int recount_ebits(const Circuit& c) {
    std::set<int> cycles;
    for (const auto& g : c.gates)
        if (g.nonlocal) cycles.insert(g.nonlocal->cycle);
    return static_cast<int>(cycles.size());
}

Circuit fixed_circuit(const DeviceGraph& d, std::vector<QubitId> placement) {
    Circuit c;
    c.assignment = make_assignment(d, std::move(placement));
    c.data_qubits = d.data_qubits();
    return c;
}

}  // namespace

class GenerateAllMethods : public ::testing::TestWithParam<Method> {};

TEST_P(GenerateAllMethods, ExactGateCountAndLegalReplay) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto req = request(GetParam(), 20 + static_cast<int>(seed % 41));
        req.gate_dist = kGateDistributions[seed % 3];
        req.p_nonlocal = kNonlocalProbabilities[seed % 4];
        const Circuit c = generate(d, req, seed);
        ASSERT_EQ(static_cast<int>(c.gates.size()), req.n_gates);
        ASSERT_EQ(c.n_params % 3, 0);
        ReplayResult r;
        ASSERT_NO_THROW(r = replay(c, d)) << "seed " << seed;
        ASSERT_EQ(r.ebits, c.ebits);
        ASSERT_EQ(recount_ebits(c), c.ebits);
        for (const auto& g : c.gates) {
            if (!g.nonlocal) continue;
            if (GetParam() == Method::telegate) ASSERT_EQ(g.nonlocal->method, NonlocalMethod::telegate);
            if (GetParam() == Method::teledata) ASSERT_EQ(g.nonlocal->method, NonlocalMethod::teledata);
        }
    }
}

TEST_P(GenerateAllMethods, NoGateIsRedundantWhenReplayed) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Circuit c = generate(d, request(GetParam()), seed);
        Circuit prefix = c;
        prefix.gates.clear();
        for (const auto& g : c.gates) {
            ASSERT_FALSE(is_redundant(prefix, g));
            prefix.gates.push_back(g);
        }
    }
}

TEST_P(GenerateAllMethods, DeterministicForSeed) {
    const auto d = two_yorktown_device();
    EXPECT_EQ(generate(d, request(GetParam()), 42), generate(d, request(GetParam()), 42));
    EXPECT_NE(generate(d, request(GetParam()), 42).gates, generate(d, request(GetParam()), 43).gates);
}

TEST_P(GenerateAllMethods, TextRoundTrip) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Circuit c = generate(d, request(GetParam()), seed);
        const auto text = circuit_to_text(c);
        EXPECT_EQ(circuit_from_text(text), c);
        EXPECT_EQ(circuit_to_text(circuit_from_text(text)), text);
    }
}

INSTANTIATE_TEST_SUITE_P(Methods, GenerateAllMethods,
                         ::testing::Values(Method::telegate, Method::teledata, Method::both),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Generate, NoNonlocalProbabilityMeansNoEbits) {
    const auto d = two_yorktown_device();
    const auto sets = derive_position_sets(d);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Circuit c = generate(d, request(Method::telegate, 50, 0.0), seed);
        EXPECT_EQ(c.ebits, 0);
        for (const auto& g : c.gates) {
            EXPECT_FALSE(g.nonlocal.has_value());
            if (g.kind == GateKind::CNOT) EXPECT_TRUE(sets.is_local(g.qubits[0], g.qubits[1]));
            if (g.kind == GateKind::SWAP) EXPECT_TRUE(sets.is_swap(g.qubits[0], g.qubits[1]));
        }
    }
}

TEST(Generate, TeledataNeedsAnEmptyQubit) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto req = request(Method::both, 30, 0.4, 8);
        const Circuit c = generate(d, req, seed);
        for (const auto& g : c.gates)
            if (g.nonlocal) ASSERT_EQ(g.nonlocal->method, NonlocalMethod::telegate);
    }
}

TEST(Generate, BothMethodUsesBothRealisations) {
    const auto d = two_yorktown_device();
    int telegate = 0;
    int teledata = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        for (const auto& g : generate(d, request(Method::both, 50, 0.4), seed).gates) {
            if (!g.nonlocal) continue;
            (g.nonlocal->method == NonlocalMethod::telegate ? telegate : teledata)++;
        }
    }
    EXPECT_GT(telegate, 100);
    EXPECT_GT(teledata, 100);
}

TEST(Generate, EmptyQubitsAreNeverUOrCnotTargets) {
    const auto d = two_yorktown_device();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Circuit c = generate(d, request(Method::both), seed);
        Placement p(c.assignment, c.data_qubits);
        for (const auto& g : c.gates) {
            if (g.nonlocal && g.nonlocal->relocation) p.move(g.nonlocal->relocation->from, g.nonlocal->relocation->to);
            if (g.kind != GateKind::SWAP) {
                for (int k = 0; k < g.arity(); ++k) ASSERT_TRUE(p.occupied(g.qubits[k]));
            } else {
                ASSERT_TRUE(p.occupied(g.qubits[0]) || p.occupied(g.qubits[1]));
                if (p.occupied(g.qubits[0]) != p.occupied(g.qubits[1])) p.exchange(g.qubits[0], g.qubits[1]);
            }
        }
    }
}

TEST(Generate, EbitCountsAreSpreadAroundACentre) {
    const auto d = two_yorktown_device();
    std::vector<int> hist(200, 0);
    double mean = 0.0;
    const int n = 2000;
    for (std::uint64_t seed = 0; seed < n; ++seed) {
        auto req = request(Method::telegate, 50, 0.2);
        const int e = generate(d, req, seed).ebits;
        ++hist[e];
        mean += e;
    }
    mean /= n;
    const int mode = static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
    EXPECT_GT(mean, 1.0);
    EXPECT_NEAR(mode, mean, 3.0);
    EXPECT_LT(hist[0], hist[mode]);
}

TEST(Generate, InvalidRequestsAreRejected) {
    const auto d = two_yorktown_device();
    auto bad = request(Method::telegate);
    bad.gate_dist = {0.5, 0.5, 0.5};
    EXPECT_THROW(generate(d, bad, 1), PreconditionError);
    bad = request(Method::telegate);
    bad.p_nonlocal = 1.5;
    EXPECT_THROW(generate(d, bad, 1), PreconditionError);
    EXPECT_THROW(generate(d, request(Method::telegate, 10, 0.2, 9), 1), PreconditionError);
}

TEST(Generate, UnsatisfiableRequestFailsAfterBoundedRetries) {
    const auto d = load_device(R"({"qubits": [{"id": 0, "role": "data", "qpu": 0}, {"id": 1, "role": "data", "qpu": 0}],
                                   "couplings": [[0, 1]], "links": []})");
    auto req = request(Method::telegate, 10, 1.0, 2);
    req.gate_dist = {0.0, 1.0, 0.0};
    EXPECT_THROW(generate(d, req, 5), GenerationError);
}

TEST(Redundancy, RepeatedUIsRedundant) {
    const auto d = two_yorktown_device();
    auto c = fixed_circuit(d, {0, 1, 2, 3, 6, 7});
    c.add_u(0);
    EXPECT_TRUE(is_redundant(c, Gate::u(0)));
    EXPECT_FALSE(is_redundant(c, Gate::u(1)));
}

TEST(Redundancy, IdenticalCnotCancelsButReversedDoesNot) {
    const auto d = two_yorktown_device();
    auto c = fixed_circuit(d, {0, 1, 2, 3, 6, 7});
    c.add_u(0).add_u(1).add_cnot(0, 1);
    EXPECT_TRUE(is_redundant(c, Gate::cnot(0, 1)));
    EXPECT_FALSE(is_redundant(c, Gate::cnot(1, 0)));
}

TEST(Redundancy, CnotCannotOpenItsControl) {
    const auto d = two_yorktown_device();
    const auto c = fixed_circuit(d, {0, 1, 2, 3, 6, 7});
    EXPECT_TRUE(is_redundant(c, Gate::cnot(2, 3)));
}

TEST(Redundancy, SwapWithEmptyQubitIsAllowedOnFreshCircuit) {
    const auto d = two_yorktown_device();
    const auto c = fixed_circuit(d, {0, 1, 2, 6, 7, 8});
    EXPECT_FALSE(is_redundant(c, Gate::swap(2, 3)));
    EXPECT_TRUE(is_redundant(c, Gate::swap(0, 2)));
}

TEST(Redundancy, RepeatedSwapNeedsAnInterveningTwoQubitGate) {
    const auto d = two_yorktown_device();
    auto c = fixed_circuit(d, {0, 1, 2, 3, 6, 7});
    c.add_u(2).add_swap(2, 3).add_u(2);
    EXPECT_TRUE(is_redundant(c, Gate::swap(2, 3)));
    c.add_cnot(2, 0);
    EXPECT_FALSE(is_redundant(c, Gate::swap(2, 3)));
}

TEST(Teledata, MovesLogicalQubitAndChargesOneEbit) {
    const auto d = two_yorktown_device();
    const auto a = make_assignment(d, {0, 1, 2, 3, 6, 8});
    Placement placement(a, d.data_qubits());
    VcgState state(d);
    const auto routes = teledata_routes(d, placement, 2, 8);
    ASSERT_EQ(routes.size(), 1u);
    EXPECT_EQ(routes[0].landing, 7);
    apply_teledata(state, placement, routes[0]);
    EXPECT_EQ(state.ebits_consumed(), 1);
    EXPECT_FALSE(placement.occupied(2));
    EXPECT_EQ(placement.wire_at(7), 2);
    EXPECT_TRUE(derive_position_sets(d).is_local(7, 8));
}

TEST(Teledata, FormerPositionBecomesALandingSite) {
    const auto d = two_yorktown_device();
    const auto a = make_assignment(d, {0, 1, 2, 3, 6, 8});
    Placement placement(a, d.data_qubits());
    VcgState state(d);
    apply_teledata(state, placement, teledata_routes(d, placement, 2, 8).at(0));
    const auto back = teledata_routes(d, placement, 6, 0);
    ASSERT_FALSE(back.empty());
    EXPECT_EQ(back[0].landing, 2);
}

TEST(Teledata, NoEmptyLandingQubitMeansNoRoute) {
    const auto d = two_yorktown_device();
    const auto a = make_assignment(d, {0, 1, 2, 3, 6, 7});
    Placement placement(a, d.data_qubits());
    EXPECT_TRUE(teledata_routes(d, placement, 2, 8).empty());
    VcgState state(d);
    EXPECT_THROW(apply_teledata(state, placement, TeledataRoute{2, 4, 5, 7, 0}), PreconditionError);
}

TEST(Teledata, BusyLinkIsReleasedFirst) {
    const auto d = two_yorktown_device();
    const auto a = make_assignment(d, {0, 1, 2, 3, 6, 8});
    Placement placement(a, d.data_qubits());
    VcgState state(d);
    state.cat_entangle(6, 0);
    apply_teledata(state, placement, teledata_routes(d, placement, 2, 8).at(0));
    EXPECT_FALSE(state.control_mode(6));
    state.check_invariants();
}

TEST(Assembler, RejectsIllegalGates) {
    const auto d = two_yorktown_device();
    const auto sets = derive_position_sets(d);
    CircuitAssembler asmb(d, sets, make_assignment(d, {0, 1, 2, 3, 6, 7}));
    EXPECT_THROW(asmb.append(Gate::cnot(0, 3)), PreconditionError);
    EXPECT_THROW(asmb.append(Gate::u(8)), PreconditionError);
    EXPECT_THROW(asmb.append(Gate::swap(0, 1)), PreconditionError);
    asmb.append(Gate::u(2));
    Gate g = Gate::cnot(2, 6);
    g.nonlocal = NonlocalTag{NonlocalMethod::telegate, -1, std::nullopt};
    asmb.append(g);
    EXPECT_EQ(asmb.vcg().ebits_consumed(), 1);
    EXPECT_TRUE(asmb.vcg().control_mode(2));
    g.qubits = {2, 7};
    asmb.append(g);
    EXPECT_EQ(asmb.vcg().ebits_consumed(), 1);
    asmb.append(Gate::u(2));
    EXPECT_FALSE(asmb.vcg().control_mode(2));
}
