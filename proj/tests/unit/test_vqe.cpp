#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dqas/circuitgen.hpp"
#include "dqas/error.hpp"
#include "dqas/vqe.hpp"
#include "oracles.hpp"

using namespace dqas;

namespace {

double max_relative_fd_error(const Circuit& c, const PauliHamiltonian& h, std::mt19937_64& rng) {
    const auto p = oracle::random_angles(c.n_params, rng);
    const auto eg = energy_and_gradient(c, p, h);
    const double step = 1e-5;
    double worst = 0.0;
    for (int k = 0; k < c.n_params; ++k) {
        auto plus = p;
        auto minus = p;
        plus[k] += step;
        minus[k] -= step;
        const double fd = (energy(c, plus, h) - energy(c, minus, h)) / (2 * step);
        const double err = std::abs(fd - eg.gradient[k]) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace

TEST(Gradient, SingleUOnZ) {
    auto c = Circuit::on_line(1);
    c.add_u(0);
    PauliHamiltonian h(1);
    h.add(1.0, "Z");
    for (double theta : {0.0, 0.3, 1.7, 3.0}) {
        const std::vector<double> p{theta, 0.4, -1.1};
        const auto eg = energy_and_gradient(c, p, h);
        EXPECT_NEAR(eg.energy, std::cos(theta), 1e-12);
        EXPECT_NEAR(eg.gradient[0], -std::sin(theta), 1e-12);
        EXPECT_NEAR(eg.gradient[1], 0.0, 1e-12);
        EXPECT_NEAR(eg.gradient[2], 0.0, 1e-12);
    }
}

TEST(Gradient, NoParametersGivesPlainExpectation) {
    auto c = Circuit::on_line(2);
    c.add_cnot(0, 1);
    const auto eg = energy_and_gradient(c, {}, build_tfim(2));
    EXPECT_NEAR(eg.energy, 2.0, 1e-12);
    EXPECT_TRUE(eg.gradient.empty());
}

TEST(Gradient, MatchesFiniteDifferencesOnLineCircuits) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = oracle::random_line_circuit(4, 25, rng);
        EXPECT_LT(max_relative_fd_error(c, build_heisenberg(4), rng), 1e-5);
    }
}

TEST(Gradient, MatchesFiniteDifferencesOnGeneratedCircuits) {
    const auto d = two_yorktown_device();
    std::mt19937_64 rng(22);
    GenerationRequest req;
    req.n_gates = 30;
    req.method = Method::both;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        EXPECT_LT(max_relative_fd_error(generate(d, req, seed), build_tfim(6), rng), 1e-5);
}

TEST(Gradient, MismatchedParametersAreRejected) {
    auto c = Circuit::on_line(2);
    c.add_u(0);
    EXPECT_THROW(energy(c, std::vector<double>{1.0}, build_tfim(2)), PreconditionError);
    EXPECT_THROW(energy(c, std::vector<double>{1, 2, 3}, build_tfim(3)), PreconditionError);
}

TEST(TrainConfig, Validation) {
    TrainConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.learning_rate = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.n_restarts = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.beta2 = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Training, RestartsAreDeterministic) {
    const auto c = oracle::hardware_efficient(3, 2);
    const auto h = build_tfim(3);
    TrainConfig cfg;
    cfg.max_iters = 200;
    const auto program = compile(c);
    const auto a = train_restart(program, h, cfg, 17);
    const auto b = train_restart(program, h, cfg, 17);
    EXPECT_EQ(a.best_energy, b.best_energy);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Training, QueryIsIndependentOfWorkerCount) {
    const auto c = oracle::hardware_efficient(3, 2);
    const auto h = build_tfim(3);
    TrainConfig cfg;
    cfg.max_iters = 150;
    cfg.n_restarts = 6;
    const auto serial = train_query(c, h, cfg, 5);
    cfg.workers = 4;
    const auto parallel = train_query(c, h, cfg, 5);
    EXPECT_EQ(serial.restart_energies, parallel.restart_energies);
    EXPECT_EQ(serial.best_params, parallel.best_params);
    EXPECT_EQ(serial.best_energy, *std::min_element(serial.restart_energies.begin(), serial.restart_energies.end()));
}

TEST(Training, BestEnergyIsAttainedAndNeverIncreases) {
    const auto c = oracle::hardware_efficient(4, 2, true);
    const auto h = build_heisenberg(4);
    TrainConfig cfg;
    cfg.max_iters = 300;
    const auto r = train_restart(compile(c), h, cfg, 3);
    EXPECT_LE(r.best_energy, r.initial_energy);
    EXPECT_LE(r.best_energy, r.final_energy);
    EXPECT_NEAR(energy(c, r.best_params, h), r.best_energy, 1e-12);
}

TEST(Training, RespectsVariationalBound) {
    std::mt19937_64 rng(8);
    TrainConfig cfg;
    cfg.max_iters = 400;
    cfg.n_restarts = 2;
    for (int trial = 0; trial < 5; ++trial) {
        const auto c = oracle::random_line_circuit(4, 30, rng);
        for (const auto& h : {build_tfim(4), build_heisenberg(4)}) {
            const auto q = train_query(c, h, cfg, trial);
            EXPECT_GE(q.best_energy, exact_ground_energy(h) - 1e-9);
        }
    }
}

TEST(Training, NoParametersStopsImmediately) {
    auto c = Circuit::on_line(2);
    c.add_cnot(0, 1);
    const auto r = train_restart(compile(c), build_tfim(2), TrainConfig{}, 1);
    EXPECT_EQ(r.stop, RestartResult::Stop::no_parameters);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_NEAR(r.best_energy, 2.0, 1e-12);
}

TEST(Training, MaxItersIsHonoured) {
    TrainConfig cfg;
    cfg.max_iters = 7;
    const auto r = train_restart(compile(oracle::hardware_efficient(3, 1)), build_tfim(3), cfg, 2);
    EXPECT_EQ(r.iterations, 7);
    EXPECT_EQ(r.stop, RestartResult::Stop::max_iters);
}

TEST(Training, SolvesTwoQubitTfim) {
    const auto h = build_tfim(2);
    TrainConfig cfg;
    cfg.target_energy = exact_ground_energy(h);
    cfg.n_restarts = 3;
    const auto q = train_query(oracle::hardware_efficient(2, 2), h, cfg, 11);
    EXPECT_TRUE(q.solved);
    EXPECT_LE(q.best_energy - *cfg.target_energy, cfg.accuracy_threshold);
}

TEST(Training, SolvesSixQubitTfimWithLayeredAnsatz) {
    const auto h = build_tfim(6);
    TrainConfig cfg;
    cfg.target_energy = exact_ground_energy(h);
    cfg.n_restarts = 4;
    cfg.workers = 4;
    const auto q = train_query(oracle::hardware_efficient(6, 4, true), h, cfg, 1);
    EXPECT_TRUE(q.solved) << q.best_energy;
}
