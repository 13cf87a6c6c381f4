#include "dqas/vqe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "dqas/error.hpp"
#include "dqas/parallel.hpp"
#include "dqas/random.hpp"

namespace dqas {

namespace {

constexpr std::uint64_t kRestartStream = 0x7265737461727473ULL;

const Complex kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

Matrix2 adjoint(const Matrix2& m) { return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}; }

/// Reusable buffers for repeated energy and gradient evaluations of one program.
class Evaluator {
public:
    Evaluator(const WireProgram& program, const PauliHamiltonian& h)
        : program_(program), h_(h), psi_(program.n_wires), lam_(program.n_wires) {
        if (h.num_qubits() != program.n_wires)
            throw PreconditionError("hamiltonian acts on " + std::to_string(h.num_qubits()) +
                                    " qubits, circuit has " + std::to_string(program.n_wires));
    }

    double energy(std::span<const double> params) {
        forward(params);
        return expectation(psi_, h_);
    }

    double energy_and_gradient(std::span<const double> params, std::span<double> grad) {
        forward(params);
        apply_h();
        const auto psi = psi_.amplitudes();
        const auto lam = lam_.amplitudes();
        Complex e(0.0);
        for (std::size_t i = 0; i < psi.size(); ++i) e += std::conj(psi[i]) * lam[i];

        std::fill(grad.begin(), grad.end(), 0.0);
        for (auto it = program_.ops.rbegin(); it != program_.ops.rend(); ++it) {
            const WireOp& op = *it;
            switch (op.kind) {
                case GateKind::CNOT:
                    psi_.apply_cnot(op.w0, op.w1);
                    lam_.apply_cnot(op.w0, op.w1);
                    break;
                case GateKind::SWAP:
                    psi_.apply_swap(op.w0, op.w1);
                    lam_.apply_swap(op.w0, op.w1);
                    break;
                case GateKind::U: {
                    const double th = params[op.param_offset];
                    const double ph = params[op.param_offset + 1];
                    const double la = params[op.param_offset + 2];
                    const Matrix2 inv = adjoint(u_matrix(th, ph, la));
                    psi_.apply(op.w0, inv);
                    const Matrix2 m = overlap_block(op.w0);
                    for (int j = 0; j < 3; ++j) {
                        const Matrix2 d = u_matrix_derivative(th, ph, la, j);
                        Complex s(0.0);
                        for (int k = 0; k < 4; ++k) s += d[k] * m[k];
                        grad[op.param_offset + j] += 2.0 * s.real();
                    }
                    lam_.apply(op.w0, inv);
                    break;
                }
            }
        }
        return e.real();
    }

private:
    void forward(std::span<const double> params) {
        auto amp = psi_.amplitudes();
        std::fill(amp.begin(), amp.end(), Complex(0.0));
        amp[0] = 1.0;
        run(program_, params, psi_);
    }

    void apply_h() {
        const auto psi = psi_.amplitudes();
        auto out = lam_.amplitudes();
        std::fill(out.begin(), out.end(), Complex(0.0));
        for (std::size_t t = 0; t < h_.terms().size(); ++t) {
            const auto& mk = h_.masks()[t];
            const Complex c = h_.terms()[t].coefficient * kPhase[mk.n_y & 3];
            for (std::size_t i = 0; i < psi.size(); ++i) {
                const Complex v = c * psi[i];
                out[i ^ mk.flip] += (std::popcount(i & mk.phase) & 1) ? -v : v;
            }
        }
    }

    /// M[r][s] = sum over index pairs of conj(lam_r) psi_s on qubit q, so that
    /// <lam|D psi> = sum_rs D_rs M_rs.
    Matrix2 overlap_block(int q) const {
        const auto psi = psi_.amplitudes();
        const auto lam = lam_.amplitudes();
        const std::size_t bit = psi_.mask(q);
        Matrix2 m{};
        for (std::size_t base = 0; base < psi.size(); base += 2 * bit) {
            for (std::size_t k = base; k < base + bit; ++k) {
                const Complex l0 = std::conj(lam[k]);
                const Complex l1 = std::conj(lam[k + bit]);
                m[0] += l0 * psi[k];
                m[1] += l0 * psi[k + bit];
                m[2] += l1 * psi[k];
                m[3] += l1 * psi[k + bit];
            }
        }
        return m;
    }

    const WireProgram& program_;
    const PauliHamiltonian& h_;
    Statevector psi_;
    Statevector lam_;
};

}  // namespace

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(std::string("train config: ") + msg);
    };
    require(learning_rate > 0, "learning_rate must be positive");
    require(max_iters > 0, "max_iters must be positive");
    require(n_restarts > 0, "n_restarts must be positive");
    require(accuracy_threshold > 0, "accuracy_threshold must be positive");
    require(convergence_window > 0, "convergence_window must be positive");
    require(convergence_tol > 0, "convergence_tol must be positive");
    require(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1, "Adam moment decay rates must lie in [0, 1)");
    require(epsilon > 0, "epsilon must be positive");
    require(!target_energy || std::isfinite(*target_energy), "target_energy must be finite");
}

EnergyGradient energy_and_gradient(const WireProgram& program, std::span<const double> params,
                                   const PauliHamiltonian& h) {
    Evaluator ev(program, h);
    EnergyGradient out;
    out.gradient.resize(params.size());
    out.energy = ev.energy_and_gradient(params, out.gradient);
    return out;
}

EnergyGradient energy_and_gradient(const Circuit& circuit, std::span<const double> params,
                                   const PauliHamiltonian& h) {
    return energy_and_gradient(compile(circuit), params, h);
}

double energy(const Circuit& circuit, std::span<const double> params, const PauliHamiltonian& h) {
    const WireProgram program = compile(circuit);
    Evaluator ev(program, h);
    return ev.energy(params);
}

RestartResult train_restart(const WireProgram& program, const PauliHamiltonian& h, const TrainConfig& cfg,
                            std::uint64_t seed) {
    Evaluator ev(program, h);
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(program.n_params);
    for (auto& x : theta) x = angle(rng);

    RestartResult r;
    if (theta.empty()) {
        r.best_energy = r.initial_energy = r.final_energy = ev.energy(theta);
        r.stop = RestartResult::Stop::no_parameters;
        return r;
    }

    const std::size_t n = theta.size();
    std::vector<double> grad(n), m(n, 0.0), v(n, 0.0);
    std::vector<double> best_history;  // best energy after each evaluation
    best_history.reserve(std::min(cfg.max_iters + 1, 1 << 14));
    double b1t = 1.0, b2t = 1.0;

    for (int it = 0;; ++it) {
        const double e = ev.energy_and_gradient(theta, grad);
        if (it == 0) {
            r.initial_energy = e;
            r.best_energy = e;
            r.best_params = theta;
        } else if (e < r.best_energy) {
            r.best_energy = e;
            r.best_params = theta;
        }
        r.final_energy = e;
        best_history.push_back(r.best_energy);
        r.iterations = it;

        if (cfg.target_energy && r.best_energy - *cfg.target_energy <= cfg.accuracy_threshold) {
            r.stop = RestartResult::Stop::accuracy;
            break;
        }
        const int w = cfg.convergence_window;
        if (it >= w && best_history[it - w] - r.best_energy < cfg.convergence_tol) {
            r.stop = RestartResult::Stop::converged;
            break;
        }
        if (it == cfg.max_iters) {
            r.stop = RestartResult::Stop::max_iters;
            break;
        }

        b1t *= cfg.beta1;
        b2t *= cfg.beta2;
        for (std::size_t k = 0; k < n; ++k) {
            m[k] = cfg.beta1 * m[k] + (1 - cfg.beta1) * grad[k];
            v[k] = cfg.beta2 * v[k] + (1 - cfg.beta2) * grad[k] * grad[k];
            const double mh = m[k] / (1 - b1t);
            const double vh = v[k] / (1 - b2t);
            theta[k] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.epsilon);
        }
    }
    return r;
}

std::uint64_t restart_seed(std::uint64_t seed, int r) {
    return derive_seed(seed, kRestartStream, static_cast<std::uint64_t>(r));
}

QueryResult train_query(const Circuit& circuit, const PauliHamiltonian& h, const TrainConfig& cfg,
                        std::uint64_t seed) {
    cfg.validate();
    const WireProgram program = compile(circuit);
    if (h.num_qubits() != program.n_wires)
        throw PreconditionError("train_query: hamiltonian and circuit qubit counts differ");
    std::vector<RestartResult> restarts(cfg.n_restarts);
    parallel_for(restarts.size(), cfg.workers,
                 [&](std::size_t r) { restarts[r] = train_restart(program, h, cfg, restart_seed(seed, static_cast<int>(r))); });

    QueryResult q;
    std::size_t best = 0;
    for (std::size_t r = 0; r < restarts.size(); ++r) {
        q.restart_energies.push_back(restarts[r].best_energy);
        q.iterations_used.push_back(restarts[r].iterations);
        if (restarts[r].best_energy < restarts[best].best_energy) best = r;
    }
    q.best_energy = restarts[best].best_energy;
    q.best_params = restarts[best].best_params;
    q.solved = cfg.target_energy && q.best_energy - *cfg.target_energy <= cfg.accuracy_threshold;
    return q;
}

std::string_view to_string(RestartResult::Stop s) {
    switch (s) {
        case RestartResult::Stop::accuracy: return "accuracy";
        case RestartResult::Stop::converged: return "converged";
        case RestartResult::Stop::max_iters: return "max_iters";
        case RestartResult::Stop::no_parameters: return "no_parameters";
    }
    return "unknown";
}

}  // namespace dqas
