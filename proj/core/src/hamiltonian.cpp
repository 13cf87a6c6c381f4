#include "dqas/hamiltonian.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "dqas/error.hpp"
#include "dqas/simulator.hpp"
#include "dqas/statevector.hpp"

namespace dqas {

namespace {

std::string bond(int n, int i, int j, char p) {
    std::string w(n, 'I');
    w[i] = p;
    w[j] = p;
    return w;
}

std::string site(int n, int i, char p) {
    std::string w(n, 'I');
    w[i] = p;
    return w;
}

Eigen::MatrixXcd dense_matrix(const PauliHamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.num_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        auto e = Statevector::basis(h.num_qubits(), col);
        const auto he = apply_hamiltonian(h, e);
        for (std::size_t row = 0; row < dim; ++row) m(row, col) = he[row];
    }
    return m;
}

double lanczos_ground_energy(const PauliHamiltonian& h) {
    const int n = h.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    const int max_steps = 300;
    std::vector<Statevector> basis;
    std::vector<double> alpha;
    std::vector<double> beta;

    // Deterministic start vector with overlap on every basis state.
    std::vector<Complex> start(dim);
    for (std::size_t i = 0; i < dim; ++i) start[i] = Complex(1.0 + 0.001 * static_cast<double>(i % 97), 0.0);
    auto v = Statevector::from_amplitudes(std::move(start));
    {
        const double nv = v.norm();
        for (auto& a : v.amplitudes()) a /= nv;
    }
    double previous = 0.0;
    for (int k = 0; k < max_steps; ++k) {
        basis.push_back(v);
        auto w = apply_hamiltonian(h, v);
        const double a = v.inner(w).real();
        alpha.push_back(a);
        for (const auto& b : basis) {  // full reorthogonalisation
            const Complex ov = b.inner(w);
            for (std::size_t i = 0; i < dim; ++i) w[i] -= ov * b[i];
        }
        const double bnorm = w.norm();

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int i = 0; i <= k; ++i) {
            t(i, i) = alpha[i];
            if (i < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        const double e0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (bnorm < 1e-12 || (k > 10 && std::abs(e0 - previous) < 1e-13 * std::max(1.0, std::abs(e0))))
            return e0;
        previous = e0;
        beta.push_back(bnorm);
        for (auto& x : w.amplitudes()) x /= bnorm;
        v = std::move(w);
    }
    return previous;
}

}  // namespace

PauliHamiltonian::PauliHamiltonian(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 30) throw ConfigError("hamiltonian: qubit count must be in [1, 30]");
}

void PauliHamiltonian::add(double coefficient, std::string_view word) {
    if (!std::isfinite(coefficient)) throw ConfigError("hamiltonian: non-finite coefficient");
    if (static_cast<int>(word.size()) != n_)
        throw ConfigError("hamiltonian: word '" + std::string(word) + "' has length " +
                          std::to_string(word.size()) + ", expected " + std::to_string(n_));
    PauliMasks m;
    for (int q = 0; q < n_; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_ - 1 - q);
        switch (word[q]) {
            case 'I': break;
            case 'X': m.flip |= bit; break;
            case 'Y': m.flip |= bit; m.phase |= bit; ++m.n_y; break;
            case 'Z': m.phase |= bit; break;
            default:
                throw ConfigError("hamiltonian: invalid Pauli character '" + std::string(1, word[q]) +
                                  "' in '" + std::string(word) + "'");
        }
    }
    for (auto& t : terms_) {
        if (t.word == word) {
            t.coefficient += coefficient;
            return;
        }
    }
    terms_.push_back({coefficient, std::string(word)});
    masks_.push_back(m);
}

std::string PauliHamiltonian::to_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& t : terms_) out << t.coefficient << ' ' << t.word << '\n';
    return out.str();
}

PauliHamiltonian build_tfim(int n, bool periodic) {
    if (n < 2) throw PreconditionError("tfim: n must be at least 2");
    PauliHamiltonian h(n);
    const int bonds = periodic ? n : n - 1;
    for (int i = 0; i < bonds; ++i) h.add(1.0, bond(n, i, (i + 1) % n, 'Z'));
    for (int i = 0; i < n; ++i) h.add(1.0, site(n, i, 'X'));
    return h;
}

PauliHamiltonian build_heisenberg(int n, bool periodic) {
    if (n < 2) throw PreconditionError("heisenberg: n must be at least 2");
    PauliHamiltonian h(n);
    const int bonds = periodic ? n : n - 1;
    for (int i = 0; i < bonds; ++i)
        for (char p : {'X', 'Y', 'Z'}) h.add(1.0, bond(n, i, (i + 1) % n, p));
    for (int i = 0; i < n; ++i) h.add(1.0, site(n, i, 'Z'));
    return h;
}

PauliHamiltonian load_hamiltonian(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<PauliHamiltonian> h;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string coeff_text;
        std::string word;
        if (!(fields >> coeff_text)) continue;
        std::string extra;
        if (!(fields >> word) || (fields >> extra))
            throw ConfigError("hamiltonian line " + std::to_string(line_no) + ": expected '<coefficient> <word>'");
        double coeff = 0.0;
        std::size_t used = 0;
        try {
            coeff = std::stod(coeff_text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != coeff_text.size())
            throw ConfigError("hamiltonian line " + std::to_string(line_no) + ": non-numeric coefficient '" +
                              coeff_text + "'");
        if (!h) h.emplace(static_cast<int>(word.size()));
        try {
            h->add(coeff, word);
        } catch (const ConfigError& e) {
            throw ConfigError("hamiltonian line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!h) throw ConfigError("hamiltonian: no terms found");
    return std::move(*h);
}

PauliHamiltonian load_hamiltonian_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("hamiltonian: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_hamiltonian(ss.str());
}

double exact_ground_energy(const PauliHamiltonian& h) {
    if (h.num_qubits() > 14) throw PreconditionError("exact_ground_energy: at most 14 qubits supported");
    if (h.num_qubits() > 10) return lanczos_ground_energy(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

}  // namespace dqas
