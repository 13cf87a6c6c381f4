#include "dqas/statevector.hpp"

#include <bit>
#include <cmath>

#include "dqas/error.hpp"

namespace dqas {

Matrix2 u_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Complex el = std::polar(1.0, lambda);
    const Complex ep = std::polar(1.0, phi);
    return {Complex(c, 0.0), -el * s, ep * s, ep * el * c};
}

Matrix2 u_matrix_derivative(double theta, double phi, double lambda, int which) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Complex el = std::polar(1.0, lambda);
    const Complex ep = std::polar(1.0, phi);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 0: return {Complex(-s / 2, 0.0), -el * (c / 2), ep * (c / 2), -ep * el * (s / 2)};
        case 1: return {Complex(0.0), Complex(0.0), i * ep * s, i * ep * el * c};
        case 2: return {Complex(0.0), -i * el * s, Complex(0.0), i * ep * el * c};
        default: throw PreconditionError("u_matrix_derivative: angle index must be 0, 1 or 2");
    }
}

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 30) throw PreconditionError("statevector: unsupported qubit count");
    amp_.assign(std::size_t{1} << n_qubits, Complex(0.0));
    amp_[0] = 1.0;
}

Statevector Statevector::basis(int n_qubits, std::uint64_t index) {
    Statevector s(n_qubits);
    if (index >= s.dimension()) throw PreconditionError("statevector: basis index out of range");
    s.amp_[0] = 0.0;
    s.amp_[index] = 1.0;
    return s;
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    if (amplitudes.empty() || !std::has_single_bit(amplitudes.size()))
        throw PreconditionError("statevector: dimension must be a power of two");
    Statevector s;
    s.n_ = std::countr_zero(amplitudes.size());
    s.amp_ = std::move(amplitudes);
    return s;
}

void Statevector::check(int q) const {
    if (q < 0 || q >= n_) throw PreconditionError("statevector: qubit " + std::to_string(q) + " out of range");
}

void Statevector::apply(int q, const Matrix2& m) {
    check(q);
    const std::size_t bit = mask(q);
    const std::size_t dim = amp_.size();
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t k = base; k < base + bit; ++k) {
            const Complex a0 = amp_[k];
            const Complex a1 = amp_[k + bit];
            amp_[k] = m[0] * a0 + m[1] * a1;
            amp_[k + bit] = m[2] * a0 + m[3] * a1;
        }
    }
}

void Statevector::apply_x(int q) {
    check(q);
    const std::size_t bit = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
}

void Statevector::apply_h(int q) {
    const double r = 1.0 / std::sqrt(2.0);
    apply(q, {Complex(r), Complex(r), Complex(r), Complex(-r)});
}

void Statevector::apply_cnot(int control, int target) {
    check(control);
    check(target);
    if (control == target) throw PreconditionError("statevector: CNOT on a single qubit");
    const std::size_t cb = mask(control);
    const std::size_t tb = mask(target);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
}

void Statevector::apply_cz(int a, int b) {
    check(a);
    check(b);
    const std::size_t both = mask(a) | mask(b);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & both) == both) amp_[i] = -amp_[i];
}

void Statevector::apply_swap(int a, int b) {
    check(a);
    check(b);
    if (a == b) return;
    const std::size_t ab = mask(a);
    const std::size_t bb = mask(b);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & ab) && !(i & bb)) std::swap(amp_[i], amp_[(i & ~ab) | bb]);
}

double Statevector::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

Complex Statevector::inner(const Statevector& other) const {
    if (other.dimension() != dimension()) throw PreconditionError("statevector: dimension mismatch");
    Complex s(0.0);
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
}

double fidelity(const Statevector& a, const Statevector& b) { return std::norm(a.inner(b)); }

}  // namespace dqas
