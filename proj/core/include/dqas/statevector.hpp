#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace dqas {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

/// U(theta, phi, lambda) = [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]].
Matrix2 u_matrix(double theta, double phi, double lambda);

/// Partial derivative of u_matrix with respect to angle `which` (0 theta, 1 phi, 2 lambda).
Matrix2 u_matrix_derivative(double theta, double phi, double lambda, int which);

/**
 * Dense n-qubit state. Qubit 0 is the most significant bit of the basis
 * index, so |q0 q1 ... q_{n-1}> has index sum_k q_k 2^{n-1-k}.
 */
class Statevector {
public:
    explicit Statevector(int n_qubits);  ///< |0...0>
    static Statevector basis(int n_qubits, std::uint64_t index);
    /// Takes ownership of amplitudes; the size must be a power of two.
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] int num_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amp_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amp_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amp_; }
    Complex& operator[](std::size_t i) { return amp_[i]; }
    const Complex& operator[](std::size_t i) const { return amp_[i]; }

    /// Basis-index bit mask of qubit q.
    [[nodiscard]] std::size_t mask(int q) const noexcept { return std::size_t{1} << (n_ - 1 - q); }

    /// Applies an arbitrary (not necessarily unitary) 2x2 matrix to qubit q.
    void apply(int q, const Matrix2& m);
    void apply_u(int q, double theta, double phi, double lambda) { apply(q, u_matrix(theta, phi, lambda)); }
    void apply_x(int q);
    void apply_h(int q);
    void apply_cnot(int control, int target);
    void apply_cz(int a, int b);
    void apply_swap(int a, int b);

    [[nodiscard]] double norm() const;
    /// <this|other>
    [[nodiscard]] Complex inner(const Statevector& other) const;

private:
    Statevector() = default;
    void check(int q) const;

    int n_ = 0;
    std::vector<Complex> amp_;
};

/// |<a|b>|^2
double fidelity(const Statevector& a, const Statevector& b);

}  // namespace dqas
