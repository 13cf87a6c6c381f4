#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dqas {

struct PauliTerm {
    double coefficient = 0.0;
    std::string word;  ///< one of I, X, Y, Z per qubit; word[0] acts on qubit 0
};

/// Bit masks of one Pauli word in the basis-index convention of Statevector.
struct PauliMasks {
    std::uint64_t flip = 0;   ///< X or Y positions
    std::uint64_t phase = 0;  ///< Y or Z positions
    int n_y = 0;
};

/**
 * Real linear combination of Pauli words on n qubits. Duplicate words are
 * merged by summing coefficients; terms keep first-appearance order.
 */
class PauliHamiltonian {
public:
    explicit PauliHamiltonian(int n_qubits);

    /// Adds coefficient * word, merging with an existing identical word.
    /// Throws ConfigError for a bad word or a non-finite coefficient.
    void add(double coefficient, std::string_view word);

    [[nodiscard]] int num_qubits() const noexcept { return n_; }
    [[nodiscard]] const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] const std::vector<PauliMasks>& masks() const noexcept { return masks_; }

    /// Text form accepted by load_hamiltonian.
    [[nodiscard]] std::string to_text() const;

private:
    int n_;
    std::vector<PauliTerm> terms_;
    std::vector<PauliMasks> masks_;
};

/// sum_i Z_i Z_{i+1} + X_i, unit coefficients; indices wrap when periodic.
PauliHamiltonian build_tfim(int n, bool periodic = true);

/// sum_i X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1} + Z_i, unit coefficients.
PauliHamiltonian build_heisenberg(int n, bool periodic = true);

/// Parses `<coefficient> <pauli word>` lines; `#` starts a comment.
PauliHamiltonian load_hamiltonian(std::string_view text);
PauliHamiltonian load_hamiltonian_file(const std::filesystem::path& path);

/// Smallest eigenvalue. Dense Hermitian eigensolver up to 10 qubits, Lanczos
/// with full reorthogonalisation from 11 to 14 qubits. Throws beyond 14.
double exact_ground_energy(const PauliHamiltonian& h);

}  // namespace dqas
