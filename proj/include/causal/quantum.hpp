#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace causal {

// Two-qubit density matrix: 4x4 complex, Hermitian, unit trace, positive
// semidefinite (all within 1e-12). Row/column index is 2*a + b for basis
// state |ab>, first qubit a (Alice), second qubit b (Bob).
class DensityMatrix {
public:
    using Complex = std::complex<double>;

    // Validates the invariants; throws on violation.
    explicit DensityMatrix(const std::array<Complex, 16>& m);

    const Complex& at(int row, int col) const { return m_[row * 4 + col]; }
    const std::array<Complex, 16>& raw() const { return m_; }

    // Diagonal probabilities of the computational basis, clamped to [0, 1].
    std::array<double, 4> diagonal_probabilities() const;

    static DensityMatrix bell_phi_plus();                       // |Phi+><Phi+|
    static DensityMatrix pure(const std::array<Complex, 4>& amplitudes);
    static DensityMatrix product(const std::array<Complex, 2>& a,
                                 const std::array<Complex, 2>& b);
    // p * |Phi+><Phi+| + (1-p) * I/4.
    static DensityMatrix werner(double p);

private:
    std::array<Complex, 16> m_;
};

// Ginibre draw: rho = G G^dagger / tr(G G^dagger) with i.i.d. complex
// normal entries. Full rank with probability one.
DensityMatrix random_density_matrix(Rng& rng);

// Eigenvalues of a 4x4 Hermitian matrix (cyclic Jacobi), ascending.
std::array<double, 4> hermitian_eigenvalues(const std::array<std::complex<double>, 16>& m);

// log2 of the trace norm of the partial transpose over the second qubit,
// clamped at 0. In [0, 1] for two qubits.
double log_negativity(const DensityMatrix& rho);

// Joint sigma_z measurement outcomes: basis state |ab> maps to
// (1 - 2a, 1 - 2b), sampled from the diagonal of rho.
std::vector<std::pair<int, int>> measure_zz(const DensityMatrix& rho, size_t shots, Rng& rng);

// Empirical product expectation (1/n) * sum m_a * m_b, the <sigma_z x
// sigma_z> estimator; always defined, including constant sequences.
double correlation(const std::vector<std::pair<int, int>>& samples);

// The entanglement table: one block of `shots` rows per state, with
// columns state, E, M_A, M_B, C, absC. Per state, E is the state's
// log-negativity and C the correlation of that state's shot sequence.
DataTable build_entanglement_dataset(const std::vector<DensityMatrix>& states, size_t shots,
                                     Rng& rng);

// Same table over n_states Ginibre draws.
DataTable build_entanglement_dataset(size_t n_states, size_t shots, Rng& rng);

}  // namespace causal
