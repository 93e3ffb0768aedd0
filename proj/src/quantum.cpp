#include "causal/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causal {

namespace {

using Complex = std::complex<double>;
using Mat4 = std::array<Complex, 16>;

constexpr double kTol = 1e-12;

Mat4 multiply(const Mat4& a, const Mat4& b) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            const Complex aik = a[i * 4 + k];
            if (aik == Complex{}) continue;
            for (int j = 0; j < 4; ++j) out[i * 4 + j] += aik * b[k * 4 + j];
        }
    }
    return out;
}

Mat4 adjoint(const Mat4& a) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) out[i * 4 + j] = std::conj(a[j * 4 + i]);
    }
    return out;
}

}  // namespace

DensityMatrix::DensityMatrix(const std::array<Complex, 16>& m) : m_(m) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const Complex d = m_[i * 4 + j] - std::conj(m_[j * 4 + i]);
            if (std::abs(d) > kTol) throw std::invalid_argument("density matrix is not Hermitian");
        }
    }
    Complex tr{};
    for (int i = 0; i < 4; ++i) tr += m_[i * 4 + i];
    if (std::abs(tr - Complex{1.0}) > kTol) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    const auto eig = hermitian_eigenvalues(m_);
    if (eig.front() < -kTol) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

std::array<double, 4> DensityMatrix::diagonal_probabilities() const {
    std::array<double, 4> p{};
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        p[i] = std::clamp(m_[i * 4 + i].real(), 0.0, 1.0);
        total += p[i];
    }
    if (total <= 0.0) throw std::logic_error("degenerate diagonal");
    for (double& v : p) v /= total;
    return p;
}

DensityMatrix DensityMatrix::pure(const std::array<Complex, 4>& amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (norm2 <= 0.0) throw std::invalid_argument("zero state vector");
    Mat4 m{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m[i * 4 + j] = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
        }
    }
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::bell_phi_plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return pure({Complex{r}, Complex{}, Complex{}, Complex{r}});
}

DensityMatrix DensityMatrix::product(const std::array<Complex, 2>& a,
                                     const std::array<Complex, 2>& b) {
    std::array<Complex, 4> amp{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) amp[i * 2 + j] = a[i] * b[j];
    }
    return pure(amp);
}

DensityMatrix DensityMatrix::werner(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("werner: p must be in [0, 1]");
    const Mat4 bell = bell_phi_plus().raw();
    Mat4 m{};
    for (int i = 0; i < 16; ++i) m[i] = p * bell[i];
    for (int i = 0; i < 4; ++i) m[i * 4 + i] += (1.0 - p) * 0.25;
    return DensityMatrix(m);
}

DensityMatrix random_density_matrix(Rng& rng) {
    Mat4 g{};
    for (auto& v : g) v = Complex{rng.normal(), rng.normal()};
    const Mat4 gg = multiply(g, adjoint(g));
    Complex tr{};
    for (int i = 0; i < 4; ++i) tr += gg[i * 4 + i];
    Mat4 rho{};
    for (int i = 0; i < 16; ++i) rho[i] = gg[i] / tr.real();
    // Symmetrize away round-off before validation.
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const Complex v = 0.5 * (rho[i * 4 + j] + std::conj(rho[j * 4 + i]));
            rho[i * 4 + j] = v;
            rho[j * 4 + i] = std::conj(v);
        }
    }
    return DensityMatrix(rho);
}

std::array<double, 4> hermitian_eigenvalues(const Mat4& input) {
    Mat4 a = input;
    // Cyclic complex Jacobi; explicit 4x4 rotations keep the update simple.
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i != j) off += std::norm(a[i * 4 + j]);
            }
        }
        if (off < 1e-30) break;

        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const Complex apq = a[p * 4 + q];
                const double mag = std::abs(apq);
                if (mag < 1e-18) continue;
                const Complex phase = apq / mag;
                const double app = a[p * 4 + p].real();
                const double aqq = a[q * 4 + q].real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                Mat4 j{};
                for (int i = 0; i < 4; ++i) j[i * 4 + i] = Complex{1.0};
                j[p * 4 + p] = Complex{c};
                j[p * 4 + q] = s * phase;
                j[q * 4 + p] = Complex{-s} * std::conj(phase);
                j[q * 4 + q] = Complex{c};
                a = multiply(adjoint(j), multiply(a, j));
            }
        }
    }
    std::array<double, 4> eig{};
    for (int i = 0; i < 4; ++i) eig[i] = a[i * 4 + i].real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

double log_negativity(const DensityMatrix& rho) {
    // Partial transpose over the second qubit: (ab|rho|cd) -> (ad|rho|cb).
    Mat4 pt{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    pt[(2 * a + b) * 4 + (2 * c + d)] = rho.at(2 * a + d, 2 * c + b);
                }
            }
        }
    }
    const auto eig = hermitian_eigenvalues(pt);
    double trace_norm = 0.0;
    for (double v : eig) trace_norm += std::abs(v);
    const double e = std::log2(trace_norm);
    return std::max(0.0, e);
}

std::vector<std::pair<int, int>> measure_zz(const DensityMatrix& rho, size_t shots, Rng& rng) {
    if (shots < 1) throw std::invalid_argument("measure_zz: shots must be >= 1");
    const auto p = rho.diagonal_probabilities();
    std::vector<std::pair<int, int>> out;
    out.reserve(shots);
    for (size_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        double acc = 0.0;
        int idx = 3;
        for (int i = 0; i < 4; ++i) {
            acc += p[i];
            if (u < acc) {
                idx = i;
                break;
            }
        }
        const int a = idx >> 1;
        const int b = idx & 1;
        out.push_back({1 - 2 * a, 1 - 2 * b});
    }
    return out;
}

double correlation(const std::vector<std::pair<int, int>>& samples) {
    if (samples.empty()) throw std::invalid_argument("correlation: no samples");
    double s = 0.0;
    for (const auto& [ma, mb] : samples) s += static_cast<double>(ma) * mb;
    return s / static_cast<double>(samples.size());
}

DataTable build_entanglement_dataset(const std::vector<DensityMatrix>& states, size_t shots,
                                     Rng& rng) {
    if (states.empty() || shots < 1) {
        throw std::invalid_argument("build_entanglement_dataset: need states and shots >= 1");
    }
    std::vector<double> state, e_col, ma, mb, c_col, absc;
    const size_t total = states.size() * shots;
    state.reserve(total);
    e_col.reserve(total);
    ma.reserve(total);
    mb.reserve(total);
    c_col.reserve(total);
    absc.reserve(total);

    for (size_t s = 0; s < states.size(); ++s) {
        Rng state_rng = rng.derive(s);
        const double e = log_negativity(states[s]);
        const auto samples = measure_zz(states[s], shots, state_rng);
        const double c = correlation(samples);
        for (const auto& [a, b] : samples) {
            state.push_back(static_cast<double>(s + 1));
            e_col.push_back(e);
            ma.push_back(a);
            mb.push_back(b);
            c_col.push_back(c);
            absc.push_back(std::abs(c));
        }
    }

    DataTable out;
    out.add_column("state", std::move(state));
    out.add_column("E", std::move(e_col));
    out.add_column("M_A", std::move(ma));
    out.add_column("M_B", std::move(mb));
    out.add_column("C", std::move(c_col));
    out.add_column("absC", std::move(absc));
    return out;
}

DataTable build_entanglement_dataset(size_t n_states, size_t shots, Rng& rng) {
    if (n_states < 1 || shots < 1) {
        throw std::invalid_argument("build_entanglement_dataset: need states and shots >= 1");
    }
    // One derived stream per state covers both the Ginibre draw and that
    // state's measurements, so states can be simulated independently.
    std::vector<double> state, e_col, ma, mb, c_col, absc;
    const size_t total = n_states * shots;
    state.reserve(total);
    e_col.reserve(total);
    ma.reserve(total);
    mb.reserve(total);
    c_col.reserve(total);
    absc.reserve(total);

    for (size_t s = 0; s < n_states; ++s) {
        Rng state_rng = rng.derive(s);
        const DensityMatrix rho = random_density_matrix(state_rng);
        const double e = log_negativity(rho);
        const auto samples = measure_zz(rho, shots, state_rng);
        const double c = correlation(samples);
        for (const auto& [a, b] : samples) {
            state.push_back(static_cast<double>(s + 1));
            e_col.push_back(e);
            ma.push_back(a);
            mb.push_back(b);
            c_col.push_back(c);
            absc.push_back(std::abs(c));
        }
    }

    DataTable out;
    out.add_column("state", std::move(state));
    out.add_column("E", std::move(e_col));
    out.add_column("M_A", std::move(ma));
    out.add_column("M_B", std::move(mb));
    out.add_column("C", std::move(c_col));
    out.add_column("absC", std::move(absc));
    return out;
}

}  // namespace causal
