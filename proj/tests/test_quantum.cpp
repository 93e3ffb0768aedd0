#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <map>

#include "causal/quantum.hpp"
#include "causal/rng.hpp"

using namespace causal;
using Complex = std::complex<double>;

TEST_CASE("random density matrices satisfy the state invariants") {
    Rng rng(314159);
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_density_matrix(rng);  // ctor validates
        double trace = 0.0;
        for (int d = 0; d < 4; ++d) trace += rho.at(d, d).real();
        CHECK(trace == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Same seed, same matrix.
    Rng a(9), b(9);
    const DensityMatrix ra = random_density_matrix(a);
    const DensityMatrix rb = random_density_matrix(b);
    for (int i = 0; i < 16; ++i) CHECK(ra.raw()[i] == rb.raw()[i]);
}

TEST_CASE("ginibre mean purity approaches 8/17") {
    Rng rng(271828);
    double purity = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        const DensityMatrix rho = random_density_matrix(rng);
        double p = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) p += std::norm(rho.at(i, j));
        }
        purity += p;
    }
    purity /= draws;
    CHECK(std::abs(purity - 8.0 / 17.0) < 0.01);
}

TEST_CASE("log negativity anchor states") {
    CHECK(log_negativity(DensityMatrix::bell_phi_plus()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(log_negativity(DensityMatrix::pure({Complex{1}, {}, {}, {}})) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(log_negativity(DensityMatrix::werner(0.5)) ==
          doctest::Approx(std::log2(1.25)).epsilon(1e-10));
}

TEST_CASE("log negativity vanishes on random product states") {
    Rng rng(161803);
    for (int i = 0; i < 1000; ++i) {
        const std::array<Complex, 2> a{Complex{rng.normal(), rng.normal()},
                                       Complex{rng.normal(), rng.normal()}};
        const std::array<Complex, 2> b{Complex{rng.normal(), rng.normal()},
                                       Complex{rng.normal(), rng.normal()}};
        const DensityMatrix rho = DensityMatrix::product(a, b);
        CHECK(log_negativity(rho) <= 1e-10);
    }
}

TEST_CASE("log negativity stays within the two-qubit range on random states") {
    Rng rng(141421);
    for (int i = 0; i < 500; ++i) {
        const double e = log_negativity(random_density_matrix(rng));
        CHECK(e >= 0.0);
        CHECK(e <= 1.0);
    }
}

TEST_CASE("bell state measurements are perfectly correlated") {
    Rng rng(7);
    for (const auto& [ma, mb] : measure_zz(DensityMatrix::bell_phi_plus(), 500, rng)) {
        CHECK(ma == mb);
    }
}

TEST_CASE("product basis state measures deterministically") {
    // |01><01| always yields (+1, -1).
    const DensityMatrix rho = DensityMatrix::pure({Complex{}, Complex{1}, Complex{}, Complex{}});
    Rng rng(8);
    for (const auto& [ma, mb] : measure_zz(rho, 200, rng)) {
        CHECK(ma == 1);
        CHECK(mb == -1);
    }
}

TEST_CASE("maximally mixed state is uniform over outcomes") {
    std::array<Complex, 16> m{};
    for (int i = 0; i < 4; ++i) m[i * 4 + i] = Complex{0.25};
    const DensityMatrix mixed(m);
    Rng rng(9);
    std::map<std::pair<int, int>, int> counts;
    const int shots = 10000;
    for (const auto& s : measure_zz(mixed, shots, rng)) ++counts[s];
    for (const auto& [outcome, count] : counts) {
        (void)outcome;
        CHECK(std::abs(count / static_cast<double>(shots) - 0.25) < 0.02);
    }
}

TEST_CASE("measured zz expectation converges to the trace value") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = random_density_matrix(rng);
        // tr(rho sigma_z x sigma_z) = p00 - p01 - p10 + p11.
        const auto p = rho.diagonal_probabilities();
        const double expected = p[0] - p[1] - p[2] + p[3];
        const size_t shots = 4000;
        const double c = correlation(measure_zz(rho, shots, rng));
        CHECK(std::abs(c - expected) < 3.0 / std::sqrt(static_cast<double>(shots)));
    }
}

TEST_CASE("correlation of explicit sequences") {
    CHECK(correlation({{1, 1}, {1, 1}}) == 1.0);
    CHECK(correlation({{1, -1}, {1, -1}}) == -1.0);
    CHECK_THROWS(correlation({}));

    Rng rng(11);
    std::vector<std::pair<int, int>> iid;
    for (int i = 0; i < 10000; ++i) {
        iid.push_back({rng.uniform() < 0.5 ? 1 : -1, rng.uniform() < 0.5 ? 1 : -1});
    }
    CHECK(std::abs(correlation(iid)) <= 0.05);
}

TEST_CASE("forced bell state fills the dataset with E=1, C=1") {
    Rng rng(13);
    const DataTable t =
        build_entanglement_dataset({DensityMatrix::bell_phi_plus()}, 100, rng);
    REQUIRE(t.row_count() == 100);
    for (size_t i = 0; i < t.row_count(); ++i) {
        CHECK(t.column("E")[i] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(t.column("C")[i] == 1.0);
        CHECK(t.column("M_A")[i] == t.column("M_B")[i]);
    }
}

TEST_CASE("entanglement dataset has the documented shape and consistency") {
    Rng rng(12);
    const DataTable t = build_entanglement_dataset(20, 100, rng);
    REQUIRE(t.row_count() == 2000);
    REQUIRE(t.column_count() == 6);

    // Per state id: E and C constant, absC = |C|, measurements in {-1, +1}.
    const auto& state = t.column("state");
    const auto& e = t.column("E");
    const auto& c = t.column("C");
    const auto& absc = t.column("absC");
    const auto& ma = t.column("M_A");
    const auto& mb = t.column("M_B");
    std::map<int, std::pair<double, double>> per_state;
    for (size_t i = 0; i < t.row_count(); ++i) {
        const int id = static_cast<int>(state[i]);
        auto [it, inserted] = per_state.insert({id, {e[i], c[i]}});
        if (!inserted) {
            CHECK(it->second.first == e[i]);
            CHECK(it->second.second == c[i]);
        }
        CHECK(absc[i] == std::abs(c[i]));
        CHECK((ma[i] == 1.0 || ma[i] == -1.0));
        CHECK((mb[i] == 1.0 || mb[i] == -1.0));
        CHECK(e[i] >= 0.0);
        CHECK(e[i] <= 1.0);
        CHECK(c[i] >= -1.0);
        CHECK(c[i] <= 1.0);
    }
    CHECK(per_state.size() == 20);

    // Per state, C equals the correlation of that state's shots.
    std::map<int, std::pair<double, int>> sums;
    for (size_t i = 0; i < t.row_count(); ++i) {
        const int id = static_cast<int>(state[i]);
        sums[id].first += ma[i] * mb[i];
        sums[id].second += 1;
    }
    for (const auto& [id, sum_count] : sums) {
        CHECK(per_state[id].second ==
              doctest::Approx(sum_count.first / sum_count.second).epsilon(1e-12));
    }
}
