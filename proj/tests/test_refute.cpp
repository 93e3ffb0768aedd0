#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "causal/quantum.hpp"
#include "causal/refute.hpp"
#include "causal/rng.hpp"
#include "helpers.hpp"

using namespace causal;
using testutil::Noise;
using testutil::Scm;

namespace {

const Scm kWellSpecified{{"Z", "X", "Y"},
                         {{"Z", "X", 1.0}, {"X", "Y", 2.0}, {"Z", "Y", 3.0}},
                         Noise::Normal,
                         1.0};

Estimand backdoor_xy() {
    Estimand e;
    e.strategy = Strategy::Backdoor;
    e.treatment = "X";
    e.outcome = "Y";
    e.adjustment = {"Z"};
    return e;
}

}  // namespace

TEST_CASE("random common cause barely moves a well-specified estimate") {
    Rng rng(70);
    const DataTable t = testutil::simulate(kWellSpecified, 5000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_random_common_cause(t, e, est, 100, Rng(7));
    CHECK(std::abs(r.new_effect - est.ate) < 0.01 * std::abs(est.ate));
    CHECK(r.p_value >= 0.5);
    CHECK(r.replicates == 100);
    CHECK_FALSE(r.wide_variance);
}

TEST_CASE("random common cause converges to the original as n grows") {
    Rng rng(71);
    const DataTable t = testutil::simulate(kWellSpecified, 20000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_random_common_cause(t, e, est, 50, Rng(8));
    CHECK(std::abs(r.new_effect - est.ate) < 0.01 * std::abs(est.ate));
}

TEST_CASE("k=1 run is flagged wide variance") {
    Rng rng(72);
    const DataTable t = testutil::simulate(kWellSpecified, 1000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_random_common_cause(t, e, est, 1, Rng(9));
    CHECK(r.replicates == 1);
    CHECK(r.wide_variance);
}

TEST_CASE("placebo sends a real effect to zero") {
    Rng rng(73);
    const DataTable t = testutil::simulate(kWellSpecified, 5000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_placebo(t, e, est, 100, Rng(10));
    // Placebo effects live on the scale of the placebo column; ~0 here.
    CHECK(std::abs(r.new_effect) < 0.05 * std::abs(est.ate));
    CHECK(r.p_value >= 0.9);
}

TEST_CASE("placebo of pure noise on pure noise is near zero") {
    Rng rng(74);
    DataTable t;
    std::vector<double> x(2000), y(2000);
    for (size_t i = 0; i < 2000; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    t.add_column("X", std::move(x));
    t.add_column("Y", std::move(y));
    Estimand e;
    e.strategy = Strategy::Backdoor;
    e.treatment = "X";
    e.outcome = "Y";
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_placebo(t, e, est, 100, Rng(11));
    CHECK(std::abs(r.new_effect) < 0.01);
}

TEST_CASE("data subset stays near the original on a well-specified model") {
    Rng rng(75);
    const DataTable t = testutil::simulate(kWellSpecified, 5000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_data_subset(t, e, est, 0.8, 100, Rng(12));
    CHECK(std::abs(r.new_effect - est.ate) < 0.02 * std::abs(est.ate));
    CHECK(r.p_value >= 0.5);
}

TEST_CASE("data subset at fraction one reproduces the original exactly") {
    Rng rng(76);
    const DataTable t = testutil::simulate(kWellSpecified, 2000, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_data_subset(t, e, est, 1.0, 5, Rng(13));
    CHECK(r.new_effect == doctest::Approx(est.ate).epsilon(1e-12));

    CHECK_THROWS(refute_data_subset(t, e, est, 0.0, 5, Rng(13)));
    CHECK_THROWS(refute_data_subset(t, e, est, 0.001, 5, Rng(13)));  // too small for estimator
}

TEST_CASE("half-data subsets keep the entanglement effect stable") {
    Rng rng(78);
    const DataTable t = build_entanglement_dataset(20, 100, rng);
    Estimand e;
    e.strategy = Strategy::Backdoor;
    e.treatment = "E";
    e.outcome = "absC";
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult r = refute_data_subset(t, e, est, 0.5, 100, Rng(15));
    CHECK(std::abs(r.new_effect - est.ate) < 0.1 * std::abs(est.ate));
}

TEST_CASE("refuters are deterministic given the seed") {
    Rng rng(77);
    const DataTable t = testutil::simulate(kWellSpecified, 1500, rng);
    const Estimand e = backdoor_xy();
    const Estimate est = estimate_backdoor_linear(t, e);
    const RefutationResult a = refute_placebo(t, e, est, 40, Rng(5));
    const RefutationResult b = refute_placebo(t, e, est, 40, Rng(5));
    CHECK(a.new_effect == b.new_effect);
    CHECK(a.p_value == b.p_value);
    CHECK(a.effects == b.effects);
}

TEST_CASE("aggregate confidence is the arithmetic mean") {
    RefutationResult a, b, c;
    a.p_value = 1.0;
    b.p_value = 0.9;
    c.p_value = 0.92;
    CHECK(aggregate_confidence({a, b, c}) == doctest::Approx(0.94));
    CHECK(aggregate_confidence({b}) == doctest::Approx(0.9));
    CHECK_THROWS(aggregate_confidence({}));
}

TEST_CASE("refutation formats like the four-step report") {
    RefutationResult r;
    r.method = RefuterMethod::PlaceboTreatment;
    r.original_effect = -2913.16;
    r.new_effect = 0.0;
    r.p_value = 1.0;
    r.replicates = 100;
    const std::string s = format_refutation(r);
    CHECK(s.find("Refute: Use a Placebo Treatment") != std::string::npos);
    CHECK(s.find("New effect:0") != std::string::npos);
    CHECK(s.find("p value:1.00") != std::string::npos);
}
