#include <doctest.h>

#include <cmath>
#include <vector>

#include "gexp/expectation.hpp"

using namespace gexp;

namespace {

const VolatilityBand kBand{1.0, 2.0};

EvaluationConfig quick_config(std::int64_t n_paths, Index steps = 64) {
    EvaluationConfig cfg;
    cfg.grid = make_uniform_grid(1.0, steps);
    cfg.band = kBand;
    cfg.n_paths = n_paths;
    cfg.seeds = SeedPolicy{555u};
    return cfg;
}

// brute-force oracle for the one-dimensional generator: sup over constant
// volatilities in the band of a sigma^2 / 2
double g_oracle(double a, const VolatilityBand& band) {
    double best = -1e300;
    for (int i = 0; i <= 1000; ++i) {
        const double s = band.sigma_lo +
                         (band.sigma_hi - band.sigma_lo) * static_cast<double>(i) / 1000.0;
        best = std::max(best, 0.5 * s * s * a);
    }
    return best;
}

// Simpson quadrature of |x|^p against the N(0, s^2) density
double abs_moment_quadrature(double p, double s) {
    const double lo = 0.0, hi = 10.0 * s;
    const int n = 20000;  // even
    const double h = (hi - lo) / n;
    auto f = [&](double x) {
        return std::pow(x, p) * std::exp(-x * x / (2.0 * s * s));
    };
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return 2.0 * acc * h / 3.0 / std::sqrt(2.0 * M_PI * s * s);
}

} // namespace

TEST_CASE("generator matches the constant-scenario oracle") {
    const GFunction g{kBand};
    CHECK(g(0.0) == 0.0);
    CHECK(g(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g(-1.0) == doctest::Approx(-0.5).epsilon(1e-14));
    for (const double a : {-2.5, -0.3, 0.7, 3.0}) {
        CHECK(g(a) == doctest::Approx(g_oracle(a, kBand)).epsilon(1e-9));
    }
}

TEST_CASE("gnormal absolute moments: closed form vs quadrature") {
    CHECK(gnormal_abs_moment(2.0, kBand) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(gnormal_abs_moment(1.0, kBand) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK(gnormal_abs_moment(4.0, kBand) == doctest::Approx(48.0).epsilon(1e-12));
    for (const double p : {1.0, 1.7, 2.0, 3.2, 4.0}) {
        CHECK(gnormal_abs_moment(p, kBand) ==
              doctest::Approx(abs_moment_quadrature(p, 2.0)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(gnormal_abs_moment(0.5, kBand), std::domain_error);
}

TEST_CASE("constants are preserved exactly") {
    const ControlSet controls = default_control_set(kBand);
    const EvaluationConfig cfg = quick_config(777);  // odd count on purpose
    const PayoffFunctional constant{"const", 1.0,
                                    [](const SamplePath&) { return 0.1; }};
    const ExpectationEstimate est = sup_expectation(constant, controls, cfg);
    CHECK(est.value == 0.1);
    CHECK(lower_expectation(constant, controls, cfg).value == 0.1);
}

TEST_CASE("terminal square matches the band endpoints") {
    const ControlSet controls = default_control_set(kBand);
    const EvaluationConfig cfg = quick_config(20000);
    const PayoffFunctional square{"B1^2", 1.0, [](const SamplePath& path) {
                                      const double b = path.b[path.n_steps()];
                                      return b * b;
                                  }};
    const ExpectationEstimate upper = sup_expectation(square, controls, cfg);
    CHECK(std::abs(upper.value - 4.0) <= 3.0 * upper.std_error);

    const ExpectationEstimate lower = lower_expectation(square, controls, cfg);
    CHECK(std::abs(lower.value - 1.0) <= 3.0 * lower.std_error);
    CHECK(lower.value <= upper.value);

    const PayoffFunctional neg_square{"-B1^2", 1.0, [](const SamplePath& path) {
                                          const double b = path.b[path.n_steps()];
                                          return -b * b;
                                      }};
    const ExpectationEstimate neg = sup_expectation(neg_square, controls, cfg);
    CHECK(std::abs(neg.value + 1.0) <= 3.0 * neg.std_error);
}

TEST_CASE("estimate reports the argmax row of the scenario table") {
    const ControlSet controls = default_control_set(kBand);
    const EvaluationConfig cfg = quick_config(512);
    const PayoffFunctional payoff{"qv", 1.0, [](const SamplePath& path) {
                                      return path.qv[path.n_steps()];
                                  }};
    const ExpectationEstimate est = sup_expectation(payoff, controls, cfg);
    REQUIRE(!est.per_scenario.empty());
    double max_mean = est.per_scenario.front().mean;
    for (const auto& row : est.per_scenario) max_mean = std::max(max_mean, row.mean);
    CHECK(est.value == max_mean);
    CHECK(est.n_scenarios == static_cast<int>(controls.size()));
    // qv is maximal under the constant max-vol scenario, exactly 4
    CHECK(est.value == 4.0);
    CHECK(est.argmax_control_id == "const(2)");
}

TEST_CASE("capacity estimates") {
    const ControlSet controls = default_control_set(kBand);
    const EvaluationConfig cfg = quick_config(20000);

    const PathPredicate always{"always", 1.0, [](const SamplePath&) { return true; }};
    CHECK(capacity_estimate(always, controls, cfg).value == 1.0);

    ControlSet constants;
    for (int i = 0; i < 5; ++i) {
        constants.push_back(VolatilityControl::constant(1.0 + 0.25 * i));
    }
    const PathPredicate positive{"B1>0", 1.0, [](const SamplePath& path) {
                                     return path.b[path.n_steps()] > 0.0;
                                 }};
    const ExpectationEstimate freq = capacity_estimate(positive, constants, cfg);
    CHECK(std::abs(freq.value - 0.5) <=
          3.0 * std::sqrt(0.25 / static_cast<double>(cfg.n_paths)));

    const PathPredicate extreme{"max|B|>10s", 1.0, [](const SamplePath& path) {
                                    return path.b.abs().maxCoeff() > 20.0;
                                }};
    CHECK(capacity_estimate(extreme, controls, cfg).value < 1e-3);
}

TEST_CASE("axiom spot checks on shared samples") {
    const ControlSet controls = default_control_set(kBand);
    const EvaluationConfig cfg = quick_config(256);
    const PayoffFunctional x{"x", 1.0, [](const SamplePath& path) {
                                 return std::tanh(path.b[path.n_steps()]) + 1.5;
                             }};
    const PayoffFunctional y{"y", 1.0, [](const SamplePath& path) {
                                 return std::tanh(path.b[path.n_steps()]);
                             }};
    const PayoffFunctional diff{"x-y", 1.0, [](const SamplePath&) { return 1.5; }};
    const double sup_x = sup_expectation(x, controls, cfg).value;
    const double sup_y = sup_expectation(y, controls, cfg).value;
    const double sup_d = sup_expectation(diff, controls, cfg).value;
    CHECK(sup_x >= sup_y);                 // monotone
    CHECK(sup_x - sup_y <= sup_d + 1e-15); // sub-additive
    CHECK(lower_expectation(y, controls, cfg).value <= sup_y);
}

TEST_CASE("configuration errors") {
    const EvaluationConfig cfg = quick_config(16);
    const PayoffFunctional payoff{"p", 1.0, [](const SamplePath&) { return 0.0; }};
    CHECK_THROWS_AS(sup_expectation(payoff, ControlSet{}, cfg), std::invalid_argument);

    const PayoffFunctional late{"late", 2.0, [](const SamplePath&) { return 0.0; }};
    CHECK_THROWS_AS(sup_expectation(late, default_control_set(kBand), cfg),
                    std::invalid_argument);
}

TEST_CASE("batch evaluation is jobs-invariant") {
    const ControlSet controls = default_control_set(kBand, 5, true);
    EvaluationConfig cfg = quick_config(128);
    const std::vector<PayoffFunctional> payoffs = {
        {"b", 1.0, [](const SamplePath& p) { return p.b[p.n_steps()]; }},
        {"qv", 1.0, [](const SamplePath& p) { return p.qv[p.n_steps()]; }},
    };
    cfg.jobs = 1;
    const BatchResult serial = evaluate_payoffs(controls, payoffs, cfg);
    cfg.jobs = 3;
    const BatchResult threaded = evaluate_payoffs(controls, payoffs, cfg);
    for (std::size_t c = 0; c < serial.stats.size(); ++c) {
        for (std::size_t p = 0; p < serial.stats[c].size(); ++p) {
            CHECK(serial.stats[c][p].mean == threaded.stats[c][p].mean);
            CHECK(serial.stats[c][p].se == threaded.stats[c][p].se);
        }
    }
}
