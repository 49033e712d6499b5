#include <doctest.h>

#include <cmath>

#include "gexp/process.hpp"

using namespace gexp;

namespace {

const VolatilityBand kBand{1.0, 2.0};
const SeedPolicy kSeeds{31415u};

SamplePath test_path(Index steps = 64, std::uint64_t index = 0,
                     double sigma = 1.5) {
    return generate_path(VolatilityControl::constant(sigma),
                         make_uniform_grid(1.0, steps), kBand,
                         kSeeds.stream(0, index), index);
}

SimpleProcess half_indicator() {
    // eta = 1 on [0, 1/2), 0 after
    SimpleProcess eta;
    eta.breakpoints = {0.0, 0.5, 1.0};
    eta.bound = 1.0;
    eta.coefficients.push_back({[](const SamplePath&, Index) { return 1.0; }});
    eta.coefficients.push_back({[](const SamplePath&, Index) { return 0.0; }});
    return eta;
}

} // namespace

TEST_CASE("unit integrand reproduces the integrators exactly") {
    const SamplePath path = test_path();
    const GridProcess one = constant_process(1.0);

    const IntegralPath ito = ito_integral(one, path);
    CHECK((ito.values == path.b).all());

    const IntegralPath qv = qv_integral(one, path);
    CHECK((qv.values == path.qv).all());

    const IntegralPath time = bochner_integral(one, path);
    CHECK((time.values == path.grid->points()).all());  // dyadic grid
    CHECK(time.values[0] == 0.0);
}

TEST_CASE("running square integrand gives the classical identity") {
    const SamplePath path = test_path(256, 7);
    GridProcess twice_b;
    twice_b.id = "2B";
    twice_b.rule = [](Index k, const SamplePath& p) { return 2.0 * p.b[k]; };
    const double final_value = ito_integral(twice_b, path).final_value();
    double db2 = 0.0;
    for (Index k = 0; k < path.n_steps(); ++k) db2 += path.db[k] * path.db[k];
    const double expected = path.b[path.n_steps()] * path.b[path.n_steps()] - db2;
    CHECK(final_value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("simple processes integrate exactly against the sparse sum") {
    const SamplePath path = test_path(64, 3);
    SimpleProcess eta;
    eta.breakpoints = {0.0, 0.25, 0.625, 1.0};
    eta.bound = 3.0;
    for (int j = 0; j < 3; ++j) {
        eta.coefficients.push_back(
            {[j](const SamplePath& p, Index node) {
                return 0.5 * (j + 1) * std::tanh(p.b[node]) + 0.25 * j;
            }});
    }
    const IntegralPath grid_route = ito_integral(eta, path);

    double sparse = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const Index lo = path.grid->index_of(eta.breakpoints[j]);
        const Index hi = path.grid->index_of(eta.breakpoints[j + 1]);
        sparse += eta.coefficients[j].eval(path, lo) * (path.b[hi] - path.b[lo]);
    }
    CHECK(grid_route.final_value() == doctest::Approx(sparse).epsilon(1e-12));

    // breakpoints off the grid are an alignment error
    SimpleProcess off = eta;
    off.breakpoints[1] = 0.3;
    CHECK_THROWS_AS(ito_integral(off, path), std::invalid_argument);
}

TEST_CASE("step indicator accrues exactly half the horizon") {
    const SamplePath path = test_path(8);
    const IntegralPath time = bochner_integral(half_indicator(), path);
    CHECK(time.final_value() == 0.5);
}

TEST_CASE("bounded coefficients are enforced") {
    const SamplePath path = test_path(16);
    SimpleProcess eta;
    eta.breakpoints = {0.0, 1.0};
    eta.bound = 0.5;
    eta.coefficients.push_back({[](const SamplePath&, Index) { return 0.75; }});
    CHECK_THROWS_AS(ito_integral(eta, path), std::logic_error);
}

TEST_CASE("qv integral of a unit-bounded integrand stays inside sigma_hi^2 T") {
    const SamplePath path = test_path(128, 11);
    GridProcess eta;
    eta.id = "tanhB";
    eta.bound = 1.0;
    eta.rule = [](Index k, const SamplePath& p) { return std::tanh(p.b[k]); };
    const double value = std::abs(qv_integral(eta, path).final_value());
    CHECK(value <= kBand.hi2() * 1.0);
}

TEST_CASE("fubini oracle for the mean of int B^2 dt") {
    const GridPtr grid = make_uniform_grid(1.0, 64);
    const VolatilityControl control = VolatilityControl::constant(1.5);
    const std::int64_t n = 20000;
    double acc = 0.0, acc_sq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const SamplePath path = generate_path(
            control, grid, kBand, kSeeds.stream(0, static_cast<std::uint64_t>(i)),
            static_cast<std::uint64_t>(i));
        const double v = bochner_integral(abs_brownian_squared(), path).final_value();
        acc += v;
        acc_sq += v * v;
    }
    const double mean = acc / static_cast<double>(n);
    const double se = std::sqrt((acc_sq / n - mean * mean) / static_cast<double>(n));
    // int_0^T sigma^2 t dt = sigma^2 T^2 / 2, minus the left-point
    // discretization bias sigma^2 T dt / 2
    const double dt = 1.0 / 64.0;
    const double expected = 1.5 * 1.5 * 0.5 * (1.0 - dt);
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("mp norm") {
    const ControlSet controls = default_control_set(kBand);
    EvaluationConfig cfg;
    cfg.grid = make_uniform_grid(1.0, 64);
    cfg.band = kBand;
    cfg.n_paths = 4096;
    cfg.seeds = kSeeds;

    CHECK(mp_norm(constant_process(0.5), 1.0, controls, cfg) == 0.5);
    CHECK(mp_norm(constant_process(0.5), 2.0, controls, cfg) == 0.5);
    CHECK_THROWS_AS(mp_norm(constant_process(1.0), 0.5, controls, cfg),
                    std::domain_error);

    // Holder ordering on the unit horizon
    const double n1 = mp_norm(brownian_process(), 1.0, controls, cfg);
    const double n2 = mp_norm(brownian_process(), 2.0, controls, cfg);
    CHECK(n1 <= n2 * (1.0 + 1e-12));
    // Fubini oracle at the max-vol scenario: sqrt(sigma_hi^2 T^2 / 2)
    CHECK(n2 == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("truncation clamps pointwise") {
    const SamplePath path = test_path(64, 2);
    const GridProcess clamped = truncate(brownian_process(), 1.0);
    const Eigen::ArrayXd values = sample_nodes(clamped, path);
    for (Index k = 0; k < path.n_nodes(); ++k) {
        CHECK(values[k] == std::clamp(path.b[k], -1.0, 1.0));
    }
    CHECK(*clamped.bound == 1.0);

    // a process already inside the clamp is untouched
    const GridProcess small = truncate(constant_process(0.25), 1.0);
    CHECK((sample_nodes(small, path) == 0.25).all());
    CHECK_THROWS_AS(truncate(brownian_process(), 0.0), std::invalid_argument);
}

TEST_CASE("products require a declared bound") {
    const SamplePath path = test_path(32);
    CHECK_THROWS_AS(product(brownian_process(), constant_process(1.0)),
                    std::logic_error);

    const GridProcess masked = product(constant_process(1.0), brownian_process());
    CHECK((sample_nodes(masked, path) == path.b).all());
    const GridProcess zero = product(constant_process(0.0), brownian_process());
    CHECK((sample_nodes(zero, path) == 0.0).all());
}

TEST_CASE("product norms respect the declared bound") {
    const ControlSet controls = default_control_set(kBand, 5, false);
    EvaluationConfig cfg;
    cfg.grid = make_uniform_grid(1.0, 64);
    cfg.band = kBand;
    cfg.n_paths = 512;
    cfg.seeds = kSeeds;

    GridProcess weight;
    weight.id = "w";
    weight.bound = 0.8;
    weight.rule = [](Index k, const SamplePath& p) {
        return 0.8 * std::tanh(3.0 * p.b[k]);
    };
    const GridProcess masked = product(weight, brownian_process());
    const double lhs = mp_norm(masked, 2.0, controls, cfg);
    const double rhs = 0.8 * mp_norm(brownian_process(), 2.0, controls, cfg);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
}

TEST_CASE("interval additivity and linearity at machine precision") {
    const SamplePath path = test_path(128, 4);
    GridProcess eta;
    eta.id = "tanh";
    eta.rule = [](Index k, const SamplePath& p) { return std::tanh(p.b[k]); };
    const IntegralPath full = ito_integral(eta, path);
    const Index mid = 64;

    double tail = 0.0;
    const Eigen::ArrayXd nodes = sample_nodes(eta, path);
    for (Index k = mid; k < path.n_steps(); ++k) tail += nodes[k] * path.db[k];
    CHECK(full.final_value() - full.values[mid] == doctest::Approx(tail).epsilon(1e-12));

    GridProcess combo;
    combo.id = "combo";
    combo.rule = [](Index k, const SamplePath& p) {
        return 2.5 * std::tanh(p.b[k]) + p.qv[k];
    };
    GridProcess qv_proc;
    qv_proc.id = "qv";
    qv_proc.rule = [](Index k, const SamplePath& p) { return p.qv[k]; };
    const double lhs = ito_integral(combo, path).final_value();
    const double rhs = 2.5 * full.final_value() +
                       ito_integral(qv_proc, path).final_value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("dt integral of a nonnegative integrand is non-decreasing") {
    const SamplePath path = test_path(64, 6);
    const IntegralPath time = bochner_integral(abs_brownian_squared(), path);
    for (Index k = 0; k < path.n_steps(); ++k) {
        CHECK(time.values[k + 1] >= time.values[k]);
    }
}
