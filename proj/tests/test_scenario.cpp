#include <doctest.h>

#include <cmath>
#include <vector>

#include "gexp/path.hpp"
#include "gexp/stats.hpp"

using namespace gexp;

namespace {
const VolatilityBand kBand{1.0, 2.0};
const SeedPolicy kSeeds{2024u};
}

TEST_CASE("path starts at zero and accrues banded quadratic variation") {
    const GridPtr grid = make_uniform_grid(1.0, 512);
    const VolatilityControl control = VolatilityControl::state_feedback(
        "sign", [](double, double b) { return b > 0.0 ? 2.0 : 1.0; });
    for (std::uint64_t i = 0; i < 32; ++i) {
        const SamplePath path =
            generate_path(control, grid, kBand, kSeeds.stream(0, i), i);
        CHECK(path.b[0] == 0.0);
        CHECK(path.qv[0] == 0.0);
        for (Index k = 0; k < path.n_steps(); ++k) {
            const double dt = grid->dt()[k];
            // exact band bound on every step
            CHECK(path.dqv[k] >= kBand.lo2() * dt);
            CHECK(path.dqv[k] <= kBand.hi2() * dt);
            CHECK(path.qv[k + 1] >= path.qv[k]);
        }
    }
}

TEST_CASE("constant max-vol control accrues qv = sigma^2 T exactly") {
    // dyadic sigma^2 dt keeps the accumulation exact
    const GridPtr grid = make_uniform_grid(1.0, 512);
    const SamplePath path = generate_path(VolatilityControl::constant(2.0), grid,
                                          kBand, kSeeds.stream(0, 9), 9);
    CHECK(path.qv[512] == 4.0);
}

TEST_CASE("degenerate band reproduces classical Brownian variance") {
    const VolatilityBand degenerate{1.5, 1.5};
    const GridPtr grid = make_uniform_grid(1.0, 64);
    const std::int64_t n = 20000;
    const std::vector<SamplePath> paths = generate_ensemble(
        VolatilityControl::constant(1.5), grid, degenerate, n, kSeeds, 0, 1);
    std::vector<double> terminal(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < terminal.size(); ++i) {
        terminal[i] = paths[i].b[64];
    }
    const MeanSe ms = mean_se(terminal);
    CHECK(std::abs(ms.mean) <= 3.0 * ms.se);

    double var = 0.0;
    for (double v : terminal) var += v * v;
    var /= static_cast<double>(n);
    const double expected = 1.5 * 1.5;
    const double se_var = expected * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(var - expected) <= 3.0 * se_var);
}

TEST_CASE("band violations are rejected") {
    const GridPtr grid = make_uniform_grid(1.0, 16);
    const VolatilityControl bad = VolatilityControl::state_feedback(
        "bad", [](double, double) { return 3.0; });
    CHECK_THROWS_AS(generate_path(bad, grid, kBand, kSeeds.stream(0, 0), 0),
                    std::domain_error);
}

TEST_CASE("ensembles are bit-identical across parallelism and repeats") {
    const GridPtr grid = make_uniform_grid(1.0, 128);
    const VolatilityControl control = VolatilityControl::state_feedback(
        "sign", [](double, double b) { return b > 0.0 ? 2.0 : 1.0; });
    const auto serial = generate_ensemble(control, grid, kBand, 64, kSeeds, 1, 1);
    const auto threaded = generate_ensemble(control, grid, kBand, 64, kSeeds, 1, 4);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK((serial[i].b == threaded[i].b).all());
        CHECK((serial[i].qv == threaded[i].qv).all());
    }
    const auto repeat = generate_ensemble(control, grid, kBand, 64, kSeeds, 1, 1);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK((serial[i].b == repeat[i].b).all());
    }
}

TEST_CASE("common random numbers share draws across controls") {
    const GridPtr grid = make_uniform_grid(1.0, 64);
    const NormalStream stream = kSeeds.stream(SeedPolicy::shared_slot, 5);
    const SamplePath lo = generate_path(VolatilityControl::constant(1.0), grid,
                                        kBand, stream, 5);
    const SamplePath hi = generate_path(VolatilityControl::constant(2.0), grid,
                                        kBand, stream, 5);
    for (Index k = 0; k < 64; ++k) {
        CHECK(hi.db[k] == 2.0 * lo.db[k]);  // same normals, scaled volatility
    }
}

TEST_CASE("normalized steps have Gaussian kurtosis") {
    const GridPtr grid = make_uniform_grid(1.0, 256);
    const std::vector<SamplePath> paths = generate_ensemble(
        VolatilityControl::constant(2.0), grid, kBand, 256, kSeeds, 0, 1);
    std::vector<double> steps;
    steps.reserve(256 * 256);
    for (const auto& path : paths) {
        for (Index k = 0; k < path.n_steps(); ++k) {
            steps.push_back(path.db[k] / std::sqrt(grid->dt()[k]));
        }
    }
    const double k = kurtosis(steps);
    CHECK(std::abs(k - 3.0) <=
          3.0 * std::sqrt(24.0 / static_cast<double>(steps.size())));
}

TEST_CASE("singleton ensembles match a direct generate_path call") {
    const GridPtr grid = make_uniform_grid(1.0, 32);
    const VolatilityControl control = VolatilityControl::constant(1.25);
    const auto ensemble = generate_ensemble(control, grid, kBand, 1, kSeeds, 2, 1);
    REQUIRE(ensemble.size() == 1);
    const SamplePath direct = generate_path(control, grid, kBand,
                                            kSeeds.stream(2, 0), 0);
    CHECK((ensemble[0].b == direct.b).all());
    CHECK((ensemble[0].qv == direct.qv).all());
    CHECK_THROWS_AS(generate_ensemble(control, grid, kBand, 0, kSeeds, 2, 1),
                    std::invalid_argument);
}

TEST_CASE("piecewise-deterministic controls switch at their breakpoints") {
    const std::vector<double> times = {0.0, 0.5};
    const std::vector<double> values = {1.0, 2.0};
    const VolatilityControl control = VolatilityControl::piecewise(times, values);
    CHECK(control.sigma(0.0, 0.0) == 1.0);
    CHECK(control.sigma(0.49, 3.0) == 1.0);
    CHECK(control.sigma(0.5, 0.0) == 2.0);
    CHECK(control.sigma(0.9, -1.0) == 2.0);

    const GridPtr grid = make_uniform_grid(1.0, 64);
    const SamplePath path =
        generate_path(control, grid, kBand, kSeeds.stream(0, 12), 12);
    // qv slope jumps from 1 to 4 at the breakpoint; dyadic steps keep the
    // halves exact
    CHECK(path.qv[32] == 0.5);
    CHECK(path.qv[64] == 0.5 + 4.0 * 0.5);

    CHECK_THROWS_AS(VolatilityControl::piecewise({0.5}, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(VolatilityControl::piecewise({0.0, 0.2}, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("subsampling keeps node data and recomputes increments") {
    const GridPtr grid = make_uniform_grid(1.0, 64);
    const SamplePath fine = generate_path(VolatilityControl::constant(1.5), grid,
                                          kBand, kSeeds.stream(0, 3), 3);
    const SamplePath coarse = fine.subsample(4);
    CHECK(coarse.n_steps() == 16);
    for (Index k = 0; k <= 16; ++k) {
        CHECK(coarse.b[k] == fine.b[4 * k]);
        CHECK(coarse.qv[k] == fine.qv[4 * k]);
    }
}
