#include <doctest.h>

#include <cmath>

#include "gexp/pde.hpp"

using namespace gexp;

namespace {
const VolatilityBand kBand{1.0, 2.0};
}

TEST_CASE("CFL violations are configuration errors") {
    PdeGrid grid;
    grid.x_min = -5.0;
    grid.x_max = 5.0;
    grid.n_x = 101;
    grid.horizon = 1.0;
    grid.dt = 1.0;  // way beyond dx^2 / (2 sigma_hi^2)
    CHECK_THROWS_AS(grid.validate(kBand), std::invalid_argument);
    CHECK_THROWS_AS(solve_g_heat([](double x) { return x; }, kBand, grid),
                    std::invalid_argument);

    const PdeGrid ok = PdeGrid::around(0.0, kBand, 1.0, 6.0, 0.05, 0.5);
    CHECK_NOTHROW(ok.validate(kBand));
}

TEST_CASE("degenerate band reproduces Gaussian moments") {
    const VolatilityBand degenerate{1.0, 1.0};
    const PdeGrid grid = PdeGrid::around(0.0, degenerate, 1.0, 6.5, 0.05, 0.5);
    const ValueSurface u =
        solve_g_heat([](double x) { return x * x; }, degenerate, grid);
    CHECK(std::abs(u.value_at(0.0) - 1.0) <= 0.005);
}

TEST_CASE("convex payoffs select the maximal volatility") {
    const PdeGrid grid = PdeGrid::around(0.0, kBand, 1.0, 6.5, 0.04, 0.5);
    const ValueSurface square =
        solve_g_heat([](double x) { return x * x; }, kBand, grid);
    CHECK(std::abs(square.value_at(0.0) - 4.0) <= 0.02);

    const ValueSurface call =
        solve_g_heat([](double x) { return std::max(x, 0.0); }, kBand, grid);
    const double expected = 2.0 * std::sqrt(1.0 / (2.0 * M_PI));  // ~0.7979
    CHECK(std::abs(call.value_at(0.0) - expected) <= 0.01 * expected);
}

TEST_CASE("concave payoffs select the minimal volatility") {
    const PdeGrid grid = PdeGrid::around(0.0, kBand, 1.0, 6.5, 0.04, 0.5);
    const ValueSurface u =
        solve_g_heat([](double x) { return -x * x; }, kBand, grid);
    CHECK(std::abs(u.value_at(0.0) + 1.0) <= 0.01);
}

TEST_CASE("scheme is monotone, constant preserving and sublinear") {
    const PdeGrid grid = PdeGrid::around(0.0, kBand, 0.25, 5.0, 0.05, 0.5);

    auto lower = [](double x) { return std::sin(x); };
    auto upper = [](double x) { return std::sin(x) + 0.1; };
    const ValueSurface u_low = solve_g_heat(lower, kBand, grid);
    const ValueSurface u_up = solve_g_heat(upper, kBand, grid);
    CHECK((u_up.u_final >= u_low.u_final).all());

    const ValueSurface u_const = solve_g_heat([](double) { return -0.7; }, kBand, grid);
    CHECK((u_const.u_final == -0.7).all());

    auto second = [](double x) { return std::cos(2.0 * x); };
    auto sum = [&](double x) { return lower(x) + second(x); };
    const ValueSurface u_second = solve_g_heat(second, kBand, grid);
    const ValueSurface u_sum = solve_g_heat(sum, kBand, grid);
    CHECK((u_sum.u_final - (u_low.u_final + u_second.u_final)).maxCoeff() <= 1e-8);
}

TEST_CASE("cross validation against Monte Carlo") {
    EvaluationConfig cfg;
    cfg.grid = make_uniform_grid(1.0, 128);
    cfg.band = kBand;
    cfg.n_paths = 20000;
    cfg.seeds = SeedPolicy{4242u};
    const ControlSet controls = default_control_set(kBand);
    const PdeGrid grid = PdeGrid::around(0.0, kBand, 1.0, 6.5, 0.04, 0.5);

    const CrossValidation cv =
        cross_validate("x2", [](double x) { return x * x; }, 0.0, kBand, controls,
                       cfg, grid, 0.01);
    CHECK(cv.pass);
    CHECK(std::abs(cv.pde_value - 4.0) <= 0.04);
    CHECK(std::abs(cv.mc_value - 4.0) <= 3.0 * cv.mc_std_error + 0.02);

    const CrossValidation constant =
        cross_validate("const", [](double) { return 0.3; }, 0.0, kBand, controls,
                       cfg, grid, 0.01);
    CHECK(constant.pass);
    CHECK(constant.mc_value == 0.3);
    CHECK(std::abs(constant.pde_value - 0.3) <= 1e-12);
}
