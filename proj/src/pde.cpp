#include "gexp/pde.hpp"

#include <cmath>
#include <stdexcept>

namespace gexp {

void PdeGrid::validate(const VolatilityBand& band) const {
    if (!(x_max > x_min) || n_x < 3) {
        throw std::invalid_argument("PdeGrid: need x_min < x_max and n_x >= 3");
    }
    if (!(horizon > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("PdeGrid: horizon and dt must be > 0");
    }
    const double limit = dx() * dx() / (2.0 * band.hi2());
    if (dt > limit * (1.0 + 1e-12)) {
        throw std::invalid_argument("PdeGrid: CFL violation, need dt <= dx^2 / (2 sigma_hi^2)");
    }
}

PdeGrid PdeGrid::around(double readout, const VolatilityBand& band, double horizon,
                        double buffer_sigmas, double dx, double cfl_fraction) {
    const double buffer = buffer_sigmas * band.sigma_hi * std::sqrt(horizon);
    PdeGrid g;
    const auto half = static_cast<Eigen::Index>(std::ceil(buffer / dx));
    g.n_x = 2 * half + 1;
    g.x_min = readout - static_cast<double>(half) * dx;
    g.x_max = readout + static_cast<double>(half) * dx;
    g.horizon = horizon;
    const double limit = g.dx() * g.dx() / (2.0 * band.hi2());
    const auto n_t = static_cast<Eigen::Index>(
        std::ceil(horizon / (cfl_fraction * limit)));
    g.dt = horizon / static_cast<double>(n_t);
    return g;
}

double ValueSurface::value_at(double x_query) const {
    if (x_query <= x[0]) return u_final[0];
    const Eigen::Index last = x.size() - 1;
    if (x_query >= x[last]) return u_final[last];
    const double pos = (x_query - grid.x_min) / grid.dx();
    const auto k = static_cast<Eigen::Index>(pos);
    const double w = pos - static_cast<double>(k);
    if (w == 0.0) return u_final[k];
    return u_final[k] * (1.0 - w) + u_final[k + 1] * w;
}

ValueSurface solve_g_heat(const std::function<double(double)>& payoff,
                          const VolatilityBand& band, const PdeGrid& grid,
                          int snapshot_count) {
    grid.validate(band);
    const Eigen::Index n = grid.n_x;
    const double dx = grid.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const auto n_t = static_cast<Eigen::Index>(
        std::llround(grid.horizon / grid.dt));
    if (std::abs(static_cast<double>(n_t) * grid.dt - grid.horizon) >
        1e-9 * grid.horizon) {
        throw std::invalid_argument("PdeGrid: dt must divide the horizon");
    }

    ValueSurface surface;
    surface.grid = grid;
    surface.x = Eigen::ArrayXd::LinSpaced(n, grid.x_min, grid.x_max);
    surface.terminal.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) surface.terminal[i] = payoff(surface.x[i]);
    surface.u_final = surface.terminal;

    // vectorized G(a) = (hi2 a^+ - lo2 a^-) / 2 applied to second differences
    const double hi2 = band.hi2(), lo2 = band.lo2();
    Eigen::ArrayXd u = surface.terminal;
    Eigen::ArrayXd next = u;
    const Eigen::Index snap_every =
        snapshot_count > 0 ? std::max<Eigen::Index>(1, n_t / snapshot_count) : 0;

    for (Eigen::Index step = 0; step < n_t; ++step) {
        // interior update u += dt * G(second difference); boundaries keep
        // the payoff-extension values
        auto um = u.segment(0, n - 2);
        auto uc = u.segment(1, n - 2);
        auto up = u.segment(2, n - 2);
        Eigen::ArrayXd d2 = (up - 2.0 * uc + um) * inv_dx2;
        next.segment(1, n - 2) =
            uc + grid.dt * 0.5 * (hi2 * d2.max(0.0) - lo2 * (-d2).max(0.0));
        u.swap(next);
        if (snap_every > 0 && (step + 1) % snap_every == 0) {
            surface.snapshots.emplace_back(static_cast<double>(step + 1) * grid.dt, u);
        }
    }
    surface.u_final = u;
    return surface;
}

CrossValidation cross_validate(const std::string& payoff_id,
                               const std::function<double(double)>& payoff,
                               double x0, const VolatilityBand& band,
                               const ControlSet& controls,
                               const EvaluationConfig& mc_config,
                               const PdeGrid& pde_grid, double scheme_tolerance) {
    CrossValidation cv;
    cv.payoff_id = payoff_id;

    const double horizon = pde_grid.horizon;
    PayoffFunctional terminal{payoff_id, horizon, [payoff, x0](const SamplePath& path) {
                                  return payoff(x0 + path.b[path.n_steps()]);
                              }};
    const ExpectationEstimate mc = sup_expectation(terminal, controls, mc_config);
    cv.mc_value = mc.value;
    cv.mc_std_error = mc.std_error;

    ValueSurface surface = solve_g_heat(payoff, band, pde_grid);
    // flag when the payoff-extension boundary sits closer to the readout
    // than the 6 sigma sqrt(T) diffusion range
    const double buffer = 6.0 * band.sigma_hi * std::sqrt(horizon);
    surface.boundary_warning = (x0 - pde_grid.x_min < buffer) ||
                               (pde_grid.x_max - x0 < buffer);
    cv.pde_value = surface.value_at(x0);

    cv.abs_gap = std::abs(cv.mc_value - cv.pde_value);
    cv.tolerance = std::max(0.01 * std::abs(cv.pde_value),
                            3.0 * cv.mc_std_error + scheme_tolerance);
    cv.pass = cv.abs_gap <= cv.tolerance;
    return cv;
}

} // namespace gexp
