#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gexp/band.hpp"
#include "gexp/expectation.hpp"

namespace gexp {

// Space-time mesh for the explicit G-heat solver. Stability of the
// monotone scheme requires dt <= dx^2 / (2 sigma_hi^2).
struct PdeGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    Eigen::Index n_x = 201;
    double dt = 1e-4;
    double horizon = 1.0;

    double dx() const {
        return (x_max - x_min) / static_cast<double>(n_x - 1);
    }
    void validate(const VolatilityBand& band) const;

    // Symmetric domain around the readout with the requested buffer (in
    // units of sigma_hi sqrt(T)), dt at `cfl_fraction` of the stability
    // limit, and a node exactly at the readout point.
    static PdeGrid around(double readout, const VolatilityBand& band, double horizon,
                          double buffer_sigmas = 6.0, double dx = 0.02,
                          double cfl_fraction = 0.5);
};

struct ValueSurface {
    PdeGrid grid;
    Eigen::ArrayXd x;        // spatial nodes
    Eigen::ArrayXd terminal; // payoff phi on the nodes (the time-0 data)
    Eigen::ArrayXd u_final;  // u(T, .) ~ x -> sup-expectation of phi(x + B_T)
    std::vector<std::pair<double, Eigen::ArrayXd>> snapshots;
    bool boundary_warning = false;  // payoff-extension boundary too close to readout

    double value_at(double x_query) const;  // linear interpolation
};

// Explicit monotone finite differences for d_t u = G(d_xx u) with u(0,.) =
// phi and payoff-extension boundary values. The scheme inherits
// monotonicity, constant preservation and sublinearity from G.
ValueSurface solve_g_heat(const std::function<double(double)>& payoff,
                          const VolatilityBand& band, const PdeGrid& grid,
                          int snapshot_count = 0);

struct CrossValidation {
    std::string payoff_id;
    double mc_value = 0.0;
    double mc_std_error = 0.0;
    double pde_value = 0.0;
    double abs_gap = 0.0;
    double tolerance = 0.0;  // max(1% |pde|, 3 se + scheme tolerance)
    bool pass = false;
};

// Monte Carlo vs PDE for the terminal payoff phi(x0 + B_T).
CrossValidation cross_validate(const std::string& payoff_id,
                               const std::function<double(double)>& payoff,
                               double x0, const VolatilityBand& band,
                               const ControlSet& controls,
                               const EvaluationConfig& mc_config,
                               const PdeGrid& pde_grid, double scheme_tolerance);

} // namespace gexp
