#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gexp/smooth.hpp"
#include "gexp/process.hpp"
#include "gexp/stopping.hpp"

namespace gexp {

// Coefficient process for one component: adapted rule of (node, path,
// current state), evaluated left-point.
using StateCoefficient =
    std::function<double(Index k, const SamplePath& path, const Eigen::VectorXd& x)>;

StateCoefficient constant_coefficient(double value);

// X^i = X0^i + int alpha^i dt + int eta^i d<B> + int beta^i dB, i < dimension.
struct Semimartingale {
    int dimension = 1;
    Eigen::VectorXd x0;
    std::vector<StateCoefficient> drift_dt;   // alpha^i
    std::vector<StateCoefficient> drift_dqv;  // eta^i
    std::vector<StateCoefficient> diffusion;  // beta^i
    // When set, |coefficient| <= bound is enforced at evaluation.
    std::optional<double> coefficient_bound;
    // Optional localization: increments stop accruing at this time, i.e.
    // evolve() yields X_{t ^ tau}.
    std::optional<StoppingTime> localization;

    static Semimartingale brownian();  // X = B
    void validate() const;
};

// Euler accumulation X[k+1] = X[k] + alpha dt + eta dqv + beta db per
// component; throws on non-finite coefficient values (with the grid index).
// Rows are grid nodes, columns components.
Eigen::MatrixXd evolve(const Semimartingale& x, const SamplePath& path);

// Same, but increments are dropped from the stop index on: the result is
// X_{t ^ tau} sampled on the grid.
Eigen::MatrixXd evolve_stopped(const Semimartingale& x, const SamplePath& path,
                               const StoppingTime& tau);

// phi(t, X_t) - phi(0, X_0).
double ito_lhs(const SmoothFunction& phi, const Eigen::MatrixXd& x_values,
               const TimeGrid& grid, double t);

// Running right-hand side of the Ito expansion: the dB, dt and d<B>
// integrals of the first/second-derivative terms, accumulated jointly.
Eigen::ArrayXd ito_rhs_series(const SmoothFunction& phi, const Semimartingale& x,
                              const Eigen::MatrixXd& x_values, const SamplePath& path);

double ito_rhs(const SmoothFunction& phi, const Semimartingale& x,
               const SamplePath& path, double t);

// residual r(t_k) = lhs(t_k) - rhs(t_k) along one path
Eigen::ArrayXd ito_residual_series(const SmoothFunction& phi, const Semimartingale& x,
                                   const SamplePath& path);

struct ItoLevelStats {
    Index n_steps = 0;
    double rms = 0.0;      // RMS of the final-time residual over the ensemble
    double max_abs = 0.0;  // worst |r| over ensemble and time
};

struct ItoResidualReport {
    std::string function_id;
    std::vector<ItoLevelStats> levels;
    std::vector<double> order_estimates;  // log2(rms_l / rms_{l+1})
};

// Residual study across nested refinements: the finest-level paths are
// subsampled by each factor (coarsest first); factors must divide the
// finest step count (configuration error otherwise).
ItoResidualReport verify(const SmoothFunction& phi, const Semimartingale& x,
                         const std::vector<SamplePath>& finest_paths,
                         std::span<const Index> subsample_factors);

// --- second-order remainder diagnostics -----------------------------------
//
// For X with coefficients frozen at a start node (constant on [s, T] per
// path), partition [s, T] into N cells and accumulate, per path,
//   taylor_k = [phi''(X_{k+1}) - phi''(X_k)] (dX_k)^2
// (the second-derivative-increment probe of the Taylor remainder; it
// vanishes identically for quadratic phi) together with the five
// second-order cross sums of phi''(X_k)/2 against dt*dt, dqv*dqv, dt*dqv,
// dt*dB and dqv*dB increment products.

struct FrozenCoefficientSpec {
    double start_time = 0.0;
    std::function<double(const SamplePath&, Index start_node)> x_start, alpha, eta, beta;
};

struct RemainderMoments {
    Index n_cells = 0;
    MeanSe taylor_sum_sq;    // (sum_k taylor_k)^2 over the ensemble
    double taylor_envelope = 0.0;  // N * sum_k mean taylor_k^2
    MeanSe cross_dtdt;       // (sum_k phi''/2 a^2 dt^2)^2, etc.
    MeanSe cross_dqvdqv;
    MeanSe cross_dtdqv;
    MeanSe cross_dtdb;
    MeanSe cross_dqvdb;
    // per-sample Cauchy-Schwarz majorant of cross_dqvdqv:
    // mean of qv_span * sum_k (phi''/2)^2 eta^4 dqv_k^3
    double cross_dqvdqv_bound = 0.0;
};

std::vector<RemainderMoments> remainder_diagnostics(
    const SmoothFunction& phi, const FrozenCoefficientSpec& spec,
    const std::vector<SamplePath>& paths, std::span<const Index> cell_counts);

} // namespace gexp
