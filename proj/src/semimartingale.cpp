#include "gexp/semimartingale.hpp"

#include <cmath>
#include <stdexcept>

namespace gexp {

StateCoefficient constant_coefficient(double value) {
    return [value](Index, const SamplePath&, const Eigen::VectorXd&) { return value; };
}

Semimartingale Semimartingale::brownian() {
    Semimartingale x;
    x.dimension = 1;
    x.x0 = Eigen::VectorXd::Zero(1);
    x.drift_dt = {constant_coefficient(0.0)};
    x.drift_dqv = {constant_coefficient(0.0)};
    x.diffusion = {constant_coefficient(1.0)};
    return x;
}

void Semimartingale::validate() const {
    if (dimension < 1 || dimension > 4) {
        throw std::invalid_argument("Semimartingale: dimension must be 1..4");
    }
    const auto n = static_cast<std::size_t>(dimension);
    if (x0.size() != dimension || drift_dt.size() != n || drift_dqv.size() != n ||
        diffusion.size() != n) {
        throw std::invalid_argument("Semimartingale: coefficient count mismatch");
    }
}

namespace {

Eigen::MatrixXd evolve_masked(const Semimartingale& x, const SamplePath& path,
                              Index active_steps) {
    x.validate();
    const Index nodes = path.n_nodes();
    const int dim = x.dimension;
    Eigen::MatrixXd values(nodes, dim);
    values.row(0) = x.x0.transpose();

    const auto& dt = path.grid->dt();
    Eigen::VectorXd state = x.x0;
    for (Index k = 0; k < path.n_steps(); ++k) {
        if (k < active_steps) {
            for (int i = 0; i < dim; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                const double a = x.drift_dt[ui](k, path, state);
                const double e = x.drift_dqv[ui](k, path, state);
                const double b = x.diffusion[ui](k, path, state);
                if (!std::isfinite(a) || !std::isfinite(e) || !std::isfinite(b)) {
                    throw std::runtime_error(
                        "evolve: non-finite coefficient at grid index " +
                        std::to_string(k));
                }
                if (x.coefficient_bound &&
                    (std::abs(a) > *x.coefficient_bound ||
                     std::abs(e) > *x.coefficient_bound ||
                     std::abs(b) > *x.coefficient_bound)) {
                    throw std::logic_error(
                        "evolve: coefficient exceeds its declared bound at index " +
                        std::to_string(k));
                }
                const double increment =
                    a * dt[k] + e * path.dqv[k] + b * path.db[k];
                state[i] = state[i] + increment;
            }
        }
        values.row(k + 1) = state.transpose();
    }
    return values;
}

} // namespace

Eigen::MatrixXd evolve(const Semimartingale& x, const SamplePath& path) {
    const Index active = x.localization ? x.localization->evaluate(path).index
                                        : path.n_steps();
    return evolve_masked(x, path, active);
}

Eigen::MatrixXd evolve_stopped(const Semimartingale& x, const SamplePath& path,
                               const StoppingTime& tau) {
    return evolve_masked(x, path, tau.evaluate(path).index);
}

double ito_lhs(const SmoothFunction& phi, const Eigen::MatrixXd& x_values,
               const TimeGrid& grid, double t) {
    const Index k = grid.index_of(t);
    const Eigen::VectorXd xt = x_values.row(k).transpose();
    const Eigen::VectorXd x0 = x_values.row(0).transpose();
    return phi.value(grid.point(k), xt) - phi.value(0.0, x0);
}

Eigen::ArrayXd ito_rhs_series(const SmoothFunction& phi, const Semimartingale& x,
                              const Eigen::MatrixXd& x_values, const SamplePath& path) {
    x.validate();
    if (phi.dimension() != x.dimension) {
        throw std::invalid_argument("ito_rhs: phi dimension mismatch");
    }
    const int dim = x.dimension;
    const auto& t = path.grid->points();
    const auto& dt = path.grid->dt();

    Eigen::ArrayXd rhs(path.n_nodes());
    rhs[0] = 0.0;
    Eigen::VectorXd state(dim);
    std::vector<double> alpha(static_cast<std::size_t>(dim));
    std::vector<double> eta(static_cast<std::size_t>(dim));
    std::vector<double> beta(static_cast<std::size_t>(dim));
    for (Index k = 0; k < path.n_steps(); ++k) {
        state = x_values.row(k).transpose();
        for (int i = 0; i < dim; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            alpha[ui] = x.drift_dt[ui](k, path, state);
            eta[ui] = x.drift_dqv[ui](k, path, state);
            beta[ui] = x.diffusion[ui](k, path, state);
        }
        double dt_weight = phi.time_derivative(t[k], state);
        double dqv_weight = 0.0;
        double db_weight = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double grad = phi.partial(i, t[k], state);
            dt_weight += grad * alpha[static_cast<std::size_t>(i)];
            dqv_weight += grad * eta[static_cast<std::size_t>(i)];
            db_weight += grad * beta[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                dqv_weight += 0.5 * phi.second_partial(i, j, t[k], state) *
                              beta[static_cast<std::size_t>(i)] *
                              beta[static_cast<std::size_t>(j)];
            }
        }
        // channel order (dt, dqv, db) matches the evolve() increment, so the
        // two accumulations coincide termwise for the identity map.
        const double increment =
            dt_weight * dt[k] + dqv_weight * path.dqv[k] + db_weight * path.db[k];
        rhs[k + 1] = rhs[k] + increment;
    }
    return rhs;
}

double ito_rhs(const SmoothFunction& phi, const Semimartingale& x,
               const SamplePath& path, double t) {
    const Eigen::MatrixXd values = evolve(x, path);
    return ito_rhs_series(phi, x, values, path)[path.grid->index_of(t)];
}

Eigen::ArrayXd ito_residual_series(const SmoothFunction& phi, const Semimartingale& x,
                                   const SamplePath& path) {
    const Eigen::MatrixXd values = evolve(x, path);
    const Eigen::ArrayXd rhs = ito_rhs_series(phi, x, values, path);
    const auto& t = path.grid->points();
    const Eigen::VectorXd x0 = values.row(0).transpose();
    const double base = phi.value(0.0, x0);
    Eigen::ArrayXd residual(path.n_nodes());
    for (Index k = 0; k < path.n_nodes(); ++k) {
        const Eigen::VectorXd xk = values.row(k).transpose();
        residual[k] = phi.value(t[k], xk) - base - rhs[k];
    }
    return residual;
}

ItoResidualReport verify(const SmoothFunction& phi, const Semimartingale& x,
                         const std::vector<SamplePath>& finest_paths,
                         std::span<const Index> subsample_factors) {
    if (finest_paths.empty()) throw std::invalid_argument("verify: empty ensemble");
    if (subsample_factors.size() < 2) {
        throw std::invalid_argument("verify: need at least two refinement levels");
    }
    const Index finest_steps = finest_paths.front().n_steps();
    for (const Index f : subsample_factors) {
        if (f < 1 || finest_steps % f != 0) {
            throw std::invalid_argument("verify: refinement levels must nest");
        }
    }

    ItoResidualReport report;
    report.function_id = phi.id();
    for (const Index factor : subsample_factors) {
        ItoLevelStats stats;
        stats.n_steps = finest_steps / factor;
        double sum_sq = 0.0;
        for (const SamplePath& fine : finest_paths) {
            const SamplePath path = factor == 1 ? fine : fine.subsample(factor);
            const Eigen::ArrayXd residual = ito_residual_series(phi, x, path);
            const double final_r = residual[residual.size() - 1];
            sum_sq += final_r * final_r;
            stats.max_abs = std::max(stats.max_abs, residual.abs().maxCoeff());
        }
        stats.rms = std::sqrt(sum_sq / static_cast<double>(finest_paths.size()));
        report.levels.push_back(stats);
    }
    for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
        report.order_estimates.push_back(
            std::log2(report.levels[l].rms / report.levels[l + 1].rms));
    }
    return report;
}

std::vector<RemainderMoments> remainder_diagnostics(
    const SmoothFunction& phi, const FrozenCoefficientSpec& spec,
    const std::vector<SamplePath>& paths, std::span<const Index> cell_counts) {
    if (phi.dimension() != 1) {
        throw std::invalid_argument("remainder_diagnostics: one-dimensional phi");
    }
    if (paths.empty()) throw std::invalid_argument("remainder_diagnostics: empty ensemble");

    const auto& grid = *paths.front().grid;
    const Index start_node = grid.index_of(spec.start_time);
    const Index span_steps = grid.n_steps() - start_node;

    std::vector<RemainderMoments> table;
    const auto n_paths = paths.size();
    Eigen::VectorXd xk(1), xk1(1);
    std::vector<double> v_taylor(n_paths), v_dtdt(n_paths), v_dqvdqv(n_paths),
        v_dtdqv(n_paths), v_dtdb(n_paths), v_dqvdb(n_paths);
    for (const Index n_cells : cell_counts) {
        if (n_cells < 1 || span_steps % n_cells != 0) {
            throw std::invalid_argument(
                "remainder_diagnostics: cell count must divide the step span");
        }
        const Index stride = span_steps / n_cells;
        RemainderMoments m;
        m.n_cells = n_cells;
        Eigen::ArrayXd taylor_cell_sq = Eigen::ArrayXd::Zero(n_cells);
        double bound_acc = 0.0;

        for (std::size_t pi = 0; pi < n_paths; ++pi) {
            const SamplePath& path = paths[pi];
            const double xs = spec.x_start(path, start_node);
            const double a = spec.alpha(path, start_node);
            const double e = spec.eta(path, start_node);
            const double bcoef = spec.beta(path, start_node);

            double taylor_sum = 0.0;
            double s_dtdt = 0.0, s_dqvdqv = 0.0, s_dtdqv = 0.0;
            double s_dtdb = 0.0, s_dqvdb = 0.0, bound_dqvdqv = 0.0;
            for (Index c = 0; c < n_cells; ++c) {
                const Index k0 = start_node + c * stride;
                const Index k1 = k0 + stride;
                const double d_t = grid.point(k1) - grid.point(k0);
                const double d_qv = path.qv[k1] - path.qv[k0];
                const double d_b = path.b[k1] - path.b[k0];
                const double x_at_k0 = xs + a * (grid.point(k0) - spec.start_time) +
                                       e * (path.qv[k0] - path.qv[start_node]) +
                                       bcoef * (path.b[k0] - path.b[start_node]);
                const double dx = a * d_t + e * d_qv + bcoef * d_b;

                xk[0] = x_at_k0;
                xk1[0] = x_at_k0 + dx;
                const double ddp0 = phi.second_partial(0, 0, 0.0, xk);
                const double ddp1 = phi.second_partial(0, 0, 0.0, xk1);
                const double taylor = (ddp1 - ddp0) * dx * dx;
                taylor_sum += taylor;
                taylor_cell_sq[c] += taylor * taylor;

                const double half_dd = 0.5 * ddp0;
                s_dtdt += half_dd * a * a * d_t * d_t;
                s_dqvdqv += half_dd * e * e * d_qv * d_qv;
                s_dtdqv += ddp0 * a * e * d_t * d_qv;
                s_dtdb += ddp0 * a * bcoef * d_t * d_b;
                s_dqvdb += ddp0 * e * bcoef * d_qv * d_b;
                bound_dqvdqv += half_dd * half_dd * e * e * e * e * d_qv * d_qv * d_qv;
            }
            const double qv_span = path.qv[grid.n_steps()] - path.qv[start_node];
            v_taylor[pi] = taylor_sum * taylor_sum;
            v_dtdt[pi] = s_dtdt * s_dtdt;
            v_dqvdqv[pi] = s_dqvdqv * s_dqvdqv;
            v_dtdqv[pi] = s_dtdqv * s_dtdqv;
            v_dtdb[pi] = s_dtdb * s_dtdb;
            v_dqvdb[pi] = s_dqvdb * s_dqvdb;
            bound_acc += qv_span * bound_dqvdqv;
        }
        m.taylor_sum_sq = mean_se(v_taylor);
        m.cross_dtdt = mean_se(v_dtdt);
        m.cross_dqvdqv = mean_se(v_dqvdqv);
        m.cross_dtdqv = mean_se(v_dtdqv);
        m.cross_dtdb = mean_se(v_dtdb);
        m.cross_dqvdb = mean_se(v_dqvdb);
        m.cross_dqvdqv_bound = bound_acc / static_cast<double>(n_paths);
        m.taylor_envelope = static_cast<double>(n_cells) *
                            (taylor_cell_sq / static_cast<double>(n_paths)).sum();
        table.push_back(m);
    }
    return table;
}

} // namespace gexp
