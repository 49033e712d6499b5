#include <chrono>
#include <cmath>

#include <json.hpp>

#include "gexp/semimartingale.hpp"
#include "gexp/suites.hpp"
#include "generators.hpp"

namespace gexp::suites {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::vector<SamplePath> mixed_ensemble(const EngineSetup& setup, const GridPtr& grid,
                                       std::int64_t n_paths, std::uint32_t salt) {
    const ControlSet controls = setup.controls();
    const SeedPolicy seeds{setup.master_seed ^ salt};
    std::vector<SamplePath> paths;
    paths.reserve(static_cast<std::size_t>(n_paths));
    for (std::int64_t i = 0; i < n_paths; ++i) {
        const auto c = static_cast<std::size_t>(i) % controls.size();
        paths.push_back(generate_path(controls[c], grid, setup.band,
                                      seeds.stream(static_cast<std::uint32_t>(c),
                                                   static_cast<std::uint64_t>(i)),
                                      static_cast<std::uint64_t>(i)));
    }
    return paths;
}

std::vector<SmoothFunction> smooth_test_set() {
    std::vector<SmoothFunction> set;
    set.push_back(scalar_function(
        "x2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
        [](double) { return 2.0; }));
    set.push_back(scalar_function(
        "x3", [](double x) { return x * x * x; },
        [](double x) { return 3.0 * x * x; }, [](double x) { return 6.0 * x; }));
    set.push_back(scalar_function(
        "sin", [](double x) { return std::sin(x); },
        [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }));
    set.push_back(scalar_function(
        "exp_neg_x2", [](double x) { return std::exp(-x * x); },
        [](double x) { return -2.0 * x * std::exp(-x * x); },
        [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); }));
    return set;
}

} // namespace

SuiteReport run_ito(const EngineSetup& setup, const ItoParams& params) {
    Timer timer;
    SuiteReport report;
    report.suite = "ito";

    const Semimartingale brownian = Semimartingale::brownian();
    std::vector<Index> factors;
    for (int l = params.n_levels - 1; l >= 0; --l) factors.push_back(Index{1} << l);

    // ---- residual convergence for the smooth test set ----
    {
        const GridPtr fine = setup.grid(params.fine_steps);
        const std::vector<SamplePath> paths =
            mixed_ensemble(setup, fine, params.n_paths, 0x69746f00u);

        bool decreasing = true, orders_ok = true, audits_ok = true;
        double worst_order_gap = 0.0;
        nlohmann::ordered_json residual_reports = nlohmann::ordered_json::array();
        for (const SmoothFunction& phi : smooth_test_set()) {
            const auto audit =
                phi.audit_derivatives(setup.horizon, 3.0 * setup.band.sigma_hi, 100,
                                      setup.master_seed ^ 0x61756454u);
            audits_ok = audits_ok && audit.pass;

            const ItoResidualReport result = verify(phi, brownian, paths, factors);
            PlotTable table;
            table.name = "residual_" + phi.id();
            table.headers = {"n_steps", "rms", "max_abs"};
            nlohmann::ordered_json jr;
            jr["function"] = result.function_id;
            jr["levels"] = nlohmann::ordered_json::array();
            for (const auto& level : result.levels) {
                table.rows.push_back({static_cast<double>(level.n_steps), level.rms,
                                      level.max_abs});
                nlohmann::ordered_json jl;
                jl["n_steps"] = level.n_steps;
                jl["rms"] = level.rms;
                jl["max_abs"] = level.max_abs;
                jr["levels"].push_back(std::move(jl));
            }
            jr["order_estimates"] = result.order_estimates;
            residual_reports.push_back(std::move(jr));
            report.tables.push_back(std::move(table));

            for (std::size_t l = 0; l + 1 < result.levels.size(); ++l) {
                decreasing = decreasing &&
                             result.levels[l + 1].rms < result.levels[l].rms;
            }
            const double span = static_cast<double>(result.levels.size() - 1);
            const double mean_order =
                std::log2(result.levels.front().rms / result.levels.back().rms) / span;
            worst_order_gap = std::max(worst_order_gap, std::abs(mean_order - 0.5));
            orders_ok = orders_ok && mean_order >= 0.35 && mean_order <= 0.65;
        }
        report.json_artifacts.emplace_back("residual_report",
                                           residual_reports.dump(2) + "\n");
        report.add({"ito.derivative-audit",
                    "user-supplied derivatives match central differences to 1e-4",
                    "ito.residual-order",
                    audits_ok ? CaseStatus::pass : CaseStatus::fail,
                    audits_ok ? 0.0 : 1.0, 0.0, 1e-4, true});
        report.add({"ito.rms-decreasing",
                    "residual RMS strictly decreasing across refinement levels",
                    "ito.residual-order",
                    decreasing ? CaseStatus::pass : CaseStatus::fail,
                    decreasing ? 0.0 : 1.0, 0.0, 0.0, false});
        report.add({"ito.order-near-half",
                    "mean convergence order within [0.35, 0.65] for the smooth set",
                    "ito.residual-order",
                    orders_ok ? CaseStatus::pass : CaseStatus::fail, worst_order_gap,
                    0.0, 0.15, false});
    }

    // ---- exactness for constant/identity/affine and the quadratic identity ----
    {
        const GridPtr grid = setup.grid();
        const std::vector<SamplePath> paths = mixed_ensemble(setup, grid, 64, 0x69746f01u);

        const SmoothFunction constant = scalar_function(
            "const", [](double) { return 0.75; }, [](double) { return 0.0; },
            [](double) { return 0.0; });
        const SmoothFunction identity = scalar_function(
            "x", [](double x) { return x; }, [](double) { return 1.0; },
            [](double) { return 0.0; });
        const SmoothFunction affine = scalar_function(
            "2x+3", [](double x) { return 2.0 * x + 3.0; }, [](double) { return 2.0; },
            [](double) { return 0.0; });
        const SmoothFunction square = scalar_function(
            "x^2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
            [](double) { return 2.0; });

        double worst_const = 0.0, worst_identity = 0.0, worst_affine = 0.0;
        double worst_quadratic = 0.0;
        for (const SamplePath& path : paths) {
            worst_const = std::max(
                worst_const,
                ito_residual_series(constant, brownian, path).abs().maxCoeff());
            worst_identity = std::max(
                worst_identity,
                ito_residual_series(identity, brownian, path).abs().maxCoeff());
            worst_affine = std::max(
                worst_affine,
                ito_residual_series(affine, brownian, path).abs().maxCoeff());

            // phi = x^2 on B: residual(t) + <B>(t) telescopes to sum (dB)^2
            const Eigen::ArrayXd residual = ito_residual_series(square, brownian, path);
            double db2 = 0.0;
            for (Index k = 0; k < path.n_steps(); ++k) {
                db2 += path.db[k] * path.db[k];
                const double gap =
                    std::abs(residual[k + 1] + path.qv[k + 1] - db2);
                worst_quadratic = std::max(worst_quadratic, gap);
            }
        }
        report.add({"ito.constant-exact", "constant phi leaves residual exactly zero",
                    "ito.affine-exact",
                    worst_const == 0.0 ? CaseStatus::pass : CaseStatus::fail,
                    worst_const, 0.0, 0.0, true});
        report.add({"ito.identity-exact",
                    "phi(x) = x on X = B leaves residual exactly zero",
                    "ito.affine-exact",
                    worst_identity == 0.0 ? CaseStatus::pass : CaseStatus::fail,
                    worst_identity, 0.0, 0.0, true});
        report.add({"ito.affine-machine-zero",
                    "affine phi residual at machine precision",
                    "ito.affine-exact",
                    worst_affine <= 1e-11 ? CaseStatus::pass : CaseStatus::fail,
                    worst_affine, 0.0, 1e-11, true});
        report.add({"ito.quadratic-identity",
                    "residual + <B> equals the running sum of squared steps",
                    "ito.quadratic-identity",
                    worst_quadratic <= 1e-11 ? CaseStatus::pass : CaseStatus::fail,
                    worst_quadratic, 0.0, 1e-11, true});
    }

    // ---- localized formula vs clamped function on in-range paths ----
    {
        const GridPtr grid = setup.grid();
        const std::vector<SamplePath> paths =
            mixed_ensemble(setup, grid, 128, 0x69746f02u);
        const double level = 3.0;
        const SmoothFunction cubic = scalar_function(
            "x^3", [](double x) { return x * x * x; },
            [](double x) { return 3.0 * x * x; }, [](double x) { return 6.0 * x; });
        const SmoothFunction clamped = clamp_outside(cubic, level);

        // gamma_t = |X_t - X_0| + int (|beta|^2 + |alpha| + |eta|) du
        //         = |B_t| + t for X = B
        GridProcess gamma;
        gamma.id = "gamma";
        gamma.rule = [](Index k, const SamplePath& p) {
            return std::abs(p.b[k]) + p.grid->point(k);
        };
        gamma.bulk = [](const SamplePath& p) {
            return (p.b.abs() + p.grid->points()).eval();
        };
        const StoppingTime tau = StoppingTime::min_of(
            StoppingTime::hitting(gamma, level, Direction::up),
            StoppingTime::hitting(Monitored::abs_brownian, 4.0 * setup.band.sigma_hi,
                                  Direction::up));

        std::int64_t in_range = 0, violations = 0;
        double worst = 0.0;
        for (const SamplePath& path : paths) {
            const GridStop stop = tau.evaluate(path);
            if (stop.index != grid->n_steps()) continue;  // stopped early: skip
            ++in_range;
            if (path.b.abs().maxCoeff() > 2.0 * level) {
                ++violations;  // gamma <= level must confine the path
                continue;
            }
            // stopped coefficients: identical to the plain ones on {tau = T}
            Semimartingale stopped = Semimartingale::brownian();
            const Index kappa = stop.index;
            stopped.diffusion[0] = [kappa](Index k, const SamplePath&,
                                           const Eigen::VectorXd&) {
                return k < kappa ? 1.0 : 0.0;
            };
            const Eigen::ArrayXd lhs = ito_residual_series(cubic, stopped, path);
            const Eigen::ArrayXd rhs = ito_residual_series(clamped, brownian, path);
            worst = std::max(worst, (lhs - rhs).abs().maxCoeff());
        }
        report.add({"ito.localized-consistency",
                    "stopped evolution with plain phi matches clamped phi exactly on " +
                        std::to_string(in_range) + " in-range paths",
                    "ito.localized-consistency",
                    worst == 0.0 && violations == 0 && in_range > 0 ? CaseStatus::pass
                                                                    : CaseStatus::fail,
                    worst, 0.0, 0.0, true});
    }

    // ---- second-order remainder diagnostics ----
    {
        const GridPtr grid = setup.grid(params.remainder_steps);
        const std::vector<SamplePath> paths =
            mixed_ensemble(setup, grid, params.remainder_paths, 0x69746f03u);
        FrozenCoefficientSpec spec;
        spec.start_time = setup.horizon / 2.0;
        spec.x_start = [](const SamplePath& p, Index s) { return p.b[s]; };
        spec.alpha = [](const SamplePath& p, Index s) { return std::tanh(p.b[s]); };
        spec.eta = [](const SamplePath& p, Index s) {
            return 0.5 + 0.3 * std::tanh(2.0 * p.b[s]);
        };
        spec.beta = [](const SamplePath& p, Index s) {
            return 1.0 + 0.5 * std::tanh(p.b[s]);
        };

        const SmoothFunction quadratic = scalar_function(
            "quadratic", [](double x) { return 1.0 + 2.0 * x + 3.0 * x * x; },
            [](double x) { return 2.0 + 6.0 * x; }, [](double) { return 6.0; });
        const SmoothFunction sine = scalar_function(
            "sin", [](double x) { return std::sin(x); },
            [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });

        const std::vector<RemainderMoments> quad_table = remainder_diagnostics(
            quadratic, spec, paths, params.remainder_cells);
        double worst_quad = 0.0;
        for (const auto& row : quad_table) {
            worst_quad = std::max(worst_quad, row.taylor_sum_sq.mean);
        }
        report.add({"ito.remainder-quadratic-zero",
                    "quadratic phi: second-derivative increments vanish exactly",
                    "remainder.quadratic-zero",
                    worst_quad == 0.0 ? CaseStatus::pass : CaseStatus::fail, worst_quad,
                    0.0, 0.0, true});

        const std::vector<RemainderMoments> table =
            remainder_diagnostics(sine, spec, paths, params.remainder_cells);
        PlotTable moments_table;
        moments_table.name = "remainder_moments";
        moments_table.headers = {"n_cells",  "taylor_sq", "envelope", "dtdt",
                                 "dqvdqv",   "dtdqv",     "dtdb",     "dqvdb"};
        bool envelope_ok = true;
        for (const auto& row : table) {
            moments_table.rows.push_back(
                {static_cast<double>(row.n_cells), row.taylor_sum_sq.mean,
                 row.taylor_envelope, row.cross_dtdt.mean, row.cross_dqvdqv.mean,
                 row.cross_dtdqv.mean, row.cross_dtdb.mean, row.cross_dqvdb.mean});
            envelope_ok = envelope_ok &&
                          row.taylor_sum_sq.mean <=
                              row.taylor_envelope * (1.0 + 1e-12) + 1e-300;
        }
        report.tables.push_back(std::move(moments_table));

        auto monotone_within_3se = [&table](auto pick) {
            double worst_excess = -1e300;
            for (std::size_t l = 0; l + 1 < table.size(); ++l) {
                const MeanSe a = pick(table[l]);
                const MeanSe b = pick(table[l + 1]);
                const double slack = 3.0 * std::sqrt(a.se * a.se + b.se * b.se);
                worst_excess = std::max(worst_excess, b.mean - a.mean - slack);
            }
            return worst_excess;
        };
        const double taylor_excess =
            monotone_within_3se([](const RemainderMoments& m) { return m.taylor_sum_sq; });
        report.add({"ito.remainder-taylor-decay",
                    "E|sum taylor_k|^2 decreasing in the refinement (3 se slack)",
                    "remainder.taylor-decay",
                    taylor_excess <= 0.0 ? CaseStatus::pass : CaseStatus::fail,
                    taylor_excess, 0.0, 0.0, false});
        report.add({"ito.remainder-envelope",
                    "E|sum taylor_k|^2 within the envelope N sum_k E|taylor_k|^2",
                    "remainder.taylor-decay",
                    envelope_ok ? CaseStatus::pass : CaseStatus::fail,
                    envelope_ok ? 0.0 : 1.0, 0.0, 0.0, true});

        double worst_cross = -1e300;
        for (auto pick : {+[](const RemainderMoments& m) { return m.cross_dtdt; },
                          +[](const RemainderMoments& m) { return m.cross_dqvdqv; },
                          +[](const RemainderMoments& m) { return m.cross_dtdqv; },
                          +[](const RemainderMoments& m) { return m.cross_dtdb; },
                          +[](const RemainderMoments& m) { return m.cross_dqvdb; }}) {
            worst_cross = std::max(worst_cross, monotone_within_3se(pick));
        }
        report.add({"ito.remainder-cross-decay",
                    "all five cross-term second moments decreasing (3 se slack)",
                    "remainder.cross-decay",
                    worst_cross <= 0.0 ? CaseStatus::pass : CaseStatus::fail, worst_cross,
                    0.0, 0.0, false});

        bool bound_ok = true;
        for (const auto& row : table) {
            bound_ok = bound_ok && row.cross_dqvdqv.mean <=
                                       row.cross_dqvdqv_bound * (1.0 + 1e-9) + 1e-300;
        }
        report.add({"ito.remainder-cross-bound",
                    "dqv*dqv cross moment within its Cauchy-Schwarz majorant",
                    "remainder.cross-bound",
                    bound_ok ? CaseStatus::pass : CaseStatus::fail, bound_ok ? 0.0 : 1.0,
                    0.0, 0.0, true});
    }

    report.wall_seconds = timer.seconds();
    return report;
}

} // namespace gexp::suites
