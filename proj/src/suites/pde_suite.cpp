#include <chrono>
#include <cmath>

#include <json.hpp>

#include "gexp/pde.hpp"
#include "gexp/suites.hpp"

namespace gexp::suites {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

} // namespace

SuiteReport run_pde(const EngineSetup& setup, const PdeParams& params) {
    Timer timer;
    SuiteReport report;
    report.suite = "pde";

    const ControlSet controls = setup.controls();
    const double horizon = setup.horizon;
    const double hi = setup.band.sigma_hi;
    const double lo = setup.band.sigma_lo;

    struct Payoff {
        std::string id;
        std::function<double(double)> fn;
        double closed_form;
        bool convex;
    };
    const std::vector<Payoff> payoffs = {
        {"x2", [](double x) { return x * x; }, hi * hi * horizon, true},
        {"negx2", [](double x) { return -x * x; }, -lo * lo * horizon, false},
        {"call", [](double x) { return std::max(x, 0.0); },
         hi * std::sqrt(horizon / (2.0 * M_PI)), true},
    };

    // one shared Monte Carlo sweep for all terminal payoffs
    EvaluationConfig cfg = setup.eval(params.mc_paths);
    cfg.grid = setup.grid(256);
    std::vector<PayoffFunctional> terminal;
    for (const auto& p : payoffs) {
        terminal.push_back({p.id, horizon, [fn = p.fn](const SamplePath& path) {
                                return fn(path.b[path.n_steps()]);
                            }});
    }
    const BatchResult batch = evaluate_payoffs(controls, terminal, cfg);

    const PdeGrid pde_grid =
        PdeGrid::around(0.0, setup.band, horizon, 6.5, params.dx, params.cfl_fraction);

    PlotTable cross_table;
    cross_table.name = "cross_validation";
    cross_table.headers = {"payoff", "mc_value", "mc_std_error", "pde_value",
                           "abs_gap", "tolerance"};
    nlohmann::ordered_json cross_records = nlohmann::ordered_json::array();

    for (std::size_t i = 0; i < payoffs.size(); ++i) {
        const Payoff& p = payoffs[i];
        const ExpectationEstimate mc = estimate_from_batch(batch, i, cfg.n_paths);
        const ValueSurface surface =
            solve_g_heat(p.fn, setup.band, pde_grid, i == 0 ? 8 : 0);
        const double pde_value = surface.value_at(0.0);
        const double gap = std::abs(mc.value - pde_value);
        const double tolerance =
            std::max(0.01 * std::abs(pde_value),
                     3.0 * mc.std_error + params.scheme_tolerance);
        report.add({"pde.cross-" + p.id,
                    "Monte Carlo vs G-heat value for the terminal payoff " + p.id,
                    "pde.cross-check", gap <= tolerance ? CaseStatus::pass : CaseStatus::fail,
                    mc.value, pde_value, tolerance, false});
        cross_table.row_labels.push_back(p.id);
        cross_table.rows.push_back(
            {mc.value, mc.std_error, pde_value, gap, tolerance});
        nlohmann::ordered_json record;
        record["payoff"] = p.id;
        record["mc_value"] = mc.value;
        record["mc_std_error"] = mc.std_error;
        record["pde_value"] = pde_value;
        record["abs_gap"] = gap;
        record["pass"] = gap <= tolerance;
        cross_records.push_back(std::move(record));

        if (p.convex) {
            const double rel_gap =
                std::abs(pde_value - p.closed_form) / std::abs(p.closed_form);
            report.add({"pde.closedform-" + p.id,
                        "convex payoff matches the max-volatility Gaussian value to 1%",
                        "pde.closed-form",
                        rel_gap <= 0.01 ? CaseStatus::pass : CaseStatus::fail, pde_value,
                        p.closed_form, 0.01 * std::abs(p.closed_form), false});
        }

        if (i == 0) {
            // decimated (t, x, u) surface export
            PlotTable surf;
            surf.name = "surface_x2";
            surf.headers = {"t", "x", "u"};
            for (const auto& [t, u] : surface.snapshots) {
                for (Eigen::Index k = 0; k < surface.x.size(); k += 50) {
                    surf.rows.push_back({t, surface.x[k], u[k]});
                }
            }
            report.tables.push_back(std::move(surf));
        }
    }
    report.tables.push_back(std::move(cross_table));
    report.json_artifacts.emplace_back("cross_validation", cross_records.dump(2) + "\n");

    // ---- scheme identities on a compact grid ----
    {
        PdeGrid small = PdeGrid::around(0.0, setup.band, 0.25, 5.0, 0.05,
                                        params.cfl_fraction);
        auto base = [](double x) { return std::abs(x) + 0.25 * std::sin(3.0 * x); };
        auto lifted = [&base](double x) { return base(x) + 0.3; };
        const ValueSurface u_base = solve_g_heat(base, setup.band, small);
        const ValueSurface u_lift = solve_g_heat(lifted, setup.band, small);
        const bool monotone = (u_lift.u_final >= u_base.u_final).all();
        report.add({"pde.scheme-monotone",
                    "raising the payoff pointwise never lowers the value (exact)",
                    "pde.scheme-monotone",
                    monotone ? CaseStatus::pass : CaseStatus::fail, monotone ? 0.0 : 1.0,
                    0.0, 0.0, true});

        const ValueSurface u_const =
            solve_g_heat([](double) { return 1.25; }, setup.band, small);
        const double const_gap = (u_const.u_final - 1.25).abs().maxCoeff();
        report.add({"pde.scheme-constant", "constant payoff preserved exactly",
                    "pde.scheme-constant",
                    const_gap == 0.0 ? CaseStatus::pass : CaseStatus::fail, const_gap,
                    0.0, 0.0, true});

        auto second = [](double x) { return std::cos(2.0 * x) - 0.5 * x; };
        auto combined = [&base, &second](double x) { return base(x) + second(x); };
        const ValueSurface u_second = solve_g_heat(second, setup.band, small);
        const ValueSurface u_comb = solve_g_heat(combined, setup.band, small);
        const double sub_excess =
            (u_comb.u_final - (u_base.u_final + u_second.u_final)).maxCoeff();
        report.add({"pde.scheme-sublinear",
                    "value of a payoff sum within the sum of values (rounding slack)",
                    "pde.scheme-sublinear",
                    sub_excess <= 1e-8 ? CaseStatus::pass : CaseStatus::fail, sub_excess,
                    0.0, 1e-8, true});
    }

    // ---- degenerate band = classical heat equation ----
    {
        const double sigma = 0.5 * (lo + hi);
        const VolatilityBand degenerate(sigma, sigma);
        const PdeGrid grid =
            PdeGrid::around(0.0, degenerate, horizon, 6.5, params.dx,
                            params.cfl_fraction);
        const ValueSurface u =
            solve_g_heat([](double x) { return x * x; }, degenerate, grid);
        const double expected = sigma * sigma * horizon;
        const double rel = std::abs(u.value_at(0.0) - expected) / expected;
        report.add({"pde.degenerate-heat",
                    "degenerate band reproduces the Gaussian second moment to 0.5%",
                    "pde.degenerate-heat",
                    rel <= 0.005 ? CaseStatus::pass : CaseStatus::fail, u.value_at(0.0),
                    expected, 0.005 * expected, false});
    }

    report.wall_seconds = timer.seconds();
    return report;
}

} // namespace gexp::suites
