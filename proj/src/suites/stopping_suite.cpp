#include <chrono>
#include <cmath>

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

// Replaces the increments of `path` strictly after the stop index with the
// donor's and rebuilds the prefix sums; node data up to the stop index is
// untouched.
SamplePath splice_after(const SamplePath& path, const SamplePath& donor, Index kappa) {
    SamplePath out = path;
    for (Index k = kappa; k < path.n_steps(); ++k) {
        out.db[k] = donor.db[k];
        out.dqv[k] = donor.dqv[k];
        out.b[k + 1] = out.b[k] + out.db[k];
        out.qv[k + 1] = out.qv[k] + out.dqv[k];
    }
    return out;
}

} // namespace

SuiteReport run_stopping(const EngineSetup& setup, const StoppingParams& params) {
    Timer timer;
    SuiteReport report;
    report.suite = "stopping";

    const GridPtr grid = setup.grid();
    const ControlSet controls = setup.controls();
    const SeedPolicy seeds{setup.master_seed};
    const double horizon = setup.horizon;

    // mixed-scenario path pool reused by every subtest
    std::vector<SamplePath> paths;
    paths.reserve(static_cast<std::size_t>(params.n_paths));
    for (std::int64_t i = 0; i < params.n_paths; ++i) {
        const auto c = static_cast<std::size_t>(i) % controls.size();
        paths.push_back(generate_path(controls[c], grid, setup.band,
                                      seeds.stream(static_cast<std::uint32_t>(c),
                                                   static_cast<std::uint64_t>(i)),
                                      static_cast<std::uint64_t>(i)));
    }

    // ---- stopped-integral identity, exact on the grid ----
    {
        ProcessGenerator generator(setup.master_seed ^ 0x73746f70u, grid);
        DrawSource draws(setup.master_seed ^ 0x74617573u);
        double worst = 0.0;
        std::int64_t checked = 0;
        for (std::int64_t pair = 0; pair < params.n_pairs; ++pair) {
            const SimpleProcess simple = generator.next();
            const GridProcess eta = simple.to_grid();
            const StoppingTime tau = random_stopping_time(
                draws, grid, setup.band, eta, static_cast<int>(pair));
            const double t =
                grid->point(draws.integer(1, grid->n_steps()));
            const GridProcess masked = product(pre_stop_indicator(tau), eta);
            for (const SamplePath& path : paths) {
                const double lhs = stopped_integral(eta, tau, t, path);
                const double rhs =
                    ito_integral(masked, path).values[grid->index_of(t)];
                worst = std::max(worst, std::abs(lhs - rhs));
                ++checked;
            }
        }
        report.add({"stopping.identity",
                    "int_0^{t^tau} eta dB equals the masked integral on " +
                        std::to_string(checked) + " (eta,tau,path) triples",
                    "stopping.identity",
                    worst == 0.0 ? CaseStatus::pass : CaseStatus::fail, worst, 0.0, 0.0,
                    true});
    }

    // ---- dyadic sandwich, gap monotonicity, L1 gap ----
    {
        DrawSource draws(setup.master_seed ^ 0x64796164u);
        ProcessGenerator generator(setup.master_seed ^ 0x6479700fu, grid);
        const GridProcess eta = generator.next().to_grid();

        std::int64_t sandwich_violations = 0, monotone_violations = 0;
        PlotTable gap_table;
        gap_table.name = "dyadic_gaps";
        gap_table.headers = {"level", "max_gap", "bound", "mean_gap"};
        double worst_l1_excess = -1e300;

        std::vector<StoppingTime> taus;
        for (int kind = 0; kind < 12; ++kind) {
            taus.push_back(random_stopping_time(draws, grid, setup.band, eta, kind));
        }

        for (int level = 1; level <= params.dyadic_max_level; ++level) {
            const double bound = horizon * std::exp2(-level);
            double max_gap = 0.0, gap_sum = 0.0;
            std::int64_t count = 0;
            for (const auto& tau : taus) {
                for (const auto& path : paths) {
                    const double value = tau.evaluate(path).time;
                    const double upper = dyadic_upper(tau, level, path);
                    const double gap = upper - value;
                    if (!(gap >= 0.0 && gap <= bound)) ++sandwich_violations;
                    if (level > 1) {
                        const double previous =
                            dyadic_upper(tau, level - 1, path) - value;
                        if (gap > previous) ++monotone_violations;
                    }
                    max_gap = std::max(max_gap, gap);
                    gap_sum += gap;
                    ++count;
                }
            }
            const double mean_gap = gap_sum / static_cast<double>(count);
            worst_l1_excess = std::max(worst_l1_excess, mean_gap - bound);
            if (max_gap <= bound) {  // sandwich re-asserted at export
                gap_table.rows.push_back(
                    {static_cast<double>(level), max_gap, bound, mean_gap});
            }
        }
        report.tables.push_back(std::move(gap_table));

        report.add({"stopping.dyadic-sandwich",
                    "0 <= tau_n - tau <= 2^-n T for n = 1.." +
                        std::to_string(params.dyadic_max_level) + " (exact)",
                    "stopping.dyadic-sandwich",
                    sandwich_violations == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(sandwich_violations), 0.0, 0.0, true});
        report.add({"stopping.dyadic-monotone",
                    "dyadic gap non-increasing in the level on every path (exact)",
                    "stopping.dyadic-sandwich",
                    monotone_violations == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(monotone_violations), 0.0, 0.0, true});
        report.add({"stopping.indicator-l1-gap",
                    "mean indicator gap E(tau_n - tau) within the 2^-n T bound",
                    "stopping.dyadic-gap-l1",
                    worst_l1_excess <= 0.0 ? CaseStatus::pass : CaseStatus::fail,
                    worst_l1_excess, 0.0, 0.0, false});

        // per-path stop times for one representative rule
        {
            PlotTable stops;
            stops.name = "stop_times";
            stops.headers = {"path_id", "tau", "tau_dyadic_4"};
            const StoppingTime& tau = taus[3];
            for (std::size_t i = 0; i < paths.size() && i < 200; ++i) {
                stops.rows.push_back({static_cast<double>(i),
                                      tau.evaluate(paths[i]).time,
                                      dyadic_upper(tau, 4, paths[i])});
            }
            report.tables.push_back(std::move(stops));
        }

        // frozen mesh example: a stop at 0.3 T on a level-2 mesh lands on
        // the next dyadic point 0.5 T
        const StoppingTime det = StoppingTime::deterministic(0.3 * horizon);
        const double up = dyadic_upper(det, 2, paths.front());
        const double expected = 0.5 * horizon;
        // the grid snap (ceil to T/512) shifts the base stop by at most one
        // step before the dyadic ceiling, which does not move the result
        report.add({"stopping.dyadic-example",
                    "stop at 0.3 T with mesh T/4 lands on 0.5 T",
                    "stopping.dyadic-sandwich",
                    up == expected ? CaseStatus::pass : CaseStatus::fail, up, expected,
                    0.0, true});
    }

    // ---- integral-threshold scan oracle ----
    {
        ProcessGenerator generator(setup.master_seed ^ 0x7363616eu, grid);
        std::int64_t mismatches = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const GridProcess eta = generator.next().to_grid();
            const double level = 0.05 + 0.1 * rep;
            const double power = rep % 2 == 0 ? 1.0 : 2.0;
            const StoppingTime tau = StoppingTime::integral_threshold(eta, level, power);
            for (std::size_t i = 0; i < paths.size(); i += 37) {
                const SamplePath& path = paths[i];
                // brute-force scan of the running Bochner integral
                const Eigen::ArrayXd nodes = sample_nodes(eta, path);
                const auto& dt = grid->dt();
                double running = 0.0;
                Index expected = grid->n_steps();
                for (Index k = 0; k < grid->n_steps(); ++k) {
                    running += power_term(nodes[k], power) * dt[k];
                    if (running > level) {
                        expected = k + 1;
                        break;
                    }
                }
                if (tau.evaluate(path).index != expected) ++mismatches;
            }
        }
        report.add({"stopping.threshold-scan",
                    "integral-threshold stop equals the brute-force scan (exact)",
                    "stopping.threshold-scan",
                    mismatches == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(mismatches), 0.0, 0.0, true});
    }

    // ---- adaptedness audit by path splicing ----
    {
        ProcessGenerator generator(setup.master_seed ^ 0x61756469u, grid);
        DrawSource draws(setup.master_seed ^ 0x61756432u);
        const GridProcess eta = generator.next().to_grid();
        std::int64_t changed = 0;
        for (int kind = 0; kind < 12; ++kind) {
            const StoppingTime tau =
                random_stopping_time(draws, grid, setup.band, eta, kind);
            for (std::size_t i = 0; i + 1 < paths.size(); i += 23) {
                const SamplePath& path = paths[i];
                const Index kappa = tau.evaluate(path).index;
                const SamplePath spliced = splice_after(path, paths[i + 1], kappa);
                if (tau.evaluate(spliced).index != kappa) ++changed;
            }
        }
        report.add({"stopping.adapted",
                    "stop index invariant under perturbations after the stop",
                    "stopping.adapted",
                    changed == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(changed), 0.0, 0.0, true});
    }

    // ---- localization: no-trigger identity and stabilization ----
    {
        const double scale = setup.band.sigma_hi * std::sqrt(horizon);
        const LocalizationSequence sigma = hitting_localization(2.0 * scale, 0.5 * scale);

        // bounded eta whose L1 threshold never fires at high level
        const GridProcess small = constant_process(0.5);
        const Localization high = localize(small, LocalizeRule::l1_threshold, sigma, 10);
        std::int64_t unchanged_violations = 0;
        for (std::size_t i = 0; i < paths.size(); i += 41) {
            const SamplePath& path = paths[i];
            if (high.tau.evaluate(path).index != grid->n_steps()) {
                ++unchanged_violations;
                continue;
            }
            const Eigen::ArrayXd masked = sample_nodes(high.process, path);
            const Eigen::ArrayXd original = sample_nodes(small, path);
            if ((masked != original).any()) ++unchanged_violations;
        }
        report.add({"stopping.localize-identity",
                    "below-threshold localization leaves the process unchanged",
                    "stopping.localization-stable",
                    unchanged_violations == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(unchanged_violations), 0.0, 0.0, true});

        // stabilization: once tau_n = T, all higher levels agree exactly
        const GridProcess b_proc = brownian_process();
        const Localization base = localize(b_proc, LocalizeRule::l1_threshold, sigma, 1);
        std::int64_t stab_violations = 0, stabilized = 0;
        for (std::size_t i = 0; i < paths.size(); i += 7) {
            const SamplePath& path = paths[i];
            if (base.tau.evaluate(path).index != grid->n_steps()) continue;
            ++stabilized;
            const double reference =
                ito_integral(product(indicator_process(base.tau), b_proc), path)
                    .final_value();
            for (int m = 2; m <= 4; ++m) {
                const Localization higher =
                    localize(b_proc, LocalizeRule::l1_threshold, sigma, m);
                if (higher.tau.evaluate(path).index != grid->n_steps()) {
                    ++stab_violations;
                    continue;
                }
                const double value =
                    ito_integral(product(indicator_process(higher.tau), b_proc), path)
                        .final_value();
                if (value != reference) ++stab_violations;
            }
        }
        report.add({"stopping.localize-stable",
                    "stopped integrals at higher levels agree exactly on {tau_n = T} (" +
                        std::to_string(stabilized) + " paths)",
                    "stopping.localization-stable",
                    stab_violations == 0 && stabilized > 0 ? CaseStatus::pass
                                                           : CaseStatus::fail,
                    static_cast<double>(stab_violations), 0.0, 0.0, true});
    }

    report.wall_seconds = timer.seconds();
    return report;
}

} // namespace gexp::suites
