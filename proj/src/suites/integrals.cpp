#include <chrono>
#include <cmath>

#include <json.hpp>

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

double pooled_se(double a, double b) { return std::sqrt(a * a + b * b); }

struct SupStat {
    double value = 0.0;
    double se = 0.0;
};

// sup over controls of per-control means stored as (mean, se) rows.
SupStat sup_stat(const std::vector<MeanSe>& per_control) {
    SupStat out{per_control[0].mean, per_control[0].se};
    for (const auto& ms : per_control) {
        if (ms.mean > out.value) out = {ms.mean, ms.se};
    }
    return out;
}

SupStat inf_stat(const std::vector<MeanSe>& per_control) {
    SupStat out{per_control[0].mean, per_control[0].se};
    for (const auto& ms : per_control) {
        if (ms.mean < out.value) out = {ms.mean, ms.se};
    }
    return out;
}

} // namespace

SuiteReport run_integrals(const EngineSetup& setup, const IntegralsParams& params) {
    Timer timer;
    SuiteReport report;
    report.suite = "integrals";
    const ControlSet controls = setup.controls();
    const double hi2 = setup.band.hi2();

    // ---- terminal moments, truncation tails, absolute-continuity probe ----
    {
        EvaluationConfig cfg = setup.eval(params.moment_paths);
        cfg.grid = setup.grid(params.moment_steps);
        const double horizon = setup.horizon;

        std::vector<PayoffFunctional> payoffs;
        for (const double p : {1.0, 2.0, 4.0}) {
            payoffs.push_back({"absmoment." + std::to_string(static_cast<int>(p)),
                               horizon, [p](const SamplePath& path) {
                                   return std::pow(std::abs(path.b[path.n_steps()]), p);
                               }});
        }
        for (const double level : params.tail_levels) {
            payoffs.push_back(
                {"tail." + std::to_string(level), horizon,
                 [level](const SamplePath& path) {
                     const auto& dt = path.grid->dt();
                     double acc = 0.0;
                     for (Index k = 0; k < path.n_steps(); ++k) {
                         const double b = path.b[k];
                         if (std::abs(b) > level) acc += b * b * dt[k];
                     }
                     return acc;
                 }});
        }
        // small-support weight: |eta| <= 1 living on the last few steps,
        // sized from the truncation level N = 4 via delta = eps / (2 N^2 T)
        const double probe_eps = 0.6;
        const double probe_level = 4.0;
        const double probe_delta =
            probe_eps / (2.0 * probe_level * probe_level * horizon);
        const auto window_steps = std::max<Index>(
            1, static_cast<Index>(probe_delta * static_cast<double>(params.moment_steps) /
                                  horizon));
        payoffs.push_back({"abscont.weighted", horizon,
                           [window_steps](const SamplePath& path) {
                               const auto& dt = path.grid->dt();
                               double acc = 0.0;
                               for (Index k = path.n_steps() - window_steps;
                                    k < path.n_steps(); ++k) {
                                   acc += path.b[k] * path.b[k] * dt[k];
                               }
                               return acc;
                           }});
        payoffs.push_back({"abscont.support", horizon,
                           [window_steps](const SamplePath& path) {
                               const auto& dt = path.grid->dt();
                               double acc = 0.0;
                               for (Index k = path.n_steps() - window_steps;
                                    k < path.n_steps(); ++k) {
                                   acc += dt[k];
                               }
                               return acc;
                           }});

        const BatchResult batch = evaluate_payoffs(controls, payoffs, cfg);

        // G-normal absolute moments vs the closed form
        PlotTable moment_table;
        moment_table.name = "gnormal_moments";
        moment_table.headers = {"p", "estimate", "closed_form", "std_error"};
        nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
        const double p_values[] = {1.0, 2.0, 4.0};
        for (std::size_t i = 0; i < 3; ++i) {
            const ExpectationEstimate est = estimate_from_batch(batch, i, cfg.n_paths);
            const double closed = gnormal_abs_moment(p_values[i], setup.band);
            const double gap = std::abs(est.value - closed);
            const double tol = 3.0 * est.std_error;
            report.add({"integrals.moment-p" + std::to_string(static_cast<int>(p_values[i])),
                        "sup-expectation of |B_T|^p vs the Gaussian closed form",
                        "gnormal.abs-moment",
                        gap <= tol ? CaseStatus::pass : CaseStatus::fail, est.value,
                        closed, tol, false});
            moment_table.rows.push_back({p_values[i], est.value, closed, est.std_error});

            nlohmann::ordered_json record;
            record["payoff"] = batch.payoff_ids[i];
            record["value"] = est.value;
            record["std_error"] = est.std_error;
            record["argmax_control_id"] = est.argmax_control_id;
            record["n_paths"] = est.n_paths;
            estimates.push_back(std::move(record));
        }
        report.tables.push_back(std::move(moment_table));
        report.json_artifacts.emplace_back("moment_estimates", estimates.dump(2) + "\n");

        // truncation tails: per-sample monotone in the level, so the
        // estimates must be non-increasing exactly; the last level passes
        // below the configured threshold
        PlotTable tail_table;
        tail_table.name = "truncation_tails";
        tail_table.headers = {"level", "estimate", "std_error"};
        std::vector<double> tail_values;
        for (std::size_t i = 0; i < params.tail_levels.size(); ++i) {
            const ExpectationEstimate est =
                estimate_from_batch(batch, 3 + i, cfg.n_paths);
            tail_values.push_back(est.value);
            tail_table.rows.push_back({params.tail_levels[i], est.value, est.std_error});
        }
        report.tables.push_back(std::move(tail_table));
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < tail_values.size(); ++i) {
            monotone = monotone && tail_values[i + 1] <= tail_values[i];
        }
        report.add({"integrals.tail-monotone",
                    "E int |B|^2 1{|B|>n} dt non-increasing in n (exact)",
                    "integral.truncation-tail",
                    monotone ? CaseStatus::pass : CaseStatus::fail,
                    monotone ? 0.0 : 1.0, 0.0, 0.0, true});
        report.add({"integrals.tail-vanishes",
                    "tail estimate at the largest cutoff below the pass level",
                    "integral.truncation-tail",
                    tail_values.back() <= params.tail_pass_level ? CaseStatus::pass
                                                                 : CaseStatus::fail,
                    tail_values.back(), 0.0, params.tail_pass_level, false});

        const std::size_t probe_index = 3 + params.tail_levels.size();
        const ExpectationEstimate weighted =
            estimate_from_batch(batch, probe_index, cfg.n_paths);
        const ExpectationEstimate support =
            estimate_from_batch(batch, probe_index + 1, cfg.n_paths);
        const bool support_ok = support.value <= probe_delta * (1.0 + 1e-12);
        report.add({"integrals.absolute-continuity",
                    "E int |B|^2 |eta| dt <= eps for |eta| <= 1 with support <= delta",
                    "integral.absolute-continuity",
                    support_ok && weighted.value <= probe_eps ? CaseStatus::pass
                                                              : CaseStatus::fail,
                    weighted.value, 0.0, probe_eps, false});
    }

    // ---- randomized simple processes: zero-mean, energy, maximal bound ----
    {
        const GridPtr grid = setup.grid(params.process_steps);
        EvaluationConfig cfg = setup.eval(params.process_paths);
        cfg.grid = grid;

        ProcessGenerator generator(setup.master_seed ^ 0x70726f63u, grid);
        std::vector<SimpleProcess> processes;
        processes.reserve(static_cast<std::size_t>(params.n_processes));
        for (std::int64_t p = 0; p < params.n_processes; ++p) {
            processes.push_back(generator.next());
        }

        const auto n_controls = controls.size();
        const auto n_proc = processes.size();
        std::vector<std::vector<Index>> proc_nodes;
        proc_nodes.reserve(n_proc);
        for (const auto& process : processes) {
            proc_nodes.push_back(compile_nodes(process, *grid));
        }
        // per (control, process) statistics of I, I^2, E2, M^2
        std::vector<std::vector<MeanSe>> stat_i(n_controls), stat_i2(n_controls),
            stat_e2(n_controls), stat_m2(n_controls);

        std::vector<double> slab(static_cast<std::size_t>(params.process_paths) *
                                 n_proc * 3);
        for (std::size_t c = 0; c < n_controls; ++c) {
            for_each_path(
                controls[c], SeedPolicy::shared_slot, cfg,
                [&](std::int64_t i, const SamplePath& path) {
                    const RangeExtrema extrema(path.b);
                    CompiledSimpleProcess compiled;
                    double* row = slab.data() + static_cast<std::size_t>(i) * n_proc * 3;
                    for (std::size_t p = 0; p < n_proc; ++p) {
                        compile_on_path(processes[p], proc_nodes[p], path, compiled);
                        const SimpleProcessStats s =
                            evaluate_simple(compiled, path, extrema);
                        row[3 * p] = s.ito_final;
                        row[3 * p + 1] = s.energy_final;
                        row[3 * p + 2] = s.max_abs_running;
                    }
                });
            stat_i[c].resize(n_proc);
            stat_i2[c].resize(n_proc);
            stat_e2[c].resize(n_proc);
            stat_m2[c].resize(n_proc);
            std::vector<double> col(static_cast<std::size_t>(params.process_paths));
            for (std::size_t p = 0; p < n_proc; ++p) {
                auto column = [&](int which, auto f) {
                    for (std::int64_t i = 0; i < params.process_paths; ++i) {
                        col[static_cast<std::size_t>(i)] = f(
                            slab[static_cast<std::size_t>(i) * n_proc * 3 + 3 * p + which]);
                    }
                    return mean_se(col);
                };
                stat_i[c][p] = column(0, [](double v) { return v; });
                stat_i2[c][p] = column(0, [](double v) { return v * v; });
                stat_e2[c][p] = column(1, [](double v) { return v; });
                stat_m2[c][p] = column(2, [](double v) { return v * v; });
            }
        }

        nlohmann::ordered_json inequality_report = nlohmann::ordered_json::array();
        int zero_mean_fail = 0, energy_fail = 0, doob_fail = 0;
        double worst_zero_mean = 0.0, worst_energy = -1e300, worst_doob = -1e300;
        std::vector<MeanSe> per_control(n_controls);
        auto gather = [&](const std::vector<std::vector<MeanSe>>& stats, std::size_t p) {
            for (std::size_t c = 0; c < n_controls; ++c) per_control[c] = stats[c][p];
            return per_control;
        };

        for (std::size_t p = 0; p < n_proc; ++p) {
            const SupStat sup_i = sup_stat(gather(stat_i, p));
            const SupStat inf_i = inf_stat(gather(stat_i, p));
            const double z_sup = std::abs(sup_i.value) / std::max(sup_i.se, 1e-300);
            const double z_inf = std::abs(inf_i.value) / std::max(inf_i.se, 1e-300);
            const double z = std::max(z_sup, z_inf);
            worst_zero_mean = std::max(worst_zero_mean, z);
            if (z > 3.0) ++zero_mean_fail;

            const SupStat lhs_e = sup_stat(gather(stat_i2, p));
            const SupStat sup_e2 = sup_stat(gather(stat_e2, p));
            const double rhs_e = hi2 * sup_e2.value;
            const double se_e = pooled_se(lhs_e.se, hi2 * sup_e2.se);
            const double margin_e = (lhs_e.value - rhs_e) / std::max(se_e, 1e-300);
            worst_energy = std::max(worst_energy, margin_e);
            if (margin_e > 3.0) ++energy_fail;

            const SupStat lhs_m = sup_stat(gather(stat_m2, p));
            const double rhs_m = 2.0 * hi2 * sup_e2.value;
            const double se_m = pooled_se(lhs_m.se, 2.0 * hi2 * sup_e2.se);
            const double margin_m = (lhs_m.value - rhs_m) / std::max(se_m, 1e-300);
            worst_doob = std::max(worst_doob, margin_m);
            if (margin_m > 3.0) ++doob_fail;

            auto record = [&](const std::string& kind, double lhs, double rhs,
                              double margin) {
                nlohmann::ordered_json row;
                row["case_id"] = kind + "." + std::to_string(p);
                row["lhs"] = lhs;
                row["rhs"] = rhs;
                row["margin_in_std_errors"] = margin;
                row["pass"] = margin <= 3.0;
                inequality_report.push_back(std::move(row));
            };
            record("zero_mean", std::max(std::abs(sup_i.value), std::abs(inf_i.value)),
                   0.0, z);
            record("energy", lhs_e.value, rhs_e, margin_e);
            record("doob", lhs_m.value, rhs_m, margin_m);
        }
        report.json_artifacts.emplace_back("inequalities",
                                           inequality_report.dump(2) + "\n");

        const std::string corpus =
            std::to_string(params.n_processes) + " simple processes";
        report.add({"integrals.zero-mean",
                    "worst |sup E(int eta dB)| in std errors over " + corpus,
                    "integral.zero-mean",
                    zero_mean_fail == 0 ? CaseStatus::pass : CaseStatus::fail,
                    worst_zero_mean, 0.0, 3.0, false});
        report.add({"integrals.energy",
                    "E((int eta dB)^2) <= sigma_hi^2 E(int eta^2 dt) over " + corpus,
                    "integral.energy-bound",
                    energy_fail == 0 ? CaseStatus::pass : CaseStatus::fail, worst_energy,
                    0.0, 3.0, false});
        report.add({"integrals.doob",
                    "E(sup |int eta dB|^2) <= 2 sigma_hi^2 E(int eta^2 dt) over " + corpus,
                    "integral.maximal-bound",
                    doob_fail == 0 ? CaseStatus::pass : CaseStatus::fail, worst_doob, 0.0,
                    3.0, false});

        // ---- pathwise linearity and interval additivity ----
        {
            DrawSource draws(setup.master_seed ^ 0x6c696e65u);
            double worst = 0.0;
            const Index quarter = params.process_steps / 4;
            for (int rep = 0; rep < 10; ++rep) {
                const SimpleProcess eta = generator.next();
                const SimpleProcess theta = generator.next();
                const auto control_index =
                    static_cast<std::size_t>(draws.integer(0, static_cast<std::int64_t>(
                                                                  n_controls - 1)));
                const SamplePath path = generate_path(
                    controls[control_index], grid, setup.band,
                    cfg.seeds.stream(SeedPolicy::shared_slot,
                                     static_cast<std::uint64_t>(rep)),
                    static_cast<std::uint64_t>(rep));
                const Eigen::ArrayXd eta_nodes = sample_nodes(eta.to_grid(), path);
                const Eigen::ArrayXd theta_nodes = sample_nodes(theta.to_grid(), path);
                const double alpha = std::tanh(path.b[quarter]);

                const IntegralPath full = ito_integral(eta.to_grid(), path);
                // interval additivity around the quarter node
                double direct = 0.0;
                for (Index k = quarter; k < params.process_steps; ++k) {
                    direct += eta_nodes[k] * path.db[k];
                }
                const double split_gap =
                    std::abs(full.final_value() - full.values[quarter] - direct);

                // linear combination with an alpha known at the quarter node
                double combined = 0.0, separate_eta = 0.0, separate_theta = 0.0;
                for (Index k = quarter; k < params.process_steps; ++k) {
                    combined += (alpha * eta_nodes[k] + theta_nodes[k]) * path.db[k];
                    separate_eta += eta_nodes[k] * path.db[k];
                    separate_theta += theta_nodes[k] * path.db[k];
                }
                const double lin_gap =
                    std::abs(combined - (alpha * separate_eta + separate_theta));
                const double scale =
                    1.0 + std::abs(combined) + std::abs(full.final_value());
                worst = std::max(worst, std::max(split_gap, lin_gap) / scale);
            }
            report.add({"integrals.linearity",
                        "interval additivity and linearity at machine precision",
                        "integral.linearity",
                        worst <= 1e-12 ? CaseStatus::pass : CaseStatus::fail, worst, 0.0,
                        1e-12, true});
        }

        // ---- continuity proxy: largest step jump decays like sqrt(dt) ----
        {
            const Index fine_steps = 2048;
            const GridPtr fine = setup.grid(fine_steps);
            EvaluationConfig jump_cfg = setup.eval(256);
            jump_cfg.grid = fine;
            // breakpoints drawn on the coarsest level so every subsampled
            // grid still contains them
            ProcessGenerator jump_gen(setup.master_seed ^ 0x6a756d70u,
                                      setup.grid(fine_steps / 16));
            const SimpleProcess eta = jump_gen.next();

            std::vector<double> level_means;
            const VolatilityControl& control = controls.front();
            std::vector<SamplePath> paths = generate_ensemble(
                control, fine, setup.band, jump_cfg.n_paths, jump_cfg.seeds,
                SeedPolicy::shared_slot, setup.jobs);
            for (Index factor : {16, 8, 4, 2, 1}) {
                double acc = 0.0;
                for (const SamplePath& fine_path : paths) {
                    const SamplePath path =
                        factor == 1 ? fine_path : fine_path.subsample(factor);
                    const Eigen::ArrayXd nodes = sample_nodes(eta.to_grid(), path);
                    double max_jump = 0.0;
                    for (Index k = 0; k < path.n_steps(); ++k) {
                        max_jump = std::max(max_jump, std::abs(nodes[k] * path.db[k]));
                    }
                    acc += max_jump;
                }
                level_means.push_back(acc / static_cast<double>(paths.size()));
            }
            bool in_range = true;
            double worst_factor = 0.0;
            PlotTable jump_table;
            jump_table.name = "jump_decay";
            jump_table.headers = {"n_steps", "mean_max_jump"};
            for (std::size_t l = 0; l < level_means.size(); ++l) {
                jump_table.rows.push_back(
                    {static_cast<double>(fine_steps >> (4 - l)), level_means[l]});
                if (l + 1 < level_means.size()) {
                    const double factor = level_means[l] / level_means[l + 1];
                    worst_factor = std::max(worst_factor, std::abs(factor - std::sqrt(2.0)));
                    in_range = in_range && factor >= std::sqrt(2.0) / 1.3 &&
                               factor <= std::sqrt(2.0) * 1.3;
                }
            }
            report.tables.push_back(std::move(jump_table));
            report.add({"integrals.continuity-proxy",
                        "per-doubling decay factor of the largest step jump within "
                        "30% of sqrt(2)",
                        "integral.continuity",
                        in_range ? CaseStatus::pass : CaseStatus::fail, worst_factor, 0.0,
                        std::sqrt(2.0) * 0.3, false});
        }
    }

    report.wall_seconds = timer.seconds();
    return report;
}

} // namespace gexp::suites
