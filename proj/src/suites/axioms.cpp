#include <chrono>
#include <cmath>

#include "gexp/suites.hpp"
#include "generators.hpp"

namespace gexp::suites {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"axioms", "integrals", "stopping",
                                                   "ito", "pde"};
    return names;
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

struct FeatureTable {
    // per (control, path): B_{T/2}, B_T, <B>_T under common random numbers
    Eigen::MatrixXd b_half, b_end, qv_end;
};

FeatureTable collect_features(const ControlSet& controls, const EngineSetup& setup,
                              std::int64_t n_paths) {
    FeatureTable f;
    const auto n_controls = static_cast<Index>(controls.size());
    f.b_half.resize(n_controls, n_paths);
    f.b_end.resize(n_controls, n_paths);
    f.qv_end.resize(n_controls, n_paths);
    EvaluationConfig cfg = setup.eval(n_paths);
    const Index half = setup.n_steps / 2;
    for (Index c = 0; c < n_controls; ++c) {
        for_each_path(controls[static_cast<std::size_t>(c)], SeedPolicy::shared_slot,
                      cfg, [&](std::int64_t i, const SamplePath& path) {
                          f.b_half(c, i) = path.b[half];
                          f.b_end(c, i) = path.b[setup.n_steps];
                          f.qv_end(c, i) = path.qv[setup.n_steps];
                      });
    }
    return f;
}

// sup over controls of the clamped fixed-order mean, the same reduction
// sup_expectation uses.
double sup_of_means(const Eigen::MatrixXd& samples) {
    double best = 0.0;
    for (Index c = 0; c < samples.rows(); ++c) {
        Eigen::ArrayXd row = samples.row(c).array();
        const double m = ordered_mean({row.data(), static_cast<std::size_t>(row.size())});
        if (c == 0 || m > best) best = m;
    }
    return best;
}

} // namespace

SuiteReport run_axioms(const EngineSetup& setup, const AxiomsParams& params) {
    Timer timer;
    SuiteReport report;
    report.suite = "axioms";

    const ControlSet controls = setup.controls();
    const FeatureTable features = collect_features(controls, setup, params.n_paths);
    const auto n_controls = static_cast<Index>(controls.size());
    const Index n_paths = params.n_paths;

    DrawSource draws(setup.master_seed ^ 0x4d6f6e6fu);

    std::int64_t violations_mono = 0, violations_const = 0;
    std::int64_t violations_sub = 0, violations_hom = 0;

    Eigen::MatrixXd x(n_controls, n_paths), y(n_controls, n_paths),
        z(n_controls, n_paths), d(n_controls, n_paths), lx(n_controls, n_paths);
    for (std::int64_t pair = 0; pair < params.n_pairs; ++pair) {
        const QuantizedFunctional fy = QuantizedFunctional::random(draws);
        const QuantizedFunctional fz = QuantizedFunctional::random(draws);
        const double constant = draws.uniform(-2.0, 2.0);
        const double lambda =
            static_cast<double>(draws.integer(0, 512)) / 64.0;  // dyadic

        for (Index c = 0; c < n_controls; ++c) {
            for (Index i = 0; i < n_paths; ++i) {
                const double yv =
                    fy(features.b_half(c, i), features.b_end(c, i), features.qv_end(c, i));
                const double zv =
                    fz(features.b_half(c, i), features.b_end(c, i), features.qv_end(c, i));
                y(c, i) = yv;
                z(c, i) = zv;
                x(c, i) = yv + std::abs(zv);  // x >= y samplewise
                d(c, i) = yv - zv;            // lattice difference, exact
                lx(c, i) = lambda * yv;       // dyadic scaling, exact
            }
        }

        const double sup_x = sup_of_means(x);
        const double sup_y = sup_of_means(y);

        // (a) monotonicity, zero tolerance
        if (!(sup_x >= sup_y)) ++violations_mono;
        // (b) constant preserving
        Eigen::MatrixXd cmat = Eigen::MatrixXd::Constant(n_controls, n_paths, constant);
        const double sup_c = sup_of_means(cmat);
        if (sup_c != constant) ++violations_const;
        // (c) sub-additivity
        const double sup_z = sup_of_means(z);
        const double sup_d = sup_of_means(d);
        if (!(sup_y - sup_z <= sup_d)) ++violations_sub;
        // (d) positive homogeneity, bitwise
        const double sup_lx = sup_of_means(lx);
        if (sup_lx != lambda * sup_y) ++violations_hom;
    }

    const auto pairs_desc = std::to_string(params.n_pairs) + " randomized pairs";
    report.add({"axioms.monotonicity",
                "X >= Y samplewise implies sup-mean order, " + pairs_desc,
                "sublinear.monotonicity",
                violations_mono == 0 ? CaseStatus::pass : CaseStatus::fail,
                static_cast<double>(violations_mono), 0.0, 0.0, true});
    report.add({"axioms.constant", "sup-mean of a constant equals it, " + pairs_desc,
                "sublinear.constant",
                violations_const == 0 ? CaseStatus::pass : CaseStatus::fail,
                static_cast<double>(violations_const), 0.0, 0.0, true});
    report.add({"axioms.subadditivity",
                "sup-mean(X) - sup-mean(Y) <= sup-mean(X-Y), " + pairs_desc,
                "sublinear.subadditivity",
                violations_sub == 0 ? CaseStatus::pass : CaseStatus::fail,
                static_cast<double>(violations_sub), 0.0, 0.0, true});
    report.add({"axioms.homogeneity",
                "sup-mean(lambda X) = lambda sup-mean(X), dyadic lambda, " + pairs_desc,
                "sublinear.homogeneity",
                violations_hom == 0 ? CaseStatus::pass : CaseStatus::fail,
                static_cast<double>(violations_hom), 0.0, 0.0, true});

    // generator values and sublinearity on a numeric grid
    {
        const GFunction g{setup.band};
        const double g1 = g(1.0), gm1 = g(-1.0);
        const double g1_expected = 0.5 * setup.band.hi2();
        const double gm1_expected = -0.5 * setup.band.lo2();
        const bool values_ok = g1 == g1_expected && gm1 == gm1_expected;
        report.add({"axioms.generator-values",
                    "G(1) and G(-1) match the band extremes exactly",
                    "generator.band-values",
                    values_ok ? CaseStatus::pass : CaseStatus::fail,
                    std::abs(g1 - g1_expected) + std::abs(gm1 - gm1_expected), 0.0, 0.0,
                    true});

        std::int64_t g_violations = 0;
        for (int ia = -6; ia <= 6; ++ia) {
            for (int ib = -6; ib <= 6; ++ib) {
                const double a = 0.5 * ia, b = 0.5 * ib;
                if (!(g(a + b) <= g(a) + g(b))) ++g_violations;
                for (const double lambda : {0.0, 0.5, 1.0, 2.0, 4.0}) {
                    if (g(lambda * a) != lambda * g(a)) ++g_violations;
                }
            }
        }
        report.add({"axioms.generator-sublinearity",
                    "G subadditive and positively homogeneous on a dyadic grid",
                    "generator.sublinearity",
                    g_violations == 0 ? CaseStatus::pass : CaseStatus::fail,
                    static_cast<double>(g_violations), 0.0, 0.0, true});
    }

    // statistical counterparts: adapted weights against future increments
    {
        EvaluationConfig cfg = setup.eval(params.statistical_paths);
        const double t_mid = setup.horizon / 2.0;
        const Index half = setup.n_steps / 2;
        const double hi2 = setup.band.hi2();

        std::vector<PayoffFunctional> payoffs;
        DrawSource xi_draws(setup.master_seed ^ 0x58692031u);
        const int n_shapes = 8;
        for (int s = 0; s < n_shapes; ++s) {
            const double a = xi_draws.uniform(-2.0, 2.0);
            const double b = xi_draws.uniform(0.25, 2.0);
            const double c = xi_draws.uniform(-1.0, 1.0);
            auto xi = [a, b, c, half](const SamplePath& path) {
                return std::clamp(a * std::tanh(b * path.b[half]) + c, -2.0, 2.0);
            };
            payoffs.push_back({"p1." + std::to_string(s), setup.horizon,
                               [xi](const SamplePath& path) {
                                   const double increment =
                                       path.b[path.n_steps()] - path.b[path.n_steps() / 2];
                                   return xi(path) * increment;
                               }});
            payoffs.push_back({"p2." + std::to_string(s), setup.horizon,
                               [xi, hi2, t_mid](const SamplePath& path) {
                                   const double increment =
                                       path.b[path.n_steps()] - path.b[path.n_steps() / 2];
                                   const double w = xi(path);
                                   return w * w * (increment * increment - hi2 * t_mid);
                               }});
        }
        const BatchResult batch = evaluate_payoffs(controls, payoffs, cfg);

        double worst_p1 = 0.0, worst_p2 = -1e300;
        for (int s = 0; s < n_shapes; ++s) {
            const ExpectationEstimate sup1 =
                estimate_from_batch(batch, static_cast<std::size_t>(2 * s), cfg.n_paths);
            const double z1 = std::abs(sup1.value) / std::max(sup1.std_error, 1e-300);
            worst_p1 = std::max(worst_p1, z1);
            const ExpectationEstimate sup2 = estimate_from_batch(
                batch, static_cast<std::size_t>(2 * s + 1), cfg.n_paths);
            const double margin2 = sup2.value / std::max(sup2.std_error, 1e-300);
            worst_p2 = std::max(worst_p2, margin2);
        }
        report.add({"axioms.adapted-increment-mean",
                    "worst |sup-mean| of xi (B_T - B_t) in standard errors",
                    "martingale.increment-mean-zero",
                    worst_p1 <= 3.0 ? CaseStatus::pass : CaseStatus::fail, worst_p1, 0.0,
                    3.0, false});
        report.add({"axioms.adapted-increment-energy",
                    "worst sup-mean of xi^2((B_T-B_t)^2 - sigma_hi^2(T-t)) in std errors",
                    "martingale.increment-energy",
                    worst_p2 <= 3.0 ? CaseStatus::pass : CaseStatus::fail, worst_p2, 0.0,
                    3.0, false});

        // per-scenario means table for the energy statistic (first shape)
        PlotTable table;
        table.name = "scenario_means";
        table.headers = {"control_id", "mean", "std_error"};
        const ExpectationEstimate rep = estimate_from_batch(batch, 1, cfg.n_paths);
        for (const auto& s : rep.per_scenario) {
            table.row_labels.push_back(s.control_id);
            table.rows.push_back({s.mean, s.std_error});
        }
        report.tables.push_back(std::move(table));
    }

    report.wall_seconds = timer.seconds();
    return report;
}

} // namespace gexp::suites
