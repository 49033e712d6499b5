#include "gexp/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace gexp {

namespace {

GridStop stop_at(const SamplePath& path, Index k) {
    return {k, path.grid->point(k)};
}

} // namespace

// |v|^p with the integer cases computed by plain arithmetic, so threshold
// scans agree bitwise with independently written accumulations.
double power_term(double v, double power) {
    if (power == 1.0) return std::abs(v);
    if (power == 2.0) return v * v;
    return std::pow(std::abs(v), power);
}

namespace {

struct DeterministicRule final : StoppingTime::Rule {
    double t;
    explicit DeterministicRule(double t_) : t(t_) {}
    GridStop stop(const SamplePath& path) const override {
        const Index k = std::min(path.grid->ceil_index(t), path.n_steps());
        return stop_at(path, k);
    }
    std::string id() const override { return "det(" + std::to_string(t) + ")"; }
};

struct HittingRule final : StoppingTime::Rule {
    GridProcess monitored;
    double threshold;
    Direction dir;
    std::string label;

    GridStop stop(const SamplePath& path) const override {
        // Forward scan over nodes; node k uses path data on [0, t_k] only.
        const Eigen::ArrayXd values = sample_nodes(monitored, path);
        for (Index k = 0; k < path.n_nodes(); ++k) {
            const bool hit = dir == Direction::up ? values[k] >= threshold
                                                  : values[k] <= threshold;
            if (hit) return stop_at(path, k);
        }
        return stop_at(path, path.n_steps());
    }
    std::string id() const override { return label; }
};

struct IntegralThresholdRule final : StoppingTime::Rule {
    GridProcess eta;
    double level;
    double power;

    GridStop stop(const SamplePath& path) const override {
        const Eigen::ArrayXd nodes = sample_nodes(eta, path);
        const auto& dt = path.grid->dt();
        // running[k] = int_0^{t_k} |eta|^power ds; the crossing inside step
        // k-1 is reported at node k (upward snap).
        double running = 0.0;
        for (Index k = 0; k < path.n_steps(); ++k) {
            running += power_term(nodes[k], power) * dt[k];
            if (running > level) return stop_at(path, k + 1);
        }
        return stop_at(path, path.n_steps());
    }
    std::string id() const override {
        return "int_threshold(" + eta.id + ",p=" + std::to_string(power) +
               ",n=" + std::to_string(level) + ")";
    }
};

struct MinRule final : StoppingTime::Rule {
    StoppingTime a, b;
    MinRule(StoppingTime a_, StoppingTime b_) : a(std::move(a_)), b(std::move(b_)) {}
    GridStop stop(const SamplePath& path) const override {
        const GridStop sa = a.evaluate(path);
        const GridStop sb = b.evaluate(path);
        return sa.index <= sb.index ? sa : sb;
    }
    std::string id() const override { return "min(" + a.id() + "," + b.id() + ")"; }
};

GridProcess monitored_process(Monitored monitored) {
    switch (monitored) {
        case Monitored::brownian: return brownian_process();
        case Monitored::abs_brownian: {
            GridProcess out;
            out.id = "|B|";
            out.rule = [](Index k, const SamplePath& p) { return std::abs(p.b[k]); };
            out.bulk = [](const SamplePath& p) { return p.b.abs().eval(); };
            return out;
        }
        case Monitored::quadratic_variation: {
            GridProcess out;
            out.id = "<B>";
            out.rule = [](Index k, const SamplePath& p) { return p.qv[k]; };
            out.bulk = [](const SamplePath& p) { return p.qv; };
            return out;
        }
    }
    throw std::logic_error("monitored_process: unreachable");
}

GridProcess indicator_impl(const StoppingTime& tau, bool strict) {
    GridProcess out;
    out.id = std::string(strict ? "pre[0," : "ind[0,") + tau.id() + "]";
    out.bound = 1.0;
    out.rule = [tau, strict](Index k, const SamplePath& path) {
        const Index kappa = tau.evaluate(path).index;
        return (strict ? k < kappa : k <= kappa) ? 1.0 : 0.0;
    };
    out.bulk = [tau, strict](const SamplePath& path) {
        const Index kappa = tau.evaluate(path).index;
        Eigen::ArrayXd values = Eigen::ArrayXd::Zero(path.n_nodes());
        const Index fill = strict ? kappa : kappa + 1;
        values.head(std::min(fill, path.n_nodes())).setOnes();
        return values;
    };
    return out;
}

} // namespace

StoppingTime StoppingTime::deterministic(double t) {
    return StoppingTime(std::make_shared<DeterministicRule>(t));
}

StoppingTime StoppingTime::hitting(Monitored monitored, double threshold, Direction dir) {
    auto rule = std::make_shared<HittingRule>();
    rule->monitored = monitored_process(monitored);
    rule->threshold = threshold;
    rule->dir = dir;
    rule->label = "hit(" + rule->monitored.id + (dir == Direction::up ? ">=" : "<=") +
                  std::to_string(threshold) + ")";
    return StoppingTime(std::move(rule));
}

StoppingTime StoppingTime::hitting(GridProcess monitored, double threshold, Direction dir) {
    auto rule = std::make_shared<HittingRule>();
    rule->label = "hit(" + monitored.id + (dir == Direction::up ? ">=" : "<=") +
                  std::to_string(threshold) + ")";
    rule->monitored = std::move(monitored);
    rule->threshold = threshold;
    rule->dir = dir;
    return StoppingTime(std::move(rule));
}

StoppingTime StoppingTime::integral_threshold(GridProcess eta, double level, double power) {
    if (!(level > 0.0)) throw std::invalid_argument("integral_threshold: level > 0");
    auto rule = std::make_shared<IntegralThresholdRule>();
    rule->eta = std::move(eta);
    rule->level = level;
    rule->power = power;
    return StoppingTime(std::move(rule));
}

StoppingTime StoppingTime::min_of(StoppingTime a, StoppingTime b) {
    return StoppingTime(std::make_shared<MinRule>(std::move(a), std::move(b)));
}

double dyadic_upper(const StoppingTime& tau, int level, const SamplePath& path) {
    if (level < 1) throw std::invalid_argument("dyadic_upper: level >= 1");
    const double horizon = path.grid->horizon();
    const double value = tau.evaluate(path).time;
    const double cells = std::exp2(level);
    double k = std::ceil(value * cells / horizon);
    // rounding in value * cells / horizon must never put the mesh point
    // below the stop itself
    if (k * horizon / cells < value) k += 1.0;
    return std::min(horizon, k * horizon / cells);
}

GridProcess indicator_process(const StoppingTime& tau) {
    return indicator_impl(tau, /*strict=*/false);
}

GridProcess pre_stop_indicator(const StoppingTime& tau) {
    return indicator_impl(tau, /*strict=*/true);
}

double stopped_integral(const GridProcess& eta, const StoppingTime& tau,
                        double t, const SamplePath& path) {
    const Index k_t = path.grid->index_of(t);
    const Index kappa = tau.evaluate(path).index;
    const IntegralPath integral = ito_integral(eta, path);
    return integral.values[std::min(k_t, kappa)];
}

LocalizationSequence deterministic_localization(double horizon) {
    return {"sigma_det",
            [horizon](int m) {
                const double t = horizon * (1.0 - std::exp2(-m));
                return StoppingTime::deterministic(t);
            }};
}

LocalizationSequence hitting_localization(double base, double step) {
    return {"sigma_hit",
            [base, step](int m) {
                return StoppingTime::hitting(Monitored::abs_brownian,
                                             base + step * m, Direction::up);
            }};
}

Localization localize(const GridProcess& eta, LocalizeRule rule,
                      const LocalizationSequence& sequence, int n) {
    if (n < 1) throw std::invalid_argument("localize: n >= 1");
    const double power = rule == LocalizeRule::l1_threshold ? 1.0 : 2.0;
    StoppingTime tau_n = StoppingTime::min_of(
        StoppingTime::integral_threshold(eta, static_cast<double>(n), power),
        sequence.at_level(n));
    GridProcess masked = product(indicator_process(tau_n), eta);
    masked.id = "loc(" + eta.id + ",n=" + std::to_string(n) + ")";
    return {std::move(masked), std::move(tau_n)};
}

} // namespace gexp
