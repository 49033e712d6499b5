#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gexp/process.hpp"

namespace gexp {

struct GridStop {
    Index index = 0;  // node index kappa with time(kappa) = value
    double time = 0.0;
};

enum class Monitored { brownian, abs_brownian, quadratic_variation };
enum class Direction { up, down };

// Time-valued path functional whose occurrence by t_k is decidable from the
// path restricted to [0, t_k]. Evaluation snaps upward to grid nodes and
// defaults to the horizon when the rule never triggers.
class StoppingTime {
public:
    struct Rule {
        virtual ~Rule() = default;
        virtual GridStop stop(const SamplePath& path) const = 0;
        virtual std::string id() const = 0;
    };

    GridStop evaluate(const SamplePath& path) const { return rule_->stop(path); }
    const std::string& id() const { return id_; }

    static StoppingTime deterministic(double t);
    static StoppingTime hitting(Monitored monitored, double threshold, Direction dir);
    static StoppingTime hitting(GridProcess monitored, double threshold, Direction dir);
    // First time the running integral int_0^t |eta|^power ds exceeds level.
    static StoppingTime integral_threshold(GridProcess eta, double level,
                                           double power = 1.0);
    static StoppingTime min_of(StoppingTime a, StoppingTime b);

    explicit StoppingTime(std::shared_ptr<const Rule> rule)
        : rule_(std::move(rule)), id_(rule_->id()) {}

private:
    std::shared_ptr<const Rule> rule_;
    std::string id_;
};

// |v|^power as used by integral-threshold scans (p = 1, 2 computed by
// plain arithmetic).
double power_term(double v, double power);

// Smallest level-n dyadic time (mesh T / 2^n) at or above the stop;
// satisfies 0 <= result - tau <= T / 2^n on every path.
double dyadic_upper(const StoppingTime& tau, int level, const SamplePath& path);

// Node indicator of [0, tau]: 1 at grid times <= tau, else 0.
GridProcess indicator_process(const StoppingTime& tau);

// Left-limit sampling of the same indicator: 1 at grid times strictly
// before tau. Masking an integrand with this process reproduces the
// stopped integral exactly on the grid (the closed indicator would also
// count the step departing at tau).
GridProcess pre_stop_indicator(const StoppingTime& tau);

// int_0^{t ^ tau} eta dB: the running Ito integral read at t ^ tau.
double stopped_integral(const GridProcess& eta, const StoppingTime& tau,
                        double t, const SamplePath& path);

// Increasing stopping times sigma_m -> horizon.
struct LocalizationSequence {
    std::string id;
    std::function<StoppingTime(int m)> at_level;
};

// sigma_m = first node >= T (1 - 2^-m): deterministic levels increasing to T.
LocalizationSequence deterministic_localization(double horizon);
// sigma_m = first time |B| >= base + m * step (capped at T).
LocalizationSequence hitting_localization(double base, double step);

enum class LocalizeRule { l1_threshold, l2_threshold };

struct Localization {
    GridProcess process;  // indicator-masked integrand
    StoppingTime tau;
};

// tau_n = inf{t : int_0^t |eta|^p ds > n} ^ sigma_n with p = 1 or 2; returns
// the masked process and tau_n. On paths where the threshold never triggers
// and sigma_n = T the masked process equals eta at every node.
Localization localize(const GridProcess& eta, LocalizeRule rule,
                      const LocalizationSequence& sequence, int n);

} // namespace gexp
