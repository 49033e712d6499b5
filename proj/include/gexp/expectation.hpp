#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gexp/path.hpp"
#include "gexp/stats.hpp"

namespace gexp {

// A random variable: deterministic function of the path restricted to
// [0, horizon].
struct PayoffFunctional {
    std::string id;
    double horizon = 0.0;
    std::function<double(const SamplePath&)> eval;
};

// Grid-measurable event.
struct PathPredicate {
    std::string id;
    double horizon = 0.0;
    std::function<bool(const SamplePath&)> eval;
};

struct ScenarioStats {
    std::string control_id;
    double mean = 0.0;
    double std_error = 0.0;
};

// sup-over-scenarios estimate; `value` is the maximum entry of the
// per-scenario means table and `std_error` the argmax scenario's.
struct ExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::string argmax_control_id;
    int argmax_index = -1;
    std::vector<ScenarioStats> per_scenario;
    std::int64_t n_paths = 0;
    int n_scenarios = 0;
};

struct EvaluationConfig {
    GridPtr grid;
    VolatilityBand band{0.0, 1.0};
    std::int64_t n_paths = 1024;
    SeedPolicy seeds;
    // With common random numbers every control sees the same normal draws
    // per path index, which turns the sublinear-expectation axioms into
    // exact per-sample statements. Without it, controls get independent
    // streams keyed by their slot.
    bool common_random_numbers = true;
    int jobs = 1;
};

// Per-(control, payoff) sample means over one common ensemble sweep.
// Reductions run in fixed path order, so results do not depend on `jobs`.
struct BatchResult {
    std::vector<std::string> control_ids;
    std::vector<std::string> payoff_ids;
    // stats[c][p] for control c, payoff p.
    std::vector<std::vector<MeanSe>> stats;
};

BatchResult evaluate_payoffs(const ControlSet& controls,
                             std::span<const PayoffFunctional> payoffs,
                             const EvaluationConfig& config);

// Streaming visitor over the ensemble of one control: called once per path
// in any order; per-path results must be written to disjoint slots.
void for_each_path(const VolatilityControl& control, std::uint32_t control_slot,
                   const EvaluationConfig& config,
                   const std::function<void(std::int64_t, const SamplePath&)>& visit);

ExpectationEstimate sup_expectation(const PayoffFunctional& payoff,
                                    const ControlSet& controls,
                                    const EvaluationConfig& config);

// Conjugate -sup(-X); shares the ensemble with sup_expectation by
// construction (same seeds, same draws). The returned table holds the
// per-scenario means of X itself, so here `value` is its minimum entry.
ExpectationEstimate lower_expectation(const PayoffFunctional& payoff,
                                      const ControlSet& controls,
                                      const EvaluationConfig& config);

// Choquet capacity: sup over scenarios of the empirical event frequency.
ExpectationEstimate capacity_estimate(const PathPredicate& event,
                                      const ControlSet& controls,
                                      const EvaluationConfig& config);

// p-th absolute moment of the G-normal law: the centered Gaussian moment at
// the maximal variance sigma_hi^2, in closed form via the Gamma function.
// Requires p >= 1.
double gnormal_abs_moment(double p, const VolatilityBand& band);

ExpectationEstimate estimate_from_batch(const BatchResult& batch,
                                        std::size_t payoff_index,
                                        std::int64_t n_paths);

} // namespace gexp
