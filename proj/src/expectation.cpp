#include "gexp/expectation.hpp"

#include <cmath>
#include <stdexcept>

#include "gexp/parallel.hpp"

namespace gexp {

void for_each_path(const VolatilityControl& control, std::uint32_t control_slot,
                   const EvaluationConfig& config,
                   const std::function<void(std::int64_t, const SamplePath&)>& visit) {
    parallel_for_blocks(config.n_paths, config.jobs,
                        [&](std::int64_t lo, std::int64_t hi) {
                            SamplePath buffer;
                            for (std::int64_t i = lo; i < hi; ++i) {
                                const auto idx = static_cast<std::uint64_t>(i);
                                generate_path_into(buffer, control, config.grid,
                                                   config.band,
                                                   config.seeds.stream(control_slot, idx),
                                                   idx);
                                visit(i, buffer);
                            }
                        });
}

BatchResult evaluate_payoffs(const ControlSet& controls,
                             std::span<const PayoffFunctional> payoffs,
                             const EvaluationConfig& config) {
    if (controls.empty()) {
        throw std::invalid_argument("evaluate_payoffs: empty control set");
    }
    if (!config.grid) throw std::invalid_argument("evaluate_payoffs: no grid");
    if (config.n_paths < 1) throw std::invalid_argument("evaluate_payoffs: n_paths >= 1");
    const double horizon = config.grid->horizon();
    for (const auto& p : payoffs) {
        if (p.horizon > horizon * (1.0 + 1e-12)) {
            throw std::invalid_argument("evaluate_payoffs: payoff '" + p.id +
                                        "' looks beyond the grid horizon");
        }
    }

    BatchResult result;
    result.payoff_ids.reserve(payoffs.size());
    for (const auto& p : payoffs) result.payoff_ids.push_back(p.id);

    const auto n_payoffs = payoffs.size();
    std::vector<double> slab(static_cast<std::size_t>(config.n_paths) * n_payoffs);

    for (std::size_t c = 0; c < controls.size(); ++c) {
        const std::uint32_t slot = config.common_random_numbers
                                       ? SeedPolicy::shared_slot
                                       : static_cast<std::uint32_t>(c);
        for_each_path(controls[c], slot, config,
                      [&](std::int64_t i, const SamplePath& path) {
                          double* row = slab.data() +
                                        static_cast<std::size_t>(i) * n_payoffs;
                          for (std::size_t p = 0; p < n_payoffs; ++p) {
                              row[p] = payoffs[p].eval(path);
                          }
                      });
        std::vector<MeanSe> per_payoff(n_payoffs);
        std::vector<double> column(static_cast<std::size_t>(config.n_paths));
        for (std::size_t p = 0; p < n_payoffs; ++p) {
            for (std::int64_t i = 0; i < config.n_paths; ++i) {
                column[static_cast<std::size_t>(i)] =
                    slab[static_cast<std::size_t>(i) * n_payoffs + p];
            }
            per_payoff[p] = mean_se(column);
        }
        result.control_ids.push_back(controls[c].id());
        result.stats.push_back(std::move(per_payoff));
    }
    return result;
}

ExpectationEstimate estimate_from_batch(const BatchResult& batch,
                                        std::size_t payoff_index,
                                        std::int64_t n_paths) {
    ExpectationEstimate est;
    est.n_paths = n_paths;
    est.n_scenarios = static_cast<int>(batch.stats.size());
    est.per_scenario.reserve(batch.stats.size());
    for (std::size_t c = 0; c < batch.stats.size(); ++c) {
        const MeanSe& ms = batch.stats[c][payoff_index];
        est.per_scenario.push_back({batch.control_ids[c], ms.mean, ms.se});
        if (est.argmax_index < 0 || ms.mean > est.value) {
            est.value = ms.mean;
            est.std_error = ms.se;
            est.argmax_index = static_cast<int>(c);
            est.argmax_control_id = batch.control_ids[c];
        }
    }
    return est;
}

ExpectationEstimate sup_expectation(const PayoffFunctional& payoff,
                                    const ControlSet& controls,
                                    const EvaluationConfig& config) {
    const PayoffFunctional payoffs[] = {payoff};
    const BatchResult batch = evaluate_payoffs(controls, payoffs, config);
    return estimate_from_batch(batch, 0, config.n_paths);
}

ExpectationEstimate lower_expectation(const PayoffFunctional& payoff,
                                      const ControlSet& controls,
                                      const EvaluationConfig& config) {
    PayoffFunctional negated{payoff.id + ".neg", payoff.horizon,
                             [eval = payoff.eval](const SamplePath& path) {
                                 return -eval(path);
                             }};
    ExpectationEstimate est = sup_expectation(negated, controls, config);
    est.value = -est.value;
    for (auto& s : est.per_scenario) s.mean = -s.mean;
    return est;
}

ExpectationEstimate capacity_estimate(const PathPredicate& event,
                                      const ControlSet& controls,
                                      const EvaluationConfig& config) {
    PayoffFunctional indicator{event.id, event.horizon,
                               [eval = event.eval](const SamplePath& path) {
                                   return eval(path) ? 1.0 : 0.0;
                               }};
    return sup_expectation(indicator, controls, config);
}

double gnormal_abs_moment(double p, const VolatilityBand& band) {
    if (!(p >= 1.0)) {
        throw std::domain_error("gnormal_abs_moment: requires p >= 1");
    }
    // E|X|^p for X ~ N(0, s^2):  s^p 2^{p/2} Gamma((p+1)/2) / sqrt(pi),
    // with s^2 = 2 G(1) = sigma_hi^2.
    const double s = band.sigma_hi;
    const double log_moment = p * std::log(s) + 0.5 * p * std::log(2.0) +
                              std::lgamma(0.5 * (p + 1.0)) -
                              0.5 * std::log(M_PI);
    return std::exp(log_moment);
}

} // namespace gexp
