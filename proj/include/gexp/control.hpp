#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "gexp/band.hpp"

namespace gexp {

// One admissible volatility scenario. Constant and piecewise-deterministic
// controls depend on time only; state-feedback controls are pure functions
// of (t, current Brownian value), which keeps them adapted by construction.
class VolatilityControl {
public:
    using FeedbackRule = std::function<double(double t, double b)>;

    static VolatilityControl constant(double sigma);
    // Left-closed steps: sigma(t) = values[j] for t in [times[j], times[j+1]).
    static VolatilityControl piecewise(std::vector<double> times,
                                       std::vector<double> values);
    static VolatilityControl state_feedback(std::string id, FeedbackRule rule);

    double sigma(double t, double b) const;
    const std::string& id() const { return id_; }

private:
    struct Constant { double sigma; };
    struct Piecewise { std::vector<double> times, values; };
    struct Feedback { FeedbackRule rule; };

    VolatilityControl(std::string id, std::variant<Constant, Piecewise, Feedback> impl)
        : id_(std::move(id)), impl_(std::move(impl)) {}

    std::string id_;
    std::variant<Constant, Piecewise, Feedback> impl_;
};

using ControlSet = std::vector<VolatilityControl>;

// Default scenario family: constant controls on an evenly spaced band grid
// plus sign-feedback (bang-bang) controls probing path dependence. The
// supremum over this family approximates the sublinear expectation from
// below; constant controls already attain it for moment-type payoffs.
ControlSet default_control_set(const VolatilityBand& band,
                               int n_constant = 11,
                               bool bang_bang = true,
                               double feedback_scale = 1.0);

} // namespace gexp
