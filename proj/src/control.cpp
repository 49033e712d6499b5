#include "gexp/control.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace gexp {

VolatilityControl VolatilityControl::constant(double sigma) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "const(%.6g)", sigma);
    return VolatilityControl(buf, Constant{sigma});
}

VolatilityControl VolatilityControl::piecewise(std::vector<double> times,
                                               std::vector<double> values) {
    if (times.size() != values.size() || times.empty()) {
        throw std::invalid_argument("piecewise control: times/values size mismatch");
    }
    if (times.front() != 0.0 || !std::is_sorted(times.begin(), times.end())) {
        throw std::invalid_argument("piecewise control: breakpoints must start at 0 and increase");
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "piecewise(%zu)", times.size());
    return VolatilityControl(buf, Piecewise{std::move(times), std::move(values)});
}

VolatilityControl VolatilityControl::state_feedback(std::string id, FeedbackRule rule) {
    if (!rule) throw std::invalid_argument("state_feedback control: empty rule");
    return VolatilityControl(std::move(id), Feedback{std::move(rule)});
}

double VolatilityControl::sigma(double t, double b) const {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return c.sigma;
            } else if constexpr (std::is_same_v<T, Piecewise>) {
                auto it = std::upper_bound(c.times.begin(), c.times.end(), t);
                const auto j = static_cast<std::size_t>(
                    std::max<std::ptrdiff_t>(0, it - c.times.begin() - 1));
                return c.values[j];
            } else {
                return c.rule(t, b);
            }
        },
        impl_);
}

ControlSet default_control_set(const VolatilityBand& band, int n_constant,
                               bool bang_bang, double feedback_scale) {
    if (n_constant < 1) throw std::invalid_argument("default_control_set: n_constant >= 1");
    ControlSet controls;
    const double lo = band.sigma_lo, hi = band.sigma_hi;
    if (n_constant == 1 || band.degenerate()) {
        controls.push_back(VolatilityControl::constant(hi));
    } else {
        for (int j = 0; j < n_constant; ++j) {
            const double s = lo + (hi - lo) * static_cast<double>(j) /
                                      static_cast<double>(n_constant - 1);
            controls.push_back(VolatilityControl::constant(s));
        }
    }
    if (bang_bang && !band.degenerate()) {
        const double th = 0.5 * hi * feedback_scale;
        controls.push_back(VolatilityControl::state_feedback(
            "bang(x>0:hi)", [lo, hi](double, double b) { return b > 0.0 ? hi : lo; }));
        controls.push_back(VolatilityControl::state_feedback(
            "bang(x>0:lo)", [lo, hi](double, double b) { return b > 0.0 ? lo : hi; }));
        controls.push_back(VolatilityControl::state_feedback(
            "bang(|x|>s:hi)",
            [lo, hi, th](double, double b) { return std::abs(b) > th ? hi : lo; }));
        controls.push_back(VolatilityControl::state_feedback(
            "bang(|x|>s:lo)",
            [lo, hi, th](double, double b) { return std::abs(b) > th ? lo : hi; }));
    }
    return controls;
}

} // namespace gexp
