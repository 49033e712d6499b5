#include "gexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gexp {

double ordered_sum(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

double ordered_mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double m = ordered_sum(values) / static_cast<double>(values.size());
    return std::clamp(m, *lo_it, *hi_it);
}

MeanSe mean_se(std::span<const double> values) {
    const double m = ordered_mean(values);
    const auto n = static_cast<double>(values.size());
    if (values.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double v : values) {
        const double d = v - m;
        ss += d * d;
    }
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

double kurtosis(std::span<const double> values) {
    if (values.size() < 4) throw std::invalid_argument("kurtosis needs >= 4 samples");
    const double m = ordered_mean(values);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(values.size());
    m2 /= n;
    m4 /= n;
    return m4 / (m2 * m2);
}

} // namespace gexp
