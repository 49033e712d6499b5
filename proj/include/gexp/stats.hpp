#pragma once

#include <Eigen/Dense>
#include <span>

namespace gexp {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// Fixed-order (index 0..n-1) naive summation. Monotone in the inputs,
// which the exact axiom checks rely on; compensated schemes are not.
double ordered_sum(std::span<const double> values);

// Sample mean, clamped into [min, max] of the data so that constant
// samples average to the constant exactly.
double ordered_mean(std::span<const double> values);

// Mean and standard error of the mean (unbiased variance, fixed order).
MeanSe mean_se(std::span<const double> values);

// Excess-free kurtosis estimator E[(x-m)^4]/s^4; ~3 for Gaussian data.
double kurtosis(std::span<const double> values);

inline std::span<const double> as_span(const Eigen::ArrayXd& a) {
    return {a.data(), static_cast<std::size_t>(a.size())};
}

} // namespace gexp
