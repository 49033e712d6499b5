#pragma once

#include <algorithm>

namespace gexp {

// Volatility band [sigma_lo, sigma_hi]; every admissible scenario draws
// its instantaneous volatility from this interval.
struct VolatilityBand {
    double sigma_lo = 0.0;
    double sigma_hi = 1.0;

    VolatilityBand(double lo, double hi);

    bool contains(double sigma) const {
        return sigma >= sigma_lo && sigma <= sigma_hi;
    }
    double lo2() const { return sigma_lo * sigma_lo; }
    double hi2() const { return sigma_hi * sigma_hi; }
    bool degenerate() const { return sigma_lo == sigma_hi; }
};

// The sublinear generator induced by the band; in one dimension
// G(a) = (sigma_hi^2 a^+ - sigma_lo^2 a^-) / 2.
class GFunction {
public:
    explicit GFunction(VolatilityBand band) : band_(band) {}

    double operator()(double a) const {
        return 0.5 * (band_.hi2() * std::max(a, 0.0) -
                      band_.lo2() * std::max(-a, 0.0));
    }

    const VolatilityBand& band() const { return band_; }

private:
    VolatilityBand band_;
};

} // namespace gexp
