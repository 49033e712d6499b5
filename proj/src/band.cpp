#include "gexp/band.hpp"

#include <stdexcept>

namespace gexp {

VolatilityBand::VolatilityBand(double lo, double hi) : sigma_lo(lo), sigma_hi(hi) {
    if (!(lo >= 0.0) || !(hi >= lo) || !(hi > 0.0)) {
        throw std::invalid_argument("VolatilityBand: need 0 <= sigma_lo <= sigma_hi, sigma_hi > 0");
    }
}

} // namespace gexp
