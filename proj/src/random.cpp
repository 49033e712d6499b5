#include "gexp/random.hpp"

#include <cmath>

namespace gexp {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xd2511f53u;
constexpr std::uint32_t kPhiloxM1 = 0xcd9e8d57u;
constexpr std::uint32_t kPhiloxW0 = 0x9e3779b9u;
constexpr std::uint32_t kPhiloxW1 = 0xbb67ae85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b,
                    std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Block round_once(const Philox4x32::Block& c,
                                    const Philox4x32::Key& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// 53 uniformly random bits -> double in the open interval (0,1).
inline double bits_to_open_unit(std::uint64_t bits53) {
    return (static_cast<double>(bits53) + 0.5) * 0x1p-53;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

Philox4x32::Block Philox4x32::generate(Block counter, Key key) {
    counter = round_once(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = round_once(counter, key);
    }
    return counter;
}

double NormalStream::normal(std::uint64_t i) const {
    // One Philox block yields two uniforms, hence one Box-Muller pair;
    // draw 2m uses the cosine branch, draw 2m+1 the sine branch.
    const std::uint64_t block_index = i >> 1;
    const Philox4x32::Block ctr{
        static_cast<std::uint32_t>(block_index),
        static_cast<std::uint32_t>(block_index >> 32), 0u, 0u};
    const Philox4x32::Block out = Philox4x32::generate(ctr, key_);

    const std::uint64_t bits_a =
        (static_cast<std::uint64_t>(out[0]) << 32 | out[1]) >> 11;
    const std::uint64_t bits_b =
        (static_cast<std::uint64_t>(out[2]) << 32 | out[3]) >> 11;
    const double u1 = bits_to_open_unit(bits_a);
    const double u2 = bits_to_open_unit(bits_b);

    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    return (i & 1u) ? radius * std::sin(angle) : radius * std::cos(angle);
}

double NormalStream::uniform(std::uint64_t i) const {
    const std::uint64_t block_index = i >> 1;
    const Philox4x32::Block ctr{
        static_cast<std::uint32_t>(block_index),
        static_cast<std::uint32_t>(block_index >> 32), 1u, 0u};
    const Philox4x32::Block out = Philox4x32::generate(ctr, key_);
    const int lane = static_cast<int>(i & 1u) * 2;
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(out[lane]) << 32 | out[lane + 1]) >> 11;
    return bits_to_open_unit(bits);
}

std::uint64_t SeedPolicy::stream_key(std::uint32_t control_slot,
                                     std::uint64_t path_index) const {
    const std::uint64_t tag =
        (static_cast<std::uint64_t>(control_slot) << 32) ^ path_index;
    return mix64(master_seed ^ mix64(tag));
}

} // namespace gexp
