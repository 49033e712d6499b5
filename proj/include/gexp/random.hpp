#pragma once

#include <array>
#include <cstdint>

namespace gexp {

// Stateless 64-bit avalanche mix (the splitmix64 finalizer). Used to turn
// structured seed material (master seed, control slot, path index) into
// uncorrelated stream keys.
std::uint64_t mix64(std::uint64_t x);

// Philox-4x32 with 10 rounds: a counter-based generator. A (key, counter)
// pair maps to 128 pseudo-random bits; any position of a stream can be
// generated in O(1), independent of evaluation order, which is what makes
// ensembles reproducible under arbitrary parallelism.
struct Philox4x32 {
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key);
};

// A deterministic stream of N(0,1) (and U(0,1)) draws identified by a
// 64-bit key. Draw i is a pure function of (key, i): Philox supplies the
// bits, Box-Muller maps pairs of uniforms to pairs of normals.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t key)
        : key_{static_cast<std::uint32_t>(key),
               static_cast<std::uint32_t>(key >> 32)} {}

    // i-th N(0,1) draw of this stream.
    double normal(std::uint64_t i) const;

    // i-th U(0,1) draw (open interval, never exactly 0 or 1).
    double uniform(std::uint64_t i) const;

    std::uint64_t key() const {
        return static_cast<std::uint64_t>(key_[0]) |
               (static_cast<std::uint64_t>(key_[1]) << 32);
    }

private:
    Philox4x32::Key key_;
};

// Stream derivation rule: (master_seed, control slot, path index) -> key.
// Identical inputs give bit-identical streams; distinct inputs give
// independent streams. Evaluations that must share draws across scenarios
// (common random numbers) simply pass the same slot for every control.
struct SeedPolicy {
    std::uint64_t master_seed = 0;

    // Slot used when all scenarios share the same underlying draws.
    static constexpr std::uint32_t shared_slot = 0xffffffffu;

    std::uint64_t stream_key(std::uint32_t control_slot,
                             std::uint64_t path_index) const;

    NormalStream stream(std::uint32_t control_slot,
                        std::uint64_t path_index) const {
        return NormalStream(stream_key(control_slot, path_index));
    }
};

} // namespace gexp
