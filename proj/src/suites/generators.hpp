#pragma once

#include <cstdint>
#include <vector>

#include "gexp/process.hpp"
#include "gexp/stopping.hpp"

namespace gexp::suites {

// Deterministic uniform source for test-corpus generation, separate from
// the path-simulation streams.
class DrawSource {
public:
    explicit DrawSource(std::uint64_t seed) : stream_(mix64(seed)) {}

    double uniform() { return stream_.uniform(counter_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

private:
    NormalStream stream_;
    std::uint64_t counter_ = 0;
};

// Randomized simple processes: up to `max_segments` segments with
// breakpoints on grid nodes and coefficients xi_j = a tanh(b B_{s_j}) + c
// clamped to the declared bound - bounded, Lipschitz in the path value at
// the segment start, and adapted by construction.
class ProcessGenerator {
public:
    ProcessGenerator(std::uint64_t seed, GridPtr grid, double bound = 2.0,
                     int max_segments = 8)
        : draws_(seed), grid_(std::move(grid)), bound_(bound),
          max_segments_(max_segments) {}

    SimpleProcess next();

    double bound() const { return bound_; }

private:
    DrawSource draws_;
    GridPtr grid_;
    double bound_;
    int max_segments_;
};

// Sparse evaluation of a simple process along one path without touching
// every grid node: final Ito integral, final int eta^2 dt, and the maximal
// absolute value of the running integral over all grid nodes.
struct SimpleProcessStats {
    double ito_final = 0.0;
    double energy_final = 0.0;  // int_0^T eta^2 dt
    double max_abs_running = 0.0;
};

// Range max/min of the Brownian values, O(1) per query after O(N log N)
// build; shared across many simple processes on the same path.
class RangeExtrema {
public:
    explicit RangeExtrema(const Eigen::ArrayXd& values);
    double max_in(Index lo, Index hi) const;  // inclusive node range
    double min_in(Index lo, Index hi) const;

private:
    std::vector<Eigen::ArrayXd> max_table_, min_table_;
    std::vector<int> log2_;
};

struct CompiledSimpleProcess {
    std::vector<Index> nodes;       // segment boundaries as node indices
    std::vector<double> coefficients;  // evaluated xi_j for one path
};

// Breakpoint-to-node resolution, shared across all paths on one grid.
std::vector<Index> compile_nodes(const SimpleProcess& eta, const TimeGrid& grid);

CompiledSimpleProcess compile_on_path(const SimpleProcess& eta, const SamplePath& path);

// Same with precomputed node indices (hot path of the inequality sweeps).
void compile_on_path(const SimpleProcess& eta, const std::vector<Index>& nodes,
                     const SamplePath& path, CompiledSimpleProcess& out);

SimpleProcessStats evaluate_simple(const CompiledSimpleProcess& eta,
                                   const SamplePath& path,
                                   const RangeExtrema& extrema);

// Bounded-Lipschitz functionals of (B_{T/2}, B_T, <B>_T) with values on the
// lattice q Z, |value| <= 4. Lattice values make sums, differences and
// dyadic scalings exact in double precision, so the sublinear axioms can be
// asserted with zero tolerance.
struct QuantizedFunctional {
    double a1 = 0.0, b1 = 1.0;
    double a2 = 0.0, b2 = 1.0;
    double a3 = 0.0;
    double offset = 0.0;

    static constexpr double lattice = 1.0 / 65536.0;

    double operator()(double b_half, double b_end, double qv_end) const;
    static QuantizedFunctional random(DrawSource& draws);
};

// Stopping-time corpus for the exact stopped-integral identity; `kind`
// cycles through deterministic, one/two-sided hitting, integral-threshold
// and min-of combinations.
StoppingTime random_stopping_time(DrawSource& draws, const GridPtr& grid,
                                  const VolatilityBand& band,
                                  const GridProcess& eta, int kind);

} // namespace gexp::suites
