#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gexp/band.hpp"
#include "gexp/control.hpp"
#include "gexp/grid.hpp"
#include "gexp/random.hpp"

namespace gexp {

// One discretized trajectory of (B, <B>) under a single scenario.
// Node values are prefix sums of the stored increments: b[k+1] = b[k] + db[k]
// and qv[k+1] = qv[k] + dqv[k], accumulated in index order, so integrating
// the constant 1 against db (or dqv) reproduces b (or qv) bit-for-bit.
// The quadratic variation accrues analytically as sigma_k^2 dt_k.
struct SamplePath {
    GridPtr grid;
    Eigen::ArrayXd b;    // Brownian values per node, b[0] = 0
    Eigen::ArrayXd qv;   // quadratic variation per node, qv[0] = 0
    Eigen::ArrayXd db;   // per-step Brownian increments
    Eigen::ArrayXd dqv;  // per-step quadratic-variation increments
    std::string control_id;
    std::uint64_t path_index = 0;
    std::uint64_t stream_key = 0;

    Index n_steps() const { return grid->n_steps(); }
    Index n_nodes() const { return grid->n_nodes(); }

    // Coarse view of the same trajectory on every factor-th node.
    SamplePath subsample(Index factor) const;
};

// Euler walk with left-point control evaluation: sigma_k = control(t_k, b[k]),
// db_k = sigma_k sqrt(dt_k) Z_k, dqv_k = sigma_k^2 dt_k. Throws when the
// control emits a volatility outside the band.
SamplePath generate_path(const VolatilityControl& control, const GridPtr& grid,
                         const VolatilityBand& band, const NormalStream& stream,
                         std::uint64_t path_index = 0);

// In-place variant for streaming evaluation over large ensembles.
void generate_path_into(SamplePath& out, const VolatilityControl& control,
                        const GridPtr& grid, const VolatilityBand& band,
                        const NormalStream& stream, std::uint64_t path_index);

// Independent paths with streams derived from (seed policy, control slot,
// path index); bit-identical regardless of parallelism.
std::vector<SamplePath> generate_ensemble(const VolatilityControl& control,
                                          const GridPtr& grid,
                                          const VolatilityBand& band,
                                          std::int64_t n_paths,
                                          const SeedPolicy& seeds,
                                          std::uint32_t control_slot,
                                          int jobs = 1);

} // namespace gexp
