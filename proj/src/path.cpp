#include "gexp/path.hpp"

#include <cmath>
#include <stdexcept>

#include "gexp/parallel.hpp"

namespace gexp {

SamplePath SamplePath::subsample(Index factor) const {
    SamplePath out;
    out.grid = std::make_shared<const TimeGrid>(grid->coarsen(factor));
    const Index n = out.grid->n_steps();
    out.b.resize(n + 1);
    out.qv.resize(n + 1);
    out.db.resize(n);
    out.dqv.resize(n);
    for (Index k = 0; k <= n; ++k) {
        out.b[k] = b[k * factor];
        out.qv[k] = qv[k * factor];
    }
    for (Index k = 0; k < n; ++k) {
        out.db[k] = out.b[k + 1] - out.b[k];
        out.dqv[k] = out.qv[k + 1] - out.qv[k];
    }
    out.control_id = control_id;
    out.path_index = path_index;
    out.stream_key = stream_key;
    return out;
}

void generate_path_into(SamplePath& out, const VolatilityControl& control,
                        const GridPtr& grid, const VolatilityBand& band,
                        const NormalStream& stream, std::uint64_t path_index) {
    const Index n = grid->n_steps();
    out.grid = grid;
    out.b.resize(n + 1);
    out.qv.resize(n + 1);
    out.db.resize(n);
    out.dqv.resize(n);
    out.control_id = control.id();
    out.path_index = path_index;
    out.stream_key = stream.key();

    const auto& t = grid->points();
    const auto& dt = grid->dt();
    out.b[0] = 0.0;
    out.qv[0] = 0.0;
    for (Index k = 0; k < n; ++k) {
        const double sigma = control.sigma(t[k], out.b[k]);
        if (!band.contains(sigma)) {
            throw std::domain_error("generate_path: control emitted sigma " +
                                    std::to_string(sigma) + " outside the band");
        }
        const double z = stream.normal(static_cast<std::uint64_t>(k));
        out.db[k] = sigma * std::sqrt(dt[k]) * z;
        out.dqv[k] = sigma * sigma * dt[k];
        out.b[k + 1] = out.b[k] + out.db[k];
        out.qv[k + 1] = out.qv[k] + out.dqv[k];
    }
}

SamplePath generate_path(const VolatilityControl& control, const GridPtr& grid,
                         const VolatilityBand& band, const NormalStream& stream,
                         std::uint64_t path_index) {
    SamplePath out;
    generate_path_into(out, control, grid, band, stream, path_index);
    return out;
}

std::vector<SamplePath> generate_ensemble(const VolatilityControl& control,
                                          const GridPtr& grid,
                                          const VolatilityBand& band,
                                          std::int64_t n_paths,
                                          const SeedPolicy& seeds,
                                          std::uint32_t control_slot, int jobs) {
    if (n_paths < 1) throw std::invalid_argument("generate_ensemble: n_paths >= 1");
    std::vector<SamplePath> paths(static_cast<std::size_t>(n_paths));
    parallel_for_blocks(n_paths, jobs, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const auto idx = static_cast<std::uint64_t>(i);
            generate_path_into(paths[static_cast<std::size_t>(i)], control, grid,
                               band, seeds.stream(control_slot, idx), idx);
        }
    });
    return paths;
}

} // namespace gexp
