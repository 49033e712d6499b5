#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gexp::suites {

SimpleProcess ProcessGenerator::next() {
    const Index n_steps = grid_->n_steps();
    const auto segments =
        static_cast<int>(draws_.integer(1, max_segments_));

    std::set<Index> interior;
    while (static_cast<int>(interior.size()) < segments - 1) {
        interior.insert(draws_.integer(1, n_steps - 1));
    }

    SimpleProcess process;
    process.bound = bound_;
    process.breakpoints.push_back(0.0);
    for (const Index node : interior) {
        process.breakpoints.push_back(grid_->point(node));
    }
    process.breakpoints.push_back(grid_->horizon());

    for (int j = 0; j < segments; ++j) {
        const double a = draws_.uniform(-1.5, 1.5);
        const double b = draws_.uniform(0.2, 2.0);
        const double c = draws_.uniform(-0.5, 0.5);
        const double bound = bound_;
        process.coefficients.push_back({[a, b, c, bound](const SamplePath& path,
                                                         Index node) {
            return std::clamp(a * std::tanh(b * path.b[node]) + c, -bound, bound);
        }});
    }
    return process;
}

RangeExtrema::RangeExtrema(const Eigen::ArrayXd& values) {
    const auto n = values.size();
    log2_.resize(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 2; i <= static_cast<std::size_t>(n); ++i) {
        log2_[i] = log2_[i / 2] + 1;
    }
    const int levels = log2_[static_cast<std::size_t>(n)] + 1;
    max_table_.assign(static_cast<std::size_t>(levels), values);
    min_table_.assign(static_cast<std::size_t>(levels), values);
    for (int l = 1; l < levels; ++l) {
        const Index width = Index{1} << l;
        for (Index i = 0; i + width <= n; ++i) {
            max_table_[static_cast<std::size_t>(l)][i] =
                std::max(max_table_[static_cast<std::size_t>(l - 1)][i],
                         max_table_[static_cast<std::size_t>(l - 1)][i + width / 2]);
            min_table_[static_cast<std::size_t>(l)][i] =
                std::min(min_table_[static_cast<std::size_t>(l - 1)][i],
                         min_table_[static_cast<std::size_t>(l - 1)][i + width / 2]);
        }
    }
}

double RangeExtrema::max_in(Index lo, Index hi) const {
    const int l = log2_[static_cast<std::size_t>(hi - lo + 1)];
    const Index width = Index{1} << l;
    return std::max(max_table_[static_cast<std::size_t>(l)][lo],
                    max_table_[static_cast<std::size_t>(l)][hi - width + 1]);
}

double RangeExtrema::min_in(Index lo, Index hi) const {
    const int l = log2_[static_cast<std::size_t>(hi - lo + 1)];
    const Index width = Index{1} << l;
    return std::min(min_table_[static_cast<std::size_t>(l)][lo],
                    min_table_[static_cast<std::size_t>(l)][hi - width + 1]);
}

std::vector<Index> compile_nodes(const SimpleProcess& eta, const TimeGrid& grid) {
    std::vector<Index> nodes;
    nodes.reserve(eta.breakpoints.size());
    for (const double t : eta.breakpoints) nodes.push_back(grid.index_of(t));
    return nodes;
}

void compile_on_path(const SimpleProcess& eta, const std::vector<Index>& nodes,
                     const SamplePath& path, CompiledSimpleProcess& out) {
    out.nodes = nodes;
    out.coefficients.resize(eta.coefficients.size());
    for (std::size_t j = 0; j < eta.coefficients.size(); ++j) {
        out.coefficients[j] = eta.coefficients[j].eval(path, nodes[j]);
    }
}

CompiledSimpleProcess compile_on_path(const SimpleProcess& eta, const SamplePath& path) {
    CompiledSimpleProcess out;
    compile_on_path(eta, compile_nodes(eta, *path.grid), path, out);
    return out;
}

SimpleProcessStats evaluate_simple(const CompiledSimpleProcess& eta,
                                   const SamplePath& path,
                                   const RangeExtrema& extrema) {
    SimpleProcessStats stats;
    const auto& t = path.grid->points();
    double running = 0.0;
    for (std::size_t j = 0; j < eta.coefficients.size(); ++j) {
        const Index lo = eta.nodes[j];
        const Index hi = eta.nodes[j + 1];
        const double xi = eta.coefficients[j];
        // the running integral on (lo, hi] is running + xi (b_k - b_lo),
        // affine in b_k, so its extremes sit at the segment extremes of b
        const double seg_max = extrema.max_in(lo + 1, hi);
        const double seg_min = extrema.min_in(lo + 1, hi);
        const double high = running + xi * ((xi >= 0.0 ? seg_max : seg_min) - path.b[lo]);
        const double low = running + xi * ((xi >= 0.0 ? seg_min : seg_max) - path.b[lo]);
        stats.max_abs_running =
            std::max({stats.max_abs_running, std::abs(high), std::abs(low)});
        running += xi * (path.b[hi] - path.b[lo]);
        stats.energy_final += xi * xi * (t[hi] - t[lo]);
    }
    stats.ito_final = running;
    return stats;
}

double QuantizedFunctional::operator()(double b_half, double b_end,
                                       double qv_end) const {
    const double raw = a1 * std::tanh(b1 * b_half) + a2 * std::tanh(b2 * b_end) +
                       a3 * std::tanh(qv_end) + offset;
    return std::nearbyint(raw / lattice) * lattice;
}

QuantizedFunctional QuantizedFunctional::random(DrawSource& draws) {
    QuantizedFunctional f;
    f.a1 = draws.uniform(-1.0, 1.0);
    f.b1 = draws.uniform(0.25, 2.0);
    f.a2 = draws.uniform(-1.0, 1.0);
    f.b2 = draws.uniform(0.25, 2.0);
    f.a3 = draws.uniform(-1.0, 1.0);
    f.offset = draws.uniform(-1.0, 1.0);
    return f;
}

StoppingTime random_stopping_time(DrawSource& draws, const GridPtr& grid,
                                  const VolatilityBand& band,
                                  const GridProcess& eta, int kind) {
    const double horizon = grid->horizon();
    const double scale = band.sigma_hi * std::sqrt(horizon);
    switch (kind % 6) {
        case 0:
            return StoppingTime::deterministic(draws.uniform(0.0, horizon));
        case 1:
            return StoppingTime::hitting(Monitored::brownian,
                                         draws.uniform(0.1, 1.2) * scale,
                                         Direction::up);
        case 2:
            return StoppingTime::hitting(Monitored::brownian,
                                         -draws.uniform(0.1, 1.2) * scale,
                                         Direction::down);
        case 3:
            return StoppingTime::hitting(Monitored::abs_brownian,
                                         draws.uniform(0.3, 1.5) * scale,
                                         Direction::up);
        case 4:
            return StoppingTime::integral_threshold(
                eta, draws.uniform(0.05, 1.0) * horizon,
                draws.integer(1, 2) == 1 ? 1.0 : 2.0);
        default:
            return StoppingTime::min_of(
                StoppingTime::deterministic(draws.uniform(0.2, horizon)),
                StoppingTime::hitting(Monitored::abs_brownian,
                                      draws.uniform(0.3, 1.2) * scale,
                                      Direction::up));
    }
}

} // namespace gexp::suites
