#include "gexp/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gexp {

namespace {

// Node-matching tolerance, relative to the horizon.
inline double node_tol(double horizon) {
    return 1e-12 * std::max(1.0, horizon);
}

} // namespace

TimeGrid::TimeGrid(Eigen::ArrayXd points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw std::invalid_argument("TimeGrid: need at least two nodes");
    }
    if (points_[0] != 0.0) {
        throw std::invalid_argument("TimeGrid: first node must be 0");
    }
    dt_.resize(points_.size() - 1);
    for (Index k = 0; k + 1 < points_.size(); ++k) {
        dt_[k] = points_[k + 1] - points_[k];
        if (!(dt_[k] > 0.0)) {
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::uniform(double horizon, Index n_steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
    Eigen::ArrayXd pts(n_steps + 1);
    const double dt = horizon / static_cast<double>(n_steps);
    for (Index k = 0; k <= n_steps; ++k) {
        pts[k] = static_cast<double>(k) * dt;
    }
    pts[n_steps] = horizon;
    return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::from_points(Eigen::ArrayXd points) {
    return TimeGrid(std::move(points));
}

Index TimeGrid::index_of(double t) const {
    const Index k = ceil_index(t);
    const double tol = node_tol(horizon());
    if (k <= n_steps() && std::abs(points_[k] - t) <= tol) return k;
    if (k > 0 && std::abs(points_[k - 1] - t) <= tol) return k - 1;
    throw std::invalid_argument("TimeGrid: time is not a grid node");
}

Index TimeGrid::ceil_index(double t) const {
    if (t <= points_[0]) return 0;
    // First node >= t - tol, so a time that is a node up to rounding is
    // treated as that node rather than the next one.
    const double tol = node_tol(horizon());
    Index lo = 0, hi = n_steps();
    if (t > points_[hi] + tol) return n_steps();  // beyond horizon: clamp to T
    while (lo < hi) {
        const Index mid = (lo + hi) / 2;
        if (points_[mid] < t - tol) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

bool TimeGrid::nests(const TimeGrid& coarser) const {
    const double tol = node_tol(horizon());
    if (std::abs(horizon() - coarser.horizon()) > tol) return false;
    Index j = 0;
    for (Index k = 0; k < coarser.n_nodes(); ++k) {
        const double t = coarser.point(k);
        while (j < n_nodes() && points_[j] < t - tol) ++j;
        if (j >= n_nodes() || std::abs(points_[j] - t) > tol) return false;
    }
    return true;
}

TimeGrid TimeGrid::coarsen(Index factor) const {
    if (factor < 1 || n_steps() % factor != 0) {
        throw std::invalid_argument("TimeGrid: coarsening factor must divide n_steps");
    }
    Eigen::ArrayXd pts(n_steps() / factor + 1);
    for (Index k = 0; k < pts.size(); ++k) pts[k] = points_[k * factor];
    return TimeGrid(std::move(pts));
}

} // namespace gexp
