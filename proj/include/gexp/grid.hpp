#pragma once

#include <Eigen/Dense>
#include <memory>

namespace gexp {

using Index = Eigen::Index;

// Simulation times t_0 = 0 < t_1 < ... < t_N = horizon. Step widths are
// stored once so every integral accumulates against the same dt values.
class TimeGrid {
public:
    static TimeGrid uniform(double horizon, Index n_steps);
    static TimeGrid from_points(Eigen::ArrayXd points);

    double horizon() const { return points_[points_.size() - 1]; }
    Index n_steps() const { return points_.size() - 1; }
    Index n_nodes() const { return points_.size(); }
    const Eigen::ArrayXd& points() const { return points_; }
    const Eigen::ArrayXd& dt() const { return dt_; }
    double point(Index k) const { return points_[k]; }

    // Node index holding time t; throws std::invalid_argument when t is
    // not a grid node (no silent interpolation).
    Index index_of(double t) const;

    // First node with t_k >= t (upward snap); n_steps() when t > horizon.
    Index ceil_index(double t) const;

    // True when every node of `coarser` is a node of this grid.
    bool nests(const TimeGrid& coarser) const;

    // Every factor-th node (factor must divide n_steps()).
    TimeGrid coarsen(Index factor) const;

private:
    explicit TimeGrid(Eigen::ArrayXd points);

    Eigen::ArrayXd points_;
    Eigen::ArrayXd dt_;
};

using GridPtr = std::shared_ptr<const TimeGrid>;

inline GridPtr make_uniform_grid(double horizon, Index n_steps) {
    return std::make_shared<const TimeGrid>(TimeGrid::uniform(horizon, n_steps));
}

} // namespace gexp
