#include <doctest.h>

#include "gexp/grid.hpp"

using namespace gexp;

TEST_CASE("uniform grid basics") {
    const TimeGrid g = TimeGrid::uniform(1.0, 8);
    CHECK(g.n_steps() == 8);
    CHECK(g.point(0) == 0.0);
    CHECK(g.point(8) == 1.0);
    CHECK(g.dt()[3] == 0.125);
    CHECK(g.index_of(0.375) == 3);
    CHECK_THROWS_AS(g.index_of(0.3), std::invalid_argument);
}

TEST_CASE("ceil index snaps upward") {
    const TimeGrid g = TimeGrid::uniform(1.0, 4);
    CHECK(g.ceil_index(0.0) == 0);
    CHECK(g.ceil_index(0.25) == 1);
    CHECK(g.ceil_index(0.26) == 2);
    CHECK(g.ceil_index(0.9) == 4);
    CHECK(g.ceil_index(2.0) == 4);
}

TEST_CASE("nesting and coarsening") {
    const TimeGrid fine = TimeGrid::uniform(1.0, 16);
    const TimeGrid coarse = fine.coarsen(4);
    CHECK(coarse.n_steps() == 4);
    CHECK(fine.nests(coarse));
    CHECK_FALSE(TimeGrid::uniform(1.0, 6).nests(coarse));
    CHECK_THROWS_AS(fine.coarsen(3), std::invalid_argument);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), std::invalid_argument);
    Eigen::ArrayXd bad(3);
    bad << 0.0, 0.5, 0.5;
    CHECK_THROWS_AS(TimeGrid::from_points(bad), std::invalid_argument);
    Eigen::ArrayXd shifted(2);
    shifted << 0.1, 1.0;
    CHECK_THROWS_AS(TimeGrid::from_points(shifted), std::invalid_argument);
}
