#include <doctest.h>

#include <cmath>

#include "gexp/stopping.hpp"

using namespace gexp;

namespace {

const VolatilityBand kBand{1.0, 2.0};
const SeedPolicy kSeeds{90210u};

SamplePath test_path(std::uint64_t index, Index steps = 128) {
    const VolatilityControl control = VolatilityControl::state_feedback(
        "sign", [](double, double b) { return b > 0.0 ? 2.0 : 1.0; });
    return generate_path(control, make_uniform_grid(1.0, steps), kBand,
                         kSeeds.stream(0, index), index);
}

GridProcess tanh_process() {
    GridProcess eta;
    eta.id = "tanhB";
    eta.bound = 1.0;
    eta.rule = [](Index k, const SamplePath& p) { return std::tanh(p.b[k]); };
    return eta;
}

} // namespace

TEST_CASE("deterministic stops snap upward to grid nodes") {
    const SamplePath path = test_path(0, 4);
    CHECK(StoppingTime::deterministic(0.5).evaluate(path).time == 0.5);
    CHECK(StoppingTime::deterministic(0.3).evaluate(path).index == 2);
    CHECK(StoppingTime::deterministic(5.0).evaluate(path).time == 1.0);
}

TEST_CASE("hitting zero from below triggers immediately") {
    const SamplePath path = test_path(1);
    const StoppingTime tau =
        StoppingTime::hitting(Monitored::brownian, 0.0, Direction::up);
    CHECK(tau.evaluate(path).index == 0);  // B_0 = 0 already hits
}

TEST_CASE("min of stopping times picks the earlier index") {
    const SamplePath path = test_path(2);
    const StoppingTime early = StoppingTime::deterministic(0.25);
    const StoppingTime late = StoppingTime::deterministic(0.75);
    CHECK(StoppingTime::min_of(early, late).evaluate(path).time == 0.25);
    CHECK(StoppingTime::min_of(late, early).evaluate(path).time == 0.25);
}

TEST_CASE("dyadic upper approximation") {
    const SamplePath path = test_path(3, 512);

    // frozen mesh value: 0.3 T on the level-2 mesh lands on 0.5 T
    const StoppingTime det = StoppingTime::deterministic(0.3);
    CHECK(dyadic_upper(det, 2, path) == 0.5);
    CHECK(StoppingTime::deterministic(1.0).evaluate(path).time == 1.0);
    for (int n = 1; n <= 8; ++n) {
        CHECK(dyadic_upper(StoppingTime::deterministic(1.0), n, path) == 1.0);
    }

    const StoppingTime tau =
        StoppingTime::hitting(Monitored::abs_brownian, 0.8, Direction::up);
    for (std::uint64_t i = 0; i < 64; ++i) {
        const SamplePath p = test_path(i + 10, 512);
        const double value = tau.evaluate(p).time;
        double previous_gap = 2.0;
        for (int n = 1; n <= 10; ++n) {
            const double upper = dyadic_upper(tau, n, p);
            const double gap = upper - value;
            CHECK(gap >= 0.0);
            CHECK(gap <= std::exp2(-n));
            CHECK(gap <= previous_gap);
            previous_gap = gap;
        }
    }
}

TEST_CASE("node indicator of the stopped interval") {
    const SamplePath path = test_path(4, 16);

    const Eigen::ArrayXd all_ones =
        sample_nodes(indicator_process(StoppingTime::deterministic(1.0)), path);
    CHECK((all_ones == 1.0).all());

    const Eigen::ArrayXd only_origin =
        sample_nodes(indicator_process(StoppingTime::deterministic(0.0)), path);
    CHECK(only_origin[0] == 1.0);
    CHECK((only_origin.tail(16) == 0.0).all());

    // pointwise product reproduces the process on [0, tau]
    const StoppingTime tau = StoppingTime::deterministic(0.5);
    const GridProcess eta = tanh_process();
    const Eigen::ArrayXd masked = sample_nodes(product(indicator_process(tau), eta), path);
    const Eigen::ArrayXd full = sample_nodes(eta, path);
    const Index kappa = tau.evaluate(path).index;
    for (Index k = 0; k <= kappa; ++k) CHECK(masked[k] == full[k]);
    for (Index k = kappa + 1; k < path.n_nodes(); ++k) CHECK(masked[k] == 0.0);
}

TEST_CASE("stopped integral identity holds exactly on the grid") {
    const GridProcess eta = tanh_process();

    // trivial endpoints
    const SamplePath path = test_path(5);
    const StoppingTime full = StoppingTime::deterministic(1.0);
    CHECK(stopped_integral(eta, full, 1.0, path) ==
          ito_integral(eta, path).final_value());

    // hitting stop with unit integrand reads B at the stop index
    const StoppingTime hit =
        StoppingTime::hitting(Monitored::abs_brownian, 1.0, Direction::up);
    for (std::uint64_t i = 0; i < 256; ++i) {
        const SamplePath p = test_path(i + 100);
        const GridProcess one = constant_process(1.0);
        const double stopped = stopped_integral(one, hit, 1.0, p);
        CHECK(stopped == p.b[hit.evaluate(p).index]);

        // masked-integrand route, exact equality
        const double masked =
            ito_integral(product(pre_stop_indicator(hit), one), p).final_value();
        CHECK(stopped == masked);

        const double masked_eta =
            ito_integral(product(pre_stop_indicator(hit), eta), p).final_value();
        CHECK(stopped_integral(eta, hit, 1.0, p) == masked_eta);
    }
}

TEST_CASE("integral threshold equals a brute-force scan") {
    const GridProcess eta = tanh_process();
    const StoppingTime tau = StoppingTime::integral_threshold(eta, 0.25, 2.0);
    for (std::uint64_t i = 0; i < 32; ++i) {
        const SamplePath p = test_path(i + 400);
        const Eigen::ArrayXd nodes = sample_nodes(eta, p);
        double running = 0.0;
        Index expected = p.n_steps();
        for (Index k = 0; k < p.n_steps(); ++k) {
            running += nodes[k] * nodes[k] * p.grid->dt()[k];
            if (running > 0.25) {
                expected = k + 1;
                break;
            }
        }
        CHECK(tau.evaluate(p).index == expected);
    }
}

TEST_CASE("localization") {
    const LocalizationSequence sigma = hitting_localization(4.0, 1.0);

    // sigma levels increase pathwise and reach the horizon
    for (std::uint64_t i = 0; i < 16; ++i) {
        const SamplePath p = test_path(i + 600);
        Index previous = 0;
        for (int m = 1; m <= 6; ++m) {
            const Index idx = sigma.at_level(m).evaluate(p).index;
            CHECK(idx >= previous);
            previous = idx;
        }
        CHECK(sigma.at_level(6).evaluate(p).index == p.n_steps());
    }

    // below-threshold localization returns the process unchanged
    const GridProcess small = constant_process(0.25);
    const Localization loc = localize(small, LocalizeRule::l1_threshold, sigma, 5);
    const SamplePath p = test_path(7);
    CHECK(loc.tau.evaluate(p).index == p.n_steps());
    CHECK((sample_nodes(loc.process, p) == sample_nodes(small, p)).all());

    // the L2 threshold stops where the brute-force scan stops
    const Localization tight =
        localize(brownian_process(), LocalizeRule::l2_threshold, sigma, 1);
    for (std::uint64_t i = 0; i < 16; ++i) {
        const SamplePath q = test_path(i + 700);
        const Eigen::ArrayXd nodes = q.b;
        double running = 0.0;
        Index expected = q.n_steps();
        for (Index k = 0; k < q.n_steps(); ++k) {
            running += nodes[k] * nodes[k] * q.grid->dt()[k];
            if (running > 1.0) {
                expected = k + 1;
                break;
            }
        }
        const Index sig = sigma.at_level(1).evaluate(q).index;
        CHECK(tight.tau.evaluate(q).index == std::min(expected, sig));
    }
}

TEST_CASE("stop decisions ignore post-stop data") {
    const GridProcess eta = tanh_process();
    const StoppingTime tau = StoppingTime::min_of(
        StoppingTime::integral_threshold(eta, 0.125, 1.0),
        StoppingTime::hitting(Monitored::abs_brownian, 0.9, Direction::up));
    for (std::uint64_t i = 0; i + 1 < 40; i += 2) {
        const SamplePath a = test_path(i + 800);
        const SamplePath donor = test_path(i + 801);
        const Index kappa = tau.evaluate(a).index;

        SamplePath spliced = a;
        for (Index k = kappa; k < a.n_steps(); ++k) {
            spliced.db[k] = donor.db[k];
            spliced.dqv[k] = donor.dqv[k];
            spliced.b[k + 1] = spliced.b[k] + spliced.db[k];
            spliced.qv[k + 1] = spliced.qv[k] + spliced.dqv[k];
        }
        CHECK(tau.evaluate(spliced).index == kappa);
    }
}
