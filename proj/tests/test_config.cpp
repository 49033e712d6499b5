#include <doctest.h>

#include "gexp/config.hpp"
#include "gexp/report.hpp"

using namespace gexp;

TEST_CASE("config parsing maps sections and applies defaults") {
    const std::string text = R"(# experiment
[band]
sigma_lo = 1.0
sigma_hi = 2.5

[grid]
n_steps = 256

[run]
suites = axioms, pde
seed = 99
out_dir = results
)";
    const ExperimentConfig cfg = ExperimentConfig::from_text(text);
    CHECK(cfg.setup.band.sigma_hi == 2.5);
    CHECK(cfg.setup.n_steps == 256);
    CHECK(cfg.setup.horizon == 1.0);  // default
    CHECK(cfg.setup.master_seed == 99);
    CHECK(cfg.out_dir == "results");
    REQUIRE(cfg.selected_suites.size() == 2);
    CHECK(cfg.selected_suites[0] == "axioms");
    CHECK(cfg.selected_suites[1] == "pde");
}

TEST_CASE("all expands to every suite") {
    const ExperimentConfig cfg = ExperimentConfig::from_text("[run]\nsuites = all\n");
    CHECK(cfg.selected_suites == suites::suite_names());
    const ExperimentConfig empty = ExperimentConfig::from_text("");
    CHECK(empty.selected_suites == suites::suite_names());
}

TEST_CASE("unknown keys, sections and suites are hard errors with locations") {
    CHECK_THROWS_AS(ExperimentConfig::from_text("[band]\nsgima_lo = 1\n"), ConfigError);
    try {
        ExperimentConfig::from_text("[band]\nsgima_lo = 1\n");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("sgima_lo") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::from_text("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("[run]\nsuites = nope\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("[grid]\nn_steps = abc\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("key_without_section = 1\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("[band]\nsigma_lo\n"), ConfigError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_text("[band]\nsigma_lo = 1\nsigma_lo = 2\n"),
        ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("path override rescales every suite") {
    ExperimentConfig cfg = ExperimentConfig::from_text("");
    cfg.override_paths(2048);
    CHECK(cfg.integrals.moment_paths == 2048);
    CHECK(cfg.pde.mc_paths == 2048);
    CHECK(cfg.ito.n_paths == 2048);
    CHECK_THROWS_AS(cfg.override_paths(0), ConfigError);
}

TEST_CASE("traceability registry covers every referenced anchor") {
    CHECK(anchor_known("sublinear.monotonicity"));
    CHECK(anchor_known("stopping.identity"));
    CHECK_FALSE(anchor_known("not.an.anchor"));

    SuiteReport report;
    report.suite = "demo";
    CHECK_THROWS_AS(report.add({"id", "desc", "not.an.anchor", CaseStatus::pass, 0.0,
                                0.0, 0.0, true}),
                    std::logic_error);
    report.add({"id", "desc", "sublinear.constant", CaseStatus::pass, 0.0, 0.0, 0.0,
                true});
    CHECK(report.all_passed());
    report.add({"id2", "desc", "sublinear.constant", CaseStatus::fail, 1.0, 0.0, 0.0,
                true});
    CHECK_FALSE(report.all_passed());
    CHECK(report.fail_count() == 1);
}

TEST_CASE("json report rendering is stable and versioned") {
    SuiteReport report;
    report.suite = "demo";
    report.add({"case", "a case", "sublinear.constant", CaseStatus::pass, 0.1234567,
                0.1234567, 0.0, true});
    report.wall_seconds = 12.5;  // must not leak into the stable report
    const std::string a = render_json_report({report}, 77);
    const std::string b = render_json_report({report}, 77);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.find("\"master_seed\": 77") != std::string::npos);
    CHECK(a.find("wall") == std::string::npos);
}
