// gexp: experiment runner for the volatility-uncertainty calculus engine.
//
//   gexp run <config.ini> [--seed N] [--out-dir DIR] [--paths N] [--jobs N]
//   gexp export-paths <config.ini> [--paths N] [--out-dir DIR] [--seed N]
//   gexp list-suites
//   gexp print-traceability
//
// Exit codes: 0 all selected cases pass, 1 configuration error, 2 at least
// one case failed. GEXP_OUT_DIR sets the default output directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gexp/config.hpp"
#include "gexp/process.hpp"
#include "gexp/report.hpp"
#include "gexp/suites.hpp"

namespace {

gexp::SuiteReport dispatch(const std::string& name, const gexp::ExperimentConfig& cfg) {
    using namespace gexp::suites;
    if (name == "axioms") return run_axioms(cfg.setup, cfg.axioms);
    if (name == "integrals") return run_integrals(cfg.setup, cfg.integrals);
    if (name == "stopping") return run_stopping(cfg.setup, cfg.stopping);
    if (name == "ito") return run_ito(cfg.setup, cfg.ito);
    if (name == "pde") return run_pde(cfg.setup, cfg.pde);
    throw gexp::ConfigError(0, "unknown suite '" + name + "'");
}

// Sample trajectories (t, b, qv) and a running stochastic integral
// (t, value) as plot-ready CSVs, one row per grid node.
void export_paths(const gexp::ExperimentConfig& cfg, std::int64_t n_paths) {
    using namespace gexp;
    std::filesystem::create_directories(cfg.out_dir);
    const auto& setup = cfg.setup;
    const GridPtr grid = setup.grid();
    const ControlSet controls = setup.controls();
    const SeedPolicy seeds{setup.master_seed};

    std::ofstream path_csv(std::filesystem::path(cfg.out_dir) / "paths.csv");
    std::ofstream ito_csv(std::filesystem::path(cfg.out_dir) / "running_ito.csv");
    path_csv << "path_id,control_id,t,b,qv\n";
    ito_csv << "path_id,t,value\n";
    char buf[160];
    for (std::int64_t i = 0; i < n_paths; ++i) {
        const auto c = static_cast<std::size_t>(i) % controls.size();
        const SamplePath path = generate_path(
            controls[c], grid, setup.band,
            seeds.stream(static_cast<std::uint32_t>(c), static_cast<std::uint64_t>(i)),
            static_cast<std::uint64_t>(i));
        const IntegralPath running = ito_integral(brownian_process(), path);
        for (Index k = 0; k < path.n_nodes(); ++k) {
            std::snprintf(buf, sizeof(buf), "%lld,%s,%.17g,%.17g,%.17g\n",
                          static_cast<long long>(i), path.control_id.c_str(),
                          grid->point(k), path.b[k], path.qv[k]);
            path_csv << buf;
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n",
                          static_cast<long long>(i), grid->point(k),
                          running.values[k]);
            ito_csv << buf;
        }
    }
    std::cout << "wrote " << n_paths << " paths to " << cfg.out_dir
              << "/paths.csv and running_ito.csv\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for stochastic calculus under volatility uncertainty"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir_flag;
    std::uint64_t seed_flag = 0;
    std::int64_t paths_flag = 0;
    int jobs_flag = 0;

    CLI::App* run = app.add_subcommand("run", "run the suites selected by a config file");
    run->add_option("config", config_path, "experiment config (INI)")->required();
    run->add_option("--seed", seed_flag, "override the master seed");
    run->add_option("--out-dir", out_dir_flag, "override the output directory");
    run->add_option("--paths", paths_flag, "override per-suite path counts");
    run->add_option("--jobs", jobs_flag,
                    "worker threads (throughput hint, never changes results)");

    std::string export_config;
    std::int64_t export_count = 8;
    CLI::App* exporter = app.add_subcommand(
        "export-paths", "write sample trajectories and a running integral as CSV");
    exporter->add_option("config", export_config, "experiment config (INI)")->required();
    exporter->add_option("--paths", export_count, "number of trajectories");
    exporter->add_option("--out-dir", out_dir_flag, "output directory");
    exporter->add_option("--seed", seed_flag, "override the master seed");

    CLI::App* list = app.add_subcommand("list-suites", "print the available suite names");
    CLI::App* trace =
        app.add_subcommand("print-traceability", "print the identity registry");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& name : gexp::suites::suite_names()) {
            std::cout << name << "\n";
        }
        return 0;
    }
    if (trace->parsed()) {
        for (const auto& [anchor, statement] : gexp::traceability_table()) {
            std::cout << anchor << "\t" << statement << "\n";
        }
        return 0;
    }

    if (exporter->parsed()) {
        try {
            gexp::ExperimentConfig cfg = gexp::ExperimentConfig::from_file(export_config);
            if (exporter->count("--seed") > 0) cfg.override_seed(seed_flag);
            if (exporter->count("--out-dir") > 0) {
                cfg.override_out_dir(out_dir_flag);
            } else if (const char* env = std::getenv("GEXP_OUT_DIR")) {
                cfg.override_out_dir(env);
            }
            export_paths(cfg, export_count);
            return 0;
        } catch (const gexp::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }

    try {
        gexp::ExperimentConfig cfg = gexp::ExperimentConfig::from_file(config_path);
        if (run->count("--seed") > 0) cfg.override_seed(seed_flag);
        if (run->count("--jobs") > 0) cfg.override_jobs(jobs_flag);
        if (run->count("--paths") > 0) cfg.override_paths(paths_flag);
        if (run->count("--out-dir") > 0) {
            cfg.override_out_dir(out_dir_flag);
        } else if (const char* env = std::getenv("GEXP_OUT_DIR")) {
            cfg.override_out_dir(env);
        }

        std::vector<gexp::SuiteReport> reports;
        bool all_pass = true;
        for (const auto& name : cfg.selected_suites) {
            gexp::SuiteReport report = dispatch(name, cfg);
            for (const auto& c : report.cases) {
                std::cout << "[" << gexp::status_name(c.status) << "] " << c.case_id
                          << ": " << c.description << "\n";
            }
            all_pass = all_pass && report.all_passed();
            reports.push_back(std::move(report));
        }
        gexp::write_reports(reports, cfg.setup.master_seed, cfg.out_dir);
        std::cout << (all_pass ? "all cases passed" : "FAILURES present") << "; report in "
                  << cfg.out_dir << "/report.json\n";
        return all_pass ? 0 : 2;
    } catch (const gexp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
