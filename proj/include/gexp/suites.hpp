#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gexp/expectation.hpp"
#include "gexp/report.hpp"

namespace gexp::suites {

// Shared experiment setup: band, grid, scenario family, seeds. Power-of-two
// step counts keep the dyadic stopping-time machinery grid-aligned.
struct EngineSetup {
    VolatilityBand band{1.0, 2.0};
    double horizon = 1.0;
    Index n_steps = 512;
    int n_constant_controls = 11;
    bool bang_bang = true;
    std::uint64_t master_seed = 20250810;
    int jobs = 1;

    GridPtr grid() const { return make_uniform_grid(horizon, n_steps); }
    GridPtr grid(Index steps) const { return make_uniform_grid(horizon, steps); }
    ControlSet controls() const {
        return default_control_set(band, n_constant_controls, bang_bang,
                                   std::sqrt(horizon));
    }
    EvaluationConfig eval(std::int64_t n_paths) const {
        EvaluationConfig cfg;
        cfg.grid = grid();
        cfg.band = band;
        cfg.n_paths = n_paths;
        cfg.seeds = SeedPolicy{master_seed};
        cfg.jobs = jobs;
        return cfg;
    }
};

struct AxiomsParams {
    std::int64_t n_pairs = 10000;
    std::int64_t n_paths = 64;        // power of two: exact lattice means
    std::int64_t statistical_paths = 4096;
};

struct IntegralsParams {
    std::int64_t moment_paths = 100000;  // G-normal moments + truncation tails
    Index moment_steps = 256;
    std::int64_t n_processes = 100;      // randomized simple processes
    std::int64_t process_paths = 4096;
    Index process_steps = 512;
    std::vector<double> tail_levels = {1.0, 2.0, 4.0, 8.0};
    double tail_pass_level = 1e-3;
};

struct StoppingParams {
    std::int64_t n_pairs = 1000;  // (eta, tau) pairs for the exact identity
    std::int64_t n_paths = 1000;
    int dyadic_max_level = 10;
};

struct ItoParams {
    std::int64_t n_paths = 512;
    Index fine_steps = 2048;   // refinement levels span fine/16 .. fine
    int n_levels = 5;
    std::int64_t remainder_paths = 4096;
    Index remainder_steps = 1024;
    std::vector<Index> remainder_cells = {32, 64, 128, 256, 512};
};

struct PdeParams {
    std::int64_t mc_paths = 40000;
    double dx = 0.02;
    double cfl_fraction = 0.5;
    double scheme_tolerance = 0.01;
};

SuiteReport run_axioms(const EngineSetup& setup, const AxiomsParams& params);
SuiteReport run_integrals(const EngineSetup& setup, const IntegralsParams& params);
SuiteReport run_stopping(const EngineSetup& setup, const StoppingParams& params);
SuiteReport run_ito(const EngineSetup& setup, const ItoParams& params);
SuiteReport run_pde(const EngineSetup& setup, const PdeParams& params);

const std::vector<std::string>& suite_names();

} // namespace gexp::suites
