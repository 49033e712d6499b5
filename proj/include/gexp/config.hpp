#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gexp/suites.hpp"

namespace gexp {

// Configuration problem with a location; the CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// Strict INI-style text: [section] headers, key = value pairs, '#' or ';'
// comments. Unknown sections or keys are hard errors, not warnings.
struct ParsedConfig {
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, int> section_lines;

    static ParsedConfig parse(const std::string& text);
    static ParsedConfig parse_file(const std::string& path);
};

struct ExperimentConfig {
    suites::EngineSetup setup;
    suites::AxiomsParams axioms;
    suites::IntegralsParams integrals;
    suites::StoppingParams stopping;
    suites::ItoParams ito;
    suites::PdeParams pde;
    std::vector<std::string> selected_suites;  // validated names, expanded "all"
    std::string out_dir = "out";

    static ExperimentConfig from_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);

    // CLI overrides
    void override_seed(std::uint64_t seed) { setup.master_seed = seed; }
    void override_jobs(int jobs) { setup.jobs = jobs; }
    void override_out_dir(const std::string& dir) { out_dir = dir; }
    // Scales every per-suite path count to the given value.
    void override_paths(std::int64_t n_paths);
};

} // namespace gexp
