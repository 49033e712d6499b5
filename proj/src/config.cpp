#include "gexp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gexp {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

// Typed access with consumption tracking; whatever stays unconsumed after
// mapping is an unknown key.
class Reader {
public:
    explicit Reader(const ParsedConfig& config) : config_(config) {}

    const ParsedConfig::Entry* find(const std::string& section,
                                    const std::string& key) const {
        const auto sit = config_.sections.find(section);
        if (sit == config_.sections.end()) return nullptr;
        const auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        kit->second.consumed = true;
        return &kit->second;
    }

    double number(const std::string& section, const std::string& key,
                  double fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(entry->value, &used);
            if (used != entry->value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(entry->line, "field '" + section + "." + key +
                                               "': expected a number, got '" +
                                               entry->value + "'");
        }
    }

    std::int64_t integer(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        std::int64_t v = 0;
        const auto* first = entry->value.data();
        const auto* last = first + entry->value.size();
        const auto result = std::from_chars(first, last, v);
        if (result.ec != std::errc{} || result.ptr != last) {
            throw ConfigError(entry->line, "field '" + section + "." + key +
                                               "': expected an integer, got '" +
                                               entry->value + "'");
        }
        return v;
    }

    bool boolean(const std::string& section, const std::string& key,
                 bool fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        if (entry->value == "true" || entry->value == "1") return true;
        if (entry->value == "false" || entry->value == "0") return false;
        throw ConfigError(entry->line, "field '" + section + "." + key +
                                           "': expected true/false");
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
        const auto* entry = find(section, key);
        return entry ? entry->value : fallback;
    }

    void fail_on_unconsumed() const {
        for (const auto& [section, keys] : config_.sections) {
            for (const auto& [key, entry] : keys) {
                if (!entry.consumed) {
                    throw ConfigError(entry.line,
                                      "unknown field '" + section + "." + key + "'");
                }
            }
        }
    }

private:
    const ParsedConfig& config_;
};

const std::vector<std::string> kKnownSections = {
    "band", "grid", "controls", "run", "axioms", "integrals",
    "stopping", "ito", "pde"};

} // namespace

ParsedConfig ParsedConfig::parse(const std::string& text) {
    ParsedConfig out;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(line_no, "malformed section header '" + raw + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(kKnownSections.begin(), kKnownSections.end(), section) ==
                kKnownSections.end()) {
                throw ConfigError(line_no, "unknown section '" + section + "'");
            }
            out.section_lines.emplace(section, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line_no, "expected 'key = value', got '" + raw + "'");
        }
        if (section.empty()) {
            throw ConfigError(line_no, "key outside any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        auto [it, inserted] =
            out.sections[section].emplace(key, Entry{value, line_no, false});
        if (!inserted) {
            throw ConfigError(line_no, "duplicate key '" + section + "." + key + "'");
        }
    }
    return out;
}

ParsedConfig ParsedConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void ExperimentConfig::override_paths(std::int64_t n_paths) {
    if (n_paths < 1) throw ConfigError(0, "--paths must be >= 1");
    axioms.statistical_paths = n_paths;
    integrals.moment_paths = n_paths;
    integrals.process_paths = n_paths;
    stopping.n_paths = n_paths;
    ito.n_paths = n_paths;
    ito.remainder_paths = n_paths;
    pde.mc_paths = n_paths;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    const ParsedConfig parsed = ParsedConfig::parse(text);
    const Reader reader(parsed);
    ExperimentConfig cfg;

    cfg.setup.band = VolatilityBand(reader.number("band", "sigma_lo", 1.0),
                                    reader.number("band", "sigma_hi", 2.0));
    cfg.setup.horizon = reader.number("grid", "horizon", 1.0);
    cfg.setup.n_steps = static_cast<Index>(reader.integer("grid", "n_steps", 512));
    cfg.setup.n_constant_controls =
        static_cast<int>(reader.integer("controls", "n_constant", 11));
    cfg.setup.bang_bang = reader.boolean("controls", "bang_bang", true);
    cfg.setup.master_seed = static_cast<std::uint64_t>(
        reader.integer("run", "seed", static_cast<std::int64_t>(cfg.setup.master_seed)));
    cfg.setup.jobs = static_cast<int>(reader.integer("run", "jobs", 1));
    cfg.out_dir = reader.text("run", "out_dir", "out");

    const std::string suite_value = reader.text("run", "suites", "all");
    const auto& names = suites::suite_names();
    for (const std::string& item : split_list(suite_value)) {
        if (item == "all") {
            cfg.selected_suites = names;
            break;
        }
        if (std::find(names.begin(), names.end(), item) == names.end()) {
            const auto* entry = reader.find("run", "suites");
            throw ConfigError(entry ? entry->line : 0,
                              "unknown suite '" + item + "'");
        }
        if (std::find(cfg.selected_suites.begin(), cfg.selected_suites.end(),
                      item) == cfg.selected_suites.end()) {
            cfg.selected_suites.push_back(item);
        }
    }
    if (cfg.selected_suites.empty()) cfg.selected_suites = names;

    cfg.axioms.n_pairs = reader.integer("axioms", "n_pairs", cfg.axioms.n_pairs);
    cfg.axioms.n_paths = reader.integer("axioms", "n_paths", cfg.axioms.n_paths);
    cfg.axioms.statistical_paths =
        reader.integer("axioms", "statistical_paths", cfg.axioms.statistical_paths);

    cfg.integrals.moment_paths =
        reader.integer("integrals", "moment_paths", cfg.integrals.moment_paths);
    cfg.integrals.n_processes =
        reader.integer("integrals", "n_processes", cfg.integrals.n_processes);
    cfg.integrals.process_paths =
        reader.integer("integrals", "process_paths", cfg.integrals.process_paths);
    cfg.integrals.process_steps = static_cast<Index>(
        reader.integer("integrals", "process_steps", cfg.integrals.process_steps));
    cfg.integrals.tail_pass_level =
        reader.number("integrals", "tail_pass_level", cfg.integrals.tail_pass_level);

    cfg.stopping.n_pairs = reader.integer("stopping", "n_pairs", cfg.stopping.n_pairs);
    cfg.stopping.n_paths = reader.integer("stopping", "n_paths", cfg.stopping.n_paths);
    cfg.stopping.dyadic_max_level = static_cast<int>(
        reader.integer("stopping", "dyadic_max_level", cfg.stopping.dyadic_max_level));

    cfg.ito.n_paths = reader.integer("ito", "n_paths", cfg.ito.n_paths);
    cfg.ito.fine_steps =
        static_cast<Index>(reader.integer("ito", "fine_steps", cfg.ito.fine_steps));
    cfg.ito.n_levels = static_cast<int>(reader.integer("ito", "n_levels", cfg.ito.n_levels));
    cfg.ito.remainder_paths =
        reader.integer("ito", "remainder_paths", cfg.ito.remainder_paths);

    cfg.pde.mc_paths = reader.integer("pde", "mc_paths", cfg.pde.mc_paths);
    cfg.pde.dx = reader.number("pde", "dx", cfg.pde.dx);
    cfg.pde.cfl_fraction = reader.number("pde", "cfl_fraction", cfg.pde.cfl_fraction);
    cfg.pde.scheme_tolerance =
        reader.number("pde", "scheme_tolerance", cfg.pde.scheme_tolerance);

    reader.fail_on_unconsumed();

    if (cfg.setup.n_steps < 2) throw ConfigError(0, "grid.n_steps must be >= 2");
    if (cfg.pde.scheme_tolerance <= 0.0 || cfg.integrals.tail_pass_level <= 0.0) {
        throw ConfigError(0, "tolerances must be positive");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

} // namespace gexp
