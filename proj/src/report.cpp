#include "gexp/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gexp {

bool SuiteReport::all_passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const CaseRecord& c) {
        return c.status != CaseStatus::fail;
    });
}

int SuiteReport::fail_count() const {
    return static_cast<int>(std::count_if(
        cases.begin(), cases.end(),
        [](const CaseRecord& c) { return c.status == CaseStatus::fail; }));
}

CaseRecord& SuiteReport::add(CaseRecord record) {
    if (!anchor_known(record.anchor)) {
        throw std::logic_error("unknown report anchor: " + record.anchor);
    }
    cases.push_back(std::move(record));
    return cases.back();
}

const std::vector<std::pair<std::string, std::string>>& traceability_table() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"sublinear.monotonicity",
         "X >= Y on every sampled path implies E(X) >= E(Y)"},
        {"sublinear.constant", "E(c) = c for constants"},
        {"sublinear.subadditivity", "E(X) - E(Y) <= E(X - Y)"},
        {"sublinear.homogeneity", "E(lambda X) = lambda E(X) for lambda >= 0"},
        {"generator.band-values",
         "G(a) = (sigma_hi^2 a^+ - sigma_lo^2 a^-)/2 matches the band sup/inf"},
        {"generator.sublinearity",
         "G(a+b) <= G(a) + G(b) and G(lambda a) = lambda G(a), lambda >= 0"},
        {"martingale.increment-mean-zero",
         "E(xi (B_T - B_t)) = 0 for bounded adapted xi"},
        {"martingale.increment-energy",
         "E(xi^2 (B_T - B_t)^2 - sigma_hi^2 xi^2 (T - t)) <= 0"},
        {"gnormal.abs-moment",
         "E(|B_1|^p) equals the Gaussian |x|^p moment at the max variance"},
        {"integral.zero-mean", "E(int eta dB) = 0, both the sup and its conjugate"},
        {"integral.energy-bound",
         "E((int eta dB)^2) <= sigma_hi^2 E(int eta^2 dt)"},
        {"integral.maximal-bound",
         "E(sup_t (int_0^t eta dB)^2) <= 2 sigma_hi^2 E(int eta^2 dt)"},
        {"integral.linearity",
         "interval additivity and linearity of the stochastic integral"},
        {"integral.continuity",
         "largest per-step jump of the running integral decays like sqrt(dt)"},
        {"integral.truncation-tail",
         "E(int |B|^2 1{|B|>n} dt) decreases to 0 in the cutoff"},
        {"integral.absolute-continuity",
         "small time-support of |eta| <= 1 forces small weighted moments"},
        {"qv.band-bound",
         "sigma_lo^2 dt <= d<B> <= sigma_hi^2 dt on every step"},
        {"scenario.reproducible",
         "ensembles are bit-identical for any parallelism and repeat runs"},
        {"gaussian.step-kurtosis",
         "normalized steps under a constant control have Gaussian kurtosis"},
        {"stopping.identity",
         "int_0^{t^tau} eta dB equals the integral of the masked integrand"},
        {"stopping.dyadic-sandwich", "0 <= tau_n - tau <= 2^-n T on every path"},
        {"stopping.dyadic-gap-l1", "E(tau_n - tau) <= 2^-n T"},
        {"stopping.adapted",
         "stop values are unchanged by perturbing the path after the stop"},
        {"stopping.threshold-scan",
         "integral-threshold stops equal the brute-force running-integral scan"},
        {"stopping.localization-stable",
         "stopped integrals at higher localization levels agree on {tau_n = T}"},
        {"ito.residual-order",
         "residual RMS decreases under refinement with order near 1/2"},
        {"ito.affine-exact", "affine phi leaves zero residual"},
        {"ito.quadratic-identity",
         "for phi = x^2 on B: residual + <B> equals the sum of squared steps"},
        {"ito.localized-consistency",
         "stopped state with clamped phi agrees exactly on in-range paths"},
        {"remainder.quadratic-zero",
         "second-derivative increments vanish identically for quadratic phi"},
        {"remainder.taylor-decay",
         "E|sum taylor_k|^2 -> 0 inside the envelope N sum_k E|taylor_k|^2"},
        {"remainder.cross-decay",
         "second moments of the dt/dqv/dB cross sums decrease under refinement"},
        {"remainder.cross-bound",
         "Cauchy-Schwarz majorant dominates the dqv*dqv cross sum"},
        {"pde.cross-check",
         "Monte Carlo sup-expectation matches the G-heat finite-difference value"},
        {"pde.closed-form",
         "convex payoffs reduce to max-volatility Gaussian closed forms"},
        {"pde.scheme-monotone", "raising the payoff never lowers the scheme value"},
        {"pde.scheme-constant", "constant payoffs are preserved exactly"},
        {"pde.scheme-sublinear", "scheme value is subadditive in the payoff"},
        {"pde.degenerate-heat",
         "a degenerate band reproduces classical heat-kernel expectations"},
    };
    return table;
}

bool anchor_known(const std::string& anchor) {
    const auto& table = traceability_table();
    return std::any_of(table.begin(), table.end(),
                       [&](const auto& row) { return row.first == anchor; });
}

std::string status_name(CaseStatus status) {
    switch (status) {
        case CaseStatus::pass: return "pass";
        case CaseStatus::fail: return "fail";
        case CaseStatus::warn: return "warn";
    }
    return "unknown";
}

std::string render_json_report(const std::vector<SuiteReport>& suites,
                               std::uint64_t master_seed) {
    nlohmann::ordered_json root;
    root["schema_version"] = 1;
    root["master_seed"] = master_seed;
    nlohmann::ordered_json suite_array = nlohmann::ordered_json::array();
    for (const auto& suite : suites) {
        nlohmann::ordered_json s;
        s["suite"] = suite.suite;
        s["passed"] = suite.all_passed();
        nlohmann::ordered_json cases = nlohmann::ordered_json::array();
        for (const auto& c : suite.cases) {
            nlohmann::ordered_json jc;
            jc["case_id"] = c.case_id;
            jc["description"] = c.description;
            jc["anchor"] = c.anchor;
            jc["status"] = status_name(c.status);
            jc["observed"] = c.observed;
            jc["expected"] = c.expected;
            jc["tolerance"] = c.tolerance;
            jc["deterministic"] = c.deterministic;
            cases.push_back(std::move(jc));
        }
        s["cases"] = std::move(cases);
        suite_array.push_back(std::move(s));
    }
    root["suites"] = std::move(suite_array);
    return root.dump(2) + "\n";
}

namespace {

std::string safe_file_stem(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
            c = '_';
        }
    }
    return out;
}

} // namespace

std::vector<std::string> emit_plot_data(const SuiteReport& suite,
                                        const std::string& out_dir) {
    std::vector<std::string> written;
    for (const auto& table : suite.tables) {
        const std::string file_name =
            suite.suite + "_" + safe_file_stem(table.name) + ".csv";
        std::ofstream out(std::filesystem::path(out_dir) / file_name);
        if (!out) throw std::runtime_error("cannot write " + file_name);
        for (std::size_t h = 0; h < table.headers.size(); ++h) {
            out << (h ? "," : "") << table.headers[h];
        }
        out << "\n";
        char buf[64];
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            bool first = true;
            if (!table.row_labels.empty()) {
                out << table.row_labels[r];
                first = false;
            }
            for (const double v : table.rows[r]) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << (first ? "" : ",") << buf;
                first = false;
            }
            out << "\n";
        }
        written.push_back(file_name);
    }
    for (const auto& [name, content] : suite.json_artifacts) {
        const std::string file_name = suite.suite + "_" + name + ".json";
        std::ofstream out(std::filesystem::path(out_dir) / file_name);
        if (!out) throw std::runtime_error("cannot write " + file_name);
        out << content;
        written.push_back(file_name);
    }
    return written;
}

void write_reports(const std::vector<SuiteReport>& suites,
                   std::uint64_t master_seed, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(std::filesystem::path(out_dir) / "report.json");
        if (!out) throw std::runtime_error("cannot write report.json");
        out << render_json_report(suites, master_seed);
    }
    {
        // wall-clock sidecar; kept out of report.json so identical runs
        // produce identical main reports
        nlohmann::ordered_json timing;
        for (const auto& suite : suites) {
            timing[suite.suite] = suite.wall_seconds;
        }
        std::ofstream out(std::filesystem::path(out_dir) / "timing.json");
        out << timing.dump(2) << "\n";
    }
    for (const auto& suite : suites) emit_plot_data(suite, out_dir);
}

} // namespace gexp
