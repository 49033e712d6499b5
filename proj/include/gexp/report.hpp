#pragma once

#include <string>
#include <vector>

namespace gexp {

enum class CaseStatus { pass, fail, warn };

// Verification case: a deterministic case asserts an exact identity (any
// violation is a code defect); a statistical one compares against its
// tolerance, conventionally 3 standard errors.
struct CaseRecord {
    std::string case_id;
    std::string description;
    std::string anchor;  // identity-registry key, see traceability_table()
    CaseStatus status = CaseStatus::pass;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool deterministic = false;
};

// Plot-ready table attached to a suite (written as CSV by the runner).
// When row_labels is non-empty it supplies a leading text column.
struct PlotTable {
    std::string name;
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels;
};

struct SuiteReport {
    std::string suite;
    std::vector<CaseRecord> cases;
    std::vector<PlotTable> tables;
    // pre-serialized JSON documents written as <suite>_<name>.json
    std::vector<std::pair<std::string, std::string>> json_artifacts;
    double wall_seconds = 0.0;

    bool all_passed() const;
    int fail_count() const;
    CaseRecord& add(CaseRecord record);
};

// Registry of the identities the engine verifies; every case anchor must
// resolve here so reports stay navigable.
const std::vector<std::pair<std::string, std::string>>& traceability_table();
bool anchor_known(const std::string& anchor);

std::string status_name(CaseStatus status);

// report.json (schema_version 1, byte-stable across identical runs) plus
// per-suite CSV tables; wall-clock times go to the timing.json sidecar so
// the main report stays reproducible.
void write_reports(const std::vector<SuiteReport>& suites,
                   std::uint64_t master_seed, const std::string& out_dir);

// The CSV emission half of write_reports (two-column convergence tables,
// scenario means, dyadic gaps, ...). Returns the written file names.
std::vector<std::string> emit_plot_data(const SuiteReport& suite,
                                        const std::string& out_dir);

std::string render_json_report(const std::vector<SuiteReport>& suites,
                               std::uint64_t master_seed);

} // namespace gexp
