// Acceptance gate: runs every verification suite at its reference
// parameters and reports one line per acceptance criterion. Exits non-zero
// when any criterion fails.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "gexp/report.hpp"
#include "gexp/suites.hpp"

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> case_ids;
};

} // namespace

int main() {
    using namespace gexp;
    using namespace gexp::suites;

    EngineSetup setup;  // band (1,2), horizon 1, 512 steps, 11+4 controls
    const AxiomsParams axioms_params;        // 10^4 pairs
    const IntegralsParams integrals_params;  // 10^5 moment paths, 100 processes
    const StoppingParams stopping_params;    // 10^3 pairs x 10^3 paths, n <= 10
    const ItoParams ito_params;              // grids 2^7..2^11, cells 2^5..2^9
    const PdeParams pde_params;

    std::vector<SuiteReport> reports;
    reports.push_back(run_axioms(setup, axioms_params));
    reports.push_back(run_integrals(setup, integrals_params));
    reports.push_back(run_stopping(setup, stopping_params));
    reports.push_back(run_ito(setup, ito_params));
    reports.push_back(run_pde(setup, pde_params));

    std::map<std::string, const CaseRecord*> by_id;
    for (const auto& suite : reports) {
        for (const auto& c : suite.cases) by_id[c.case_id] = &c;
    }

    const std::vector<Criterion> criteria = {
        {"1 sublinear axioms exact on randomized pairs",
         {"axioms.monotonicity", "axioms.constant", "axioms.subadditivity",
          "axioms.homogeneity", "axioms.generator-sublinearity"}},
        {"2 G-normal absolute moments p in {1,2,4} within 3 std errors",
         {"integrals.moment-p1", "integrals.moment-p2", "integrals.moment-p4"}},
        {"3 integral zero-mean and energy bound over the process corpus",
         {"integrals.zero-mean", "integrals.energy"}},
        {"4 maximal (Doob-type) bound over the process corpus",
         {"integrals.doob"}},
        {"5 stopped-integral identity exact on the grid",
         {"stopping.identity"}},
        {"6 dyadic sandwich and indicator L1 gap",
         {"stopping.dyadic-sandwich", "stopping.dyadic-monotone",
          "stopping.indicator-l1-gap"}},
        {"7 generalized calculus residuals: order, exactness, localization",
         {"ito.rms-decreasing", "ito.order-near-half", "ito.constant-exact",
          "ito.identity-exact", "ito.affine-machine-zero", "ito.quadratic-identity",
          "ito.localized-consistency"}},
        {"8 second-order remainder moments decay with the refinement",
         {"ito.remainder-quadratic-zero", "ito.remainder-taylor-decay",
          "ito.remainder-envelope", "ito.remainder-cross-decay",
          "ito.remainder-cross-bound"}},
        {"9 truncation tails decrease and vanish at the largest cutoff",
         {"integrals.tail-monotone", "integrals.tail-vanishes"}},
        {"10 Monte Carlo vs G-heat cross-validation with closed forms",
         {"pde.cross-x2", "pde.cross-negx2", "pde.cross-call",
          "pde.closedform-x2", "pde.closedform-call"}},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        bool pass = true;
        std::string detail;
        for (const auto& id : criterion.case_ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                pass = false;
                detail += " missing:" + id;
                continue;
            }
            if (it->second->status == CaseStatus::fail) {
                pass = false;
                char buf[128];
                std::snprintf(buf, sizeof(buf), " %s(observed=%.6g tol=%.6g)",
                              id.c_str(), it->second->observed, it->second->tolerance);
                detail += buf;
            }
        }
        std::printf("[%s] criterion %s%s\n", pass ? "PASS" : "FAIL",
                    criterion.label.c_str(), detail.c_str());
        if (!pass) ++failures;
    }

    for (const auto& suite : reports) {
        std::printf("suite %-10s %2d cases, %d failed, %.1fs\n", suite.suite.c_str(),
                    static_cast<int>(suite.cases.size()), suite.fail_count(),
                    suite.wall_seconds);
    }
    return failures == 0 ? 0 : 1;
}
