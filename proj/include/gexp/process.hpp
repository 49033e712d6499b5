#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gexp/expectation.hpp"
#include "gexp/path.hpp"

namespace gexp {

enum class IntegralKind { against_db, against_dt, against_dqv };

// Running integral on the grid: values[0] = 0 and values[k+1] =
// values[k] + eta_k * dX_k with left-point coefficients.
struct IntegralPath {
    GridPtr grid;
    Eigen::ArrayXd values;
    IntegralKind kind = IntegralKind::against_db;

    double final_value() const { return values[values.size() - 1]; }
    double at(double t) const;  // value at a grid node; throws off-grid
    double max_abs() const { return values.abs().maxCoeff(); }
};

// Adapted integrand sampled at grid nodes: rule(k, path) may read the path
// on [0, t_k] only. An optional bulk sampler produces all node values in
// one pass (used where per-node evaluation would be quadratic, e.g. stop
// indicators). `bound` declares |eta| <= bound where required.
struct GridProcess {
    std::string id;
    std::function<double(Index k, const SamplePath&)> rule;
    std::function<Eigen::ArrayXd(const SamplePath&)> bulk;
    std::optional<double> bound;
};

// Node values of the integrand along one path.
Eigen::ArrayXd sample_nodes(const GridProcess& eta, const SamplePath& path);

// Step process with bounded adapted coefficients: eta_t = xi_j on
// [t_j, t_{j+1}); coefficient j reads the path on [0, breakpoint_j] only.
struct SimpleProcess {
    struct Coefficient {
        std::function<double(const SamplePath&, Index node)> eval;
    };
    std::vector<double> breakpoints;  // 0 = s_0 < ... < s_M = horizon
    std::vector<Coefficient> coefficients;  // size M (one per segment)
    double bound = 0.0;

    GridProcess to_grid() const;
    void validate() const;
};

IntegralPath ito_integral(const GridProcess& eta, const SamplePath& path);
IntegralPath bochner_integral(const GridProcess& eta, const SamplePath& path);
IntegralPath qv_integral(const GridProcess& eta, const SamplePath& path);

// Simple-process overloads; breakpoints must be grid nodes (alignment
// error otherwise, no silent interpolation).
IntegralPath ito_integral(const SimpleProcess& eta, const SamplePath& path);
IntegralPath bochner_integral(const SimpleProcess& eta, const SamplePath& path);
IntegralPath qv_integral(const SimpleProcess& eta, const SamplePath& path);

// ||eta||_{M^p} = (sup over scenarios of mean of int_0^T |eta|^p dt)^{1/p};
// requires p >= 1.
double mp_norm(const GridProcess& eta, double p, const ControlSet& controls,
               const EvaluationConfig& config);

// Pointwise clamp to [-n, n].
GridProcess truncate(const GridProcess& eta, double n);

// Pointwise product; eta must carry a declared bound (contract error
// otherwise). The product of a bounded process with an M^p one stays
// integrable, which is what makes stopped integrands admissible.
GridProcess product(const GridProcess& bounded_eta, const GridProcess& x);

GridProcess constant_process(double value);
GridProcess brownian_process();       // eta_k = b[k]
GridProcess abs_brownian_squared();   // eta_k = b[k]^2

} // namespace gexp
