#include "gexp/process.hpp"

#include <cmath>
#include <stdexcept>

namespace gexp {

double IntegralPath::at(double t) const { return values[grid->index_of(t)]; }

Eigen::ArrayXd sample_nodes(const GridProcess& eta, const SamplePath& path) {
    if (eta.bulk) return eta.bulk(path);
    if (!eta.rule) throw std::invalid_argument("GridProcess '" + eta.id + "' has no rule");
    Eigen::ArrayXd values(path.n_nodes());
    for (Index k = 0; k < path.n_nodes(); ++k) values[k] = eta.rule(k, path);
    return values;
}

namespace {

IntegralPath accumulate(const Eigen::ArrayXd& eta_nodes, const SamplePath& path,
                        IntegralKind kind) {
    const Eigen::ArrayXd* dx = nullptr;
    switch (kind) {
        case IntegralKind::against_db: dx = &path.db; break;
        case IntegralKind::against_dt: dx = &path.grid->dt(); break;
        case IntegralKind::against_dqv: dx = &path.dqv; break;
    }
    IntegralPath out;
    out.grid = path.grid;
    out.kind = kind;
    out.values.resize(path.n_nodes());
    out.values[0] = 0.0;
    const Index n = path.n_steps();
    for (Index k = 0; k < n; ++k) {
        out.values[k + 1] = out.values[k] + eta_nodes[k] * (*dx)[k];
    }
    return out;
}

// Segment index per grid step for an aligned simple process.
std::vector<Index> segment_of_step(const SimpleProcess& eta, const TimeGrid& grid) {
    const auto m = static_cast<Index>(eta.coefficients.size());
    std::vector<Index> node_of_breakpoint(eta.breakpoints.size());
    for (std::size_t j = 0; j < eta.breakpoints.size(); ++j) {
        node_of_breakpoint[j] = grid.index_of(eta.breakpoints[j]);  // alignment error if absent
    }
    std::vector<Index> seg(static_cast<std::size_t>(grid.n_steps()));
    Index j = 0;
    for (Index k = 0; k < grid.n_steps(); ++k) {
        while (j + 1 < m && k >= node_of_breakpoint[static_cast<std::size_t>(j + 1)]) ++j;
        seg[static_cast<std::size_t>(k)] = j;
    }
    return seg;
}

Eigen::ArrayXd simple_nodes(const SimpleProcess& eta, const SamplePath& path) {
    eta.validate();
    const auto seg = segment_of_step(eta, *path.grid);
    std::vector<Index> node_of_breakpoint(eta.breakpoints.size());
    for (std::size_t j = 0; j < eta.breakpoints.size(); ++j) {
        node_of_breakpoint[j] = path.grid->index_of(eta.breakpoints[j]);
    }
    // Evaluate each coefficient once, at its own breakpoint node.
    std::vector<double> xi(eta.coefficients.size());
    for (std::size_t j = 0; j < eta.coefficients.size(); ++j) {
        xi[j] = eta.coefficients[j].eval(path, node_of_breakpoint[j]);
        if (std::abs(xi[j]) > eta.bound) {
            throw std::logic_error("SimpleProcess: coefficient exceeds its declared bound");
        }
    }
    Eigen::ArrayXd nodes(path.n_nodes());
    for (Index k = 0; k < path.n_steps(); ++k) {
        nodes[k] = xi[static_cast<std::size_t>(seg[static_cast<std::size_t>(k)])];
    }
    nodes[path.n_steps()] = xi.back();
    return nodes;
}

} // namespace

void SimpleProcess::validate() const {
    if (breakpoints.size() < 2 || coefficients.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("SimpleProcess: need M+1 breakpoints for M coefficients");
    }
    if (breakpoints.front() != 0.0) {
        throw std::invalid_argument("SimpleProcess: first breakpoint must be 0");
    }
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
        if (!(breakpoints[j] < breakpoints[j + 1])) {
            throw std::invalid_argument("SimpleProcess: breakpoints must increase");
        }
    }
    if (!(bound > 0.0)) {
        throw std::invalid_argument("SimpleProcess: needs a positive declared bound");
    }
}

GridProcess SimpleProcess::to_grid() const {
    validate();
    SimpleProcess copy = *this;
    GridProcess out;
    out.id = "simple";
    out.bound = bound;
    out.bulk = [copy](const SamplePath& path) { return simple_nodes(copy, path); };
    out.rule = [copy](Index k, const SamplePath& path) {
        return simple_nodes(copy, path)[k];
    };
    return out;
}

IntegralPath ito_integral(const GridProcess& eta, const SamplePath& path) {
    return accumulate(sample_nodes(eta, path), path, IntegralKind::against_db);
}
IntegralPath bochner_integral(const GridProcess& eta, const SamplePath& path) {
    return accumulate(sample_nodes(eta, path), path, IntegralKind::against_dt);
}
IntegralPath qv_integral(const GridProcess& eta, const SamplePath& path) {
    return accumulate(sample_nodes(eta, path), path, IntegralKind::against_dqv);
}

IntegralPath ito_integral(const SimpleProcess& eta, const SamplePath& path) {
    return accumulate(simple_nodes(eta, path), path, IntegralKind::against_db);
}
IntegralPath bochner_integral(const SimpleProcess& eta, const SamplePath& path) {
    return accumulate(simple_nodes(eta, path), path, IntegralKind::against_dt);
}
IntegralPath qv_integral(const SimpleProcess& eta, const SamplePath& path) {
    return accumulate(simple_nodes(eta, path), path, IntegralKind::against_dqv);
}

double mp_norm(const GridProcess& eta, double p, const ControlSet& controls,
               const EvaluationConfig& config) {
    if (!(p >= 1.0)) throw std::domain_error("mp_norm: requires p >= 1");
    PayoffFunctional time_lp{
        "mp_norm(" + eta.id + ")", config.grid->horizon(),
        [eta, p](const SamplePath& path) {
            const Eigen::ArrayXd nodes = sample_nodes(eta, path);
            const auto& dt = path.grid->dt();
            double acc = 0.0;
            for (Index k = 0; k < path.n_steps(); ++k) {
                acc += std::pow(std::abs(nodes[k]), p) * dt[k];
            }
            return acc;
        }};
    const ExpectationEstimate est = sup_expectation(time_lp, controls, config);
    return std::pow(est.value, 1.0 / p);
}

GridProcess truncate(const GridProcess& eta, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("truncate: level must be > 0");
    GridProcess out;
    out.id = eta.id + ".trunc";
    out.bound = n;
    out.rule = [eta, n](Index k, const SamplePath& path) {
        return std::clamp(eta.rule ? eta.rule(k, path) : eta.bulk(path)[k], -n, n);
    };
    if (eta.bulk) {
        out.bulk = [eta, n](const SamplePath& path) {
            return eta.bulk(path).cwiseMax(-n).cwiseMin(n).eval();
        };
    }
    return out;
}

GridProcess product(const GridProcess& bounded_eta, const GridProcess& x) {
    if (!bounded_eta.bound.has_value()) {
        throw std::logic_error("product: left factor must declare a bound");
    }
    GridProcess out;
    out.id = bounded_eta.id + "*" + x.id;
    if (x.bound) out.bound = *bounded_eta.bound * *x.bound;
    const bool left_bulk = static_cast<bool>(bounded_eta.bulk);
    const bool right_bulk = static_cast<bool>(x.bulk);
    if (left_bulk || right_bulk) {
        out.bulk = [bounded_eta, x](const SamplePath& path) {
            return (sample_nodes(bounded_eta, path) * sample_nodes(x, path)).eval();
        };
    }
    if (bounded_eta.rule && x.rule) {
        out.rule = [l = bounded_eta.rule, r = x.rule](Index k, const SamplePath& path) {
            return l(k, path) * r(k, path);
        };
    }
    return out;
}

GridProcess constant_process(double value) {
    GridProcess out;
    out.id = "const";
    out.bound = std::abs(value);
    out.rule = [value](Index, const SamplePath&) { return value; };
    out.bulk = [value](const SamplePath& path) {
        return Eigen::ArrayXd::Constant(path.n_nodes(), value).eval();
    };
    return out;
}

GridProcess brownian_process() {
    GridProcess out;
    out.id = "B";
    out.rule = [](Index k, const SamplePath& path) { return path.b[k]; };
    out.bulk = [](const SamplePath& path) { return path.b; };
    return out;
}

GridProcess abs_brownian_squared() {
    GridProcess out;
    out.id = "B^2";
    out.rule = [](Index k, const SamplePath& path) { return path.b[k] * path.b[k]; };
    out.bulk = [](const SamplePath& path) { return path.b.square().eval(); };
    return out;
}

} // namespace gexp
