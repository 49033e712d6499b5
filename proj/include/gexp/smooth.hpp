#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "gexp/random.hpp"

namespace gexp {

// phi(t, x) on [0,T] x R^n (n <= 4) with first and second space derivatives
// and a time derivative. Derivatives are either user-supplied (and audited
// against central differences) or generated by central differences with
// step h = eps^{1/3} max(1, |x_i|).
class SmoothFunction {
public:
    using Vec = Eigen::VectorXd;
    using ValueFn = std::function<double(double t, const Vec& x)>;
    using PartialFn = std::function<double(int i, double t, const Vec& x)>;
    using SecondFn = std::function<double(int i, int j, double t, const Vec& x)>;

    static SmoothFunction from_callable(std::string id, int dimension, ValueFn phi);
    static SmoothFunction with_derivatives(std::string id, int dimension, ValueFn phi,
                                           ValueFn time_derivative, PartialFn gradient,
                                           SecondFn hessian);

    double value(double t, const Vec& x) const { return phi_(t, x); }
    double time_derivative(double t, const Vec& x) const;
    double partial(int i, double t, const Vec& x) const;
    double second_partial(int i, int j, double t, const Vec& x) const;

    int dimension() const { return dimension_; }
    const std::string& id() const { return id_; }
    bool has_user_derivatives() const { return static_cast<bool>(grad_); }

    struct AuditReport {
        double max_rel_error = 0.0;
        bool pass = true;
    };

    // Compares user-supplied derivatives with central differences at
    // `probes` random points in [0,T] x [-radius, radius]^n; passes when
    // the worst relative error is <= tol.
    AuditReport audit_derivatives(double horizon, double radius, int probes,
                                  std::uint64_t seed, double tol = 1e-4) const;

private:
    SmoothFunction() = default;

    std::string id_;
    int dimension_ = 1;
    ValueFn phi_;
    ValueFn time_derivative_;
    PartialFn grad_;
    SecondFn hess_;
};

// phi_k equal to phi for |x|_inf <= 2k, smoothly flattened on [2k, 3k] and
// constant in each coordinate beyond; C^2 via a quintic transition. Used by
// the localized Ito formula for phi with unbounded derivatives.
SmoothFunction clamp_outside(const SmoothFunction& phi, double k);

// one-dimensional convenience constructors
SmoothFunction scalar_function(std::string id, std::function<double(double)> f);
SmoothFunction scalar_function(std::string id, std::function<double(double)> f,
                               std::function<double(double)> df,
                               std::function<double(double)> ddf);

} // namespace gexp
