#include "gexp/smooth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gexp {

namespace {

double fd_step(double x) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::abs(x));
}

} // namespace

SmoothFunction SmoothFunction::from_callable(std::string id, int dimension, ValueFn phi) {
    if (dimension < 1 || dimension > 4) {
        throw std::invalid_argument("SmoothFunction: dimension must be 1..4");
    }
    SmoothFunction f;
    f.id_ = std::move(id);
    f.dimension_ = dimension;
    f.phi_ = std::move(phi);
    return f;
}

SmoothFunction SmoothFunction::with_derivatives(std::string id, int dimension,
                                                ValueFn phi, ValueFn time_derivative,
                                                PartialFn gradient, SecondFn hessian) {
    SmoothFunction f = from_callable(std::move(id), dimension, std::move(phi));
    f.time_derivative_ = std::move(time_derivative);
    f.grad_ = std::move(gradient);
    f.hess_ = std::move(hessian);
    return f;
}

double SmoothFunction::time_derivative(double t, const Vec& x) const {
    if (time_derivative_) return time_derivative_(t, x);
    const double h = fd_step(t);
    // One-sided near t = 0 so probes never leave the time domain.
    if (t < h) {
        return (phi_(t + h, x) - phi_(t, x)) / h;
    }
    return (phi_(t + h, x) - phi_(t - h, x)) / (2.0 * h);
}

double SmoothFunction::partial(int i, double t, const Vec& x) const {
    if (grad_) return grad_(i, t, x);
    const double h = fd_step(x[i]);
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (phi_(t, xp) - phi_(t, xm)) / (2.0 * h);
}

double SmoothFunction::second_partial(int i, int j, double t, const Vec& x) const {
    if (hess_) return hess_(i, j, t, x);
    if (i == j) {
        const double h = fd_step(x[i]);
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        return (phi_(t, xp) - 2.0 * phi_(t, x) + phi_(t, xm)) / (h * h);
    }
    const double hi = fd_step(x[i]);
    const double hj = fd_step(x[j]);
    Vec xpp = x, xpm = x, xmp = x, xmm = x;
    xpp[i] += hi; xpp[j] += hj;
    xpm[i] += hi; xpm[j] -= hj;
    xmp[i] -= hi; xmp[j] += hj;
    xmm[i] -= hi; xmm[j] -= hj;
    return (phi_(t, xpp) - phi_(t, xpm) - phi_(t, xmp) + phi_(t, xmm)) /
           (4.0 * hi * hj);
}

SmoothFunction::AuditReport SmoothFunction::audit_derivatives(
    double horizon, double radius, int probes, std::uint64_t seed, double tol) const {
    AuditReport report;
    if (!has_user_derivatives()) return report;

    SmoothFunction numeric = from_callable(id_ + ".fd", dimension_, phi_);
    const NormalStream stream{mix64(seed)};
    std::uint64_t draw = 0;
    auto next_uniform = [&] { return stream.uniform(draw++); };

    auto check = [&](double analytic, double fd) {
        const double scale = std::max({1.0, std::abs(analytic), std::abs(fd)});
        report.max_rel_error =
            std::max(report.max_rel_error, std::abs(analytic - fd) / scale);
    };

    for (int p = 0; p < probes; ++p) {
        const double t = horizon * next_uniform();
        Vec x(dimension_);
        for (int i = 0; i < dimension_; ++i) {
            x[i] = radius * (2.0 * next_uniform() - 1.0);
        }
        check(time_derivative(t, x), numeric.time_derivative(t, x));
        for (int i = 0; i < dimension_; ++i) {
            check(partial(i, t, x), numeric.partial(i, t, x));
            for (int j = 0; j <= i; ++j) {
                check(second_partial(i, j, t, x), numeric.second_partial(i, j, t, x));
            }
        }
    }
    report.pass = report.max_rel_error <= tol;
    return report;
}

namespace {

// C^2 coordinate clamp: identity on [-2k, 2k], quintic flattening on
// [2k, 3k], constant 2.5k beyond. value/first/second derivative of the map.
struct CoordinateClamp {
    double k;

    double map(double u) const {
        const double a = std::abs(u);
        if (a <= 2.0 * k) return u;
        const double s = std::min((a - 2.0 * k) / k, 1.0);
        // antiderivative of 1 - (6 s^5 - 15 s^4 + 10 s^3)
        const double inner = s - (s * s * s * s * s * s - 3.0 * s * s * s * s * s +
                                  2.5 * s * s * s * s);
        return std::copysign(2.0 * k + k * inner, u);
    }
    double d1(double u) const {
        const double a = std::abs(u);
        if (a <= 2.0 * k) return 1.0;
        if (a >= 3.0 * k) return 0.0;
        const double s = (a - 2.0 * k) / k;
        return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    }
    double d2(double u) const {
        const double a = std::abs(u);
        if (a <= 2.0 * k || a >= 3.0 * k) return 0.0;
        const double s = (a - 2.0 * k) / k;
        const double ds = s * s * (30.0 + s * (-60.0 + 30.0 * s));
        return -std::copysign(ds / k, u);
    }
};

} // namespace

SmoothFunction clamp_outside(const SmoothFunction& phi, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("clamp_outside: k > 0");
    const CoordinateClamp clamp{k};
    const int n = phi.dimension();

    auto mapped = [clamp, n](const SmoothFunction::Vec& x) {
        SmoothFunction::Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = clamp.map(x[i]);
        return y;
    };

    auto inside = [k, n](const SmoothFunction::Vec& x) {
        for (int i = 0; i < n; ++i) {
            if (std::abs(x[i]) > 2.0 * k) return false;
        }
        return true;
    };

    SmoothFunction::ValueFn value = [phi, mapped, inside](double t,
                                                          const SmoothFunction::Vec& x) {
        if (inside(x)) return phi.value(t, x);  // bitwise equal to phi in range
        return phi.value(t, mapped(x));
    };
    SmoothFunction::ValueFn dt = [phi, mapped, inside](double t,
                                                       const SmoothFunction::Vec& x) {
        if (inside(x)) return phi.time_derivative(t, x);
        return phi.time_derivative(t, mapped(x));
    };
    SmoothFunction::PartialFn grad =
        [phi, clamp, mapped, inside](int i, double t, const SmoothFunction::Vec& x) {
            if (inside(x)) return phi.partial(i, t, x);
            return phi.partial(i, t, mapped(x)) * clamp.d1(x[i]);
        };
    SmoothFunction::SecondFn hess = [phi, clamp, mapped, inside](
                                        int i, int j, double t,
                                        const SmoothFunction::Vec& x) {
        if (inside(x)) return phi.second_partial(i, j, t, x);
        const SmoothFunction::Vec y = mapped(x);
        double out = phi.second_partial(i, j, t, y) * clamp.d1(x[i]) * clamp.d1(x[j]);
        if (i == j) out += phi.partial(i, t, y) * clamp.d2(x[i]);
        return out;
    };

    return SmoothFunction::with_derivatives(phi.id() + ".clamp(" + std::to_string(k) + ")",
                                            n, std::move(value), std::move(dt),
                                            std::move(grad), std::move(hess));
}

SmoothFunction scalar_function(std::string id, std::function<double(double)> f) {
    return SmoothFunction::from_callable(
        std::move(id), 1,
        [f = std::move(f)](double, const SmoothFunction::Vec& x) { return f(x[0]); });
}

SmoothFunction scalar_function(std::string id, std::function<double(double)> f,
                               std::function<double(double)> df,
                               std::function<double(double)> ddf) {
    return SmoothFunction::with_derivatives(
        std::move(id), 1,
        [f = std::move(f)](double, const SmoothFunction::Vec& x) { return f(x[0]); },
        [](double, const SmoothFunction::Vec&) { return 0.0; },
        [df = std::move(df)](int, double, const SmoothFunction::Vec& x) {
            return df(x[0]);
        },
        [ddf = std::move(ddf)](int, int, double, const SmoothFunction::Vec& x) {
            return ddf(x[0]);
        });
}

} // namespace gexp
