#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fhkh/errors.hpp"

namespace fhkh {

/// Degree and real parameters of P_n^{(a,b)}.
struct JacobiParams {
    double a = 0.0;
    double b = 0.0;
    int n = 0;
};

inline void check_jacobi_domain(double a, double b) {
    if (!(a > -1.0) || !(b > -1.0)) {
        throw DomainError("Jacobi parameters must satisfy a > -1 and b > -1");
    }
}

/// Ascending three-term recurrence in the degree.
inline double jacobi_eval(int n, double a, double b, double x) {
    if (n < 0) throw DomainError("jacobi_eval: negative degree");
    if (n == 0) return 1.0;
    const double ab = a + b;
    double p_prev = 1.0;
    double p = 0.5 * (a - b) + 0.5 * (ab + 2.0) * x;
    for (int k = 2; k <= n; ++k) {
        const double c = 2.0 * k + ab;
        const double num = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p -
                           2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p_prev;
        const double den = 2.0 * k * (k + ab) * (c - 2.0);
        p_prev = p;
        p = num / den;
    }
    return p;
}

inline double jacobi_eval(const JacobiParams& jp, double x) { return jacobi_eval(jp.n, jp.a, jp.b, x); }

/// k-th derivative: d^k/dx^k P_n^{(a,b)} = prod_{j=1..k} (n+a+b+j)/2 * P_{n-k}^{(a+k,b+k)}.
inline double jacobi_derivative(int n, double a, double b, double x, int k = 1) {
    if (k < 0) throw DomainError("jacobi_derivative: negative order");
    if (k > n) return 0.0;
    double scale = 1.0;
    for (int j = 1; j <= k; ++j) scale *= 0.5 * (n + a + b + j);
    return scale * jacobi_eval(n - k, a + k, b + k, x);
}

/// Gamma(x+1) / (Gamma(k+1) Gamma(x-k+1)) for real x > -1, via log-Gamma.
inline double generalized_binomial(double x, int k) {
    if (k < 0) return 0.0;
    if (k == 0) return 1.0;
    return std::exp(std::lgamma(x + 1.0) - std::lgamma(k + 1.0) - std::lgamma(x - k + 1.0));
}

inline double log_beta(double p, double q) {
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

/**
 * Gauss rule for  int_lo^hi w(x) f(x) dx  with w = 1 (Legendre) or, on [-1,1],
 * w = (1-x)^a (1+x)^b (Jacobi).
 *
 * Stored weights are multiplied by exp(log_scale) to get the true weights;
 * Jacobi rules keep weights normalised to unit sum so that extreme a, b do
 * not overflow.
 */
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
    Interval interval{};
    double weight_a = 0.0;
    double weight_b = 0.0;
    double log_scale = 0.0;

    double weight(std::size_t i) const { return weights[i] * std::exp(log_scale); }

    /// Sum of weights[i] * f(nodes[i]), without the exp(log_scale) factor.
    template <class F>
    double scaled_sum(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }

    template <class F>
    double integrate(F&& f) const {
        return std::exp(log_scale) * scaled_sum(std::forward<F>(f));
    }
};

namespace detail {

// Golub-Welsch on the symmetric Jacobi matrix of the monic Jacobi recurrence.
// Returns nodes ascending and weights summing to one.
inline void golub_welsch_jacobi(int order, double a, double b, std::vector<double>& nodes,
                                std::vector<double>& weights) {
    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    const double ab = a + b;
    for (int k = 0; k < order; ++k) {
        if (k == 0) {
            diag(0) = (b - a) / (ab + 2.0);
        } else {
            const double c = 2.0 * k + ab;
            diag(k) = (b * b - a * a) / (c * (c + 2.0));
        }
    }
    for (int k = 1; k < order; ++k) {
        double beta;
        if (k == 1) {
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            const double c = 2.0 * k + ab;
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0));
        }
        sub(k - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Golub-Welsch eigen-decomposition failed");
    }
    nodes.resize(static_cast<std::size_t>(order));
    weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = v0 * v0;
    }
}

} // namespace detail

/// Gauss-Legendre rule with `order` points mapped to `iv`.
inline QuadratureRule build_quadrature(int order, Interval iv = {}) {
    if (order < 2) throw DomainError("build_quadrature: order must be >= 2");
    if (!(iv.hi > iv.lo)) throw DomainError("build_quadrature: empty interval");
    QuadratureRule rule;
    rule.order = order;
    rule.interval = iv;
    std::vector<double> x;
    std::vector<double> w;
    detail::golub_welsch_jacobi(order, 0.0, 0.0, x, w);
    // Newton polish and the classical weight formula give full precision.
    for (std::size_t i = 0; i < x.size(); ++i) {
        double xi = x[i];
        for (int it = 0; it < 3; ++it) {
            xi -= jacobi_eval(order, 0.0, 0.0, xi) / jacobi_derivative(order, 0.0, 0.0, xi);
        }
        const double dp = jacobi_derivative(order, 0.0, 0.0, xi);
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    // Exact symmetry about the midpoint.
    for (std::size_t i = 0, j = x.size() - 1; i < j; ++i, --j) {
        const double xs = 0.5 * (x[j] - x[i]);
        const double ws = 0.5 * (w[i] + w[j]);
        x[i] = -xs;
        x[j] = xs;
        w[i] = w[j] = ws;
    }
    if (x.size() % 2 == 1) x[x.size() / 2] = 0.0;
    const double half = 0.5 * (iv.hi - iv.lo);
    const double mid = 0.5 * (iv.hi + iv.lo);
    rule.nodes.resize(x.size());
    rule.weights.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    return rule;
}

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^a (1+x)^b.
inline QuadratureRule build_gauss_jacobi(int order, double a, double b) {
    if (order < 1) throw DomainError("build_gauss_jacobi: order must be >= 1");
    check_jacobi_domain(a, b);
    QuadratureRule rule;
    rule.order = order;
    rule.weight_a = a;
    rule.weight_b = b;
    rule.log_scale = (a + b + 1.0) * std::log(2.0) + log_beta(a + 1.0, b + 1.0);
    detail::golub_welsch_jacobi(order, a, b, rule.nodes, rule.weights);
    return rule;
}

/// A quadrature value with the difference to a rule of twice the order.
struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;

    bool converged(double tol) const { return error_estimate <= tol * std::max(1.0, std::abs(value)); }
};

namespace detail {

inline double jacobi_inner_with(const JacobiParams& p, const JacobiParams& q,
                                const QuadratureRule& rule) {
    const double ra = p.a - rule.weight_a;
    const double rb = p.b - rule.weight_b;
    return rule.integrate([&](double x) {
        double w = 1.0;
        if (ra != 0.0) w *= std::pow(1.0 - x, ra);
        if (rb != 0.0) w *= std::pow(1.0 + x, rb);
        return w * jacobi_eval(p, x) * jacobi_eval(q, x);
    });
}

} // namespace detail

/**
 * int_{-1}^{1} (1-x)^a (1+x)^b P_n1 P_n2 dx.
 *
 * Any part of the weight not built into `rule` is multiplied into the
 * integrand. The error estimate comes from re-integrating with a rule of
 * twice the order of the same family.
 */
inline QuadratureResult jacobi_inner(const JacobiParams& p, const JacobiParams& q,
                                     const QuadratureRule& rule) {
    if (p.a != q.a || p.b != q.b) {
        throw DomainError("jacobi_inner: both polynomials must share (a, b)");
    }
    check_jacobi_domain(p.a, p.b);
    if (rule.interval.lo != -1.0 || rule.interval.hi != 1.0) {
        throw DomainError("jacobi_inner: rule must live on [-1, 1]");
    }
    const double coarse = detail::jacobi_inner_with(p, q, rule);
    const QuadratureRule finer = (rule.weight_a == 0.0 && rule.weight_b == 0.0)
                                     ? build_quadrature(2 * rule.order)
                                     : build_gauss_jacobi(2 * rule.order, rule.weight_a, rule.weight_b);
    const double fine = detail::jacobi_inner_with(p, q, finer);
    return {fine, std::abs(fine - coarse)};
}

/// Closed-form squared norm of P_n^{(a,b)} under its own weight.
inline double jacobi_norm_squared(int n, double a, double b) {
    if (n == 0) return std::exp((a + b + 1.0) * std::log(2.0) + log_beta(a + 1.0, b + 1.0));
    const double lg = (a + b + 1.0) * std::log(2.0) + std::lgamma(n + a + 1.0) +
                      std::lgamma(n + b + 1.0) - std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0);
    return std::exp(lg) / (2.0 * n + a + b + 1.0);
}

} // namespace fhkh
