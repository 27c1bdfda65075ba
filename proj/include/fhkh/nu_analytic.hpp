#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "fhkh/errors.hpp"
#include "fhkh/potentials.hpp"
#include "fhkh/quantities.hpp"
#include "fhkh/specfun.hpp"

namespace fhkh {

/**
 * One quantized momentum state.
 *
 * For alpha > 0, `ratio` is the signed quantization ratio
 *   R = (D + n(n + 2/eta) + 1/eta) / (2 (n + 1/eta)),  D = A (V0 + V1 + alpha V2) / alpha
 * and gamma1 = |R|. For alpha = 0 both hold the alpha-scaled limits alpha*R
 * and alpha*gamma1, i.e. the envelope decay rate, since R itself diverges.
 *
 * `valid` means alpha V1 - P c > 0 (a real decay exponent). The branch with
 * R < 0 is the attractive-well regime; R > 0 states are kept but flagged.
 */
struct MomentumSolution {
    int n = 0;
    double P = 0.0;
    double gamma1 = 0.0;
    double inv_eta = 1.0;
    double ratio = 0.0;
    bool valid = false;

    int branch() const noexcept { return ratio < 0.0 ? -1 : (ratio > 0.0 ? 1 : 0); }
    bool well_branch() const noexcept { return valid && ratio < 0.0; }
};

/// 1/eta = 1/2 + sqrt(1/4 + 2 m c^2 V2 / hbar^2).
inline double inv_eta(const PotentialParams& p, const UnitSystem& us, double mu) {
    const double A = kinetic_coefficients(us, mu).A;
    const double disc = 0.25 + A * p.V2;
    if (!(disc >= 0.0)) {
        throw SpectralConditionError(
            "spectral condition 2mc^2 V2/hbar^2 + 1/4 >= 0 violated (value " +
            std::to_string(disc) + "); 1/eta is not real");
    }
    return 0.5 + std::sqrt(disc);
}

namespace detail {

inline MomentumSolution make_solution(int n, double P, double gap, double A, double alpha,
                                      double ie, double ratio) {
    MomentumSolution s;
    s.n = n;
    s.P = P;
    s.inv_eta = ie;
    s.ratio = ratio;
    // gap = alpha V1 - P c, computed without the cancellation.
    s.valid = gap > 0.0 && std::isfinite(gap);
    s.gamma1 = alpha > 0.0 ? std::sqrt(A * gap) / alpha : std::sqrt(A * gap);
    return s;
}

inline void check_n(int n) {
    if (n < 0) throw DomainError("quantum number n must be non-negative");
}

} // namespace detail

inline MomentumSolution momentum_eigenvalue(const PotentialParams& p, const UnitSystem& us,
                                            double mu, int n) {
    detail::check_n(n);
    check_kind(p);
    const double A = kinetic_coefficients(us, mu).A;
    const double ie = inv_eta(p, us, mu);
    const double alpha = p.alpha;
    if (alpha > 0.0) {
        const double D = A * (p.V0 + p.V1 + alpha * p.V2) / alpha;
        const double R = (D + n * (n + 2.0 * ie) + ie) / (2.0 * (n + ie));
        const double gap = alpha * alpha / A * (R * R);
        return detail::make_solution(n, alpha * p.V1 - gap, gap, A, alpha, ie, R);
    }
    // alpha -> 0: alpha R -> A (V0 + V1) / (2 (n + 1/eta)).
    const double scaled = A * (p.V0 + p.V1) / (2.0 * (n + ie));
    const double gap = scaled * scaled / A;
    return detail::make_solution(n, -gap, gap, A, alpha, ie, scaled);
}

/**
 * The reduced-family formulas written out on their own, as a regression
 * surface against momentum_eigenvalue. The Kratzer and Coulomb forms use
 * P c = -m c^2 V0^2 / (2 hbar^2 (n + 1/eta)^2), the alpha -> 0 limit of the
 * screened forms.
 */
inline MomentumSolution special_case_eigenvalue(PotentialKind kind, const PotentialParams& p,
                                                const UnitSystem& us, double mu, int n) {
    detail::check_n(n);
    if (p.kind != kind) {
        throw KindError("special_case_eigenvalue: parameters are " + std::string(to_string(p.kind)) +
                        ", requested " + std::string(to_string(kind)));
    }
    check_kind(p);
    const double A = kinetic_coefficients(us, mu).A;
    const double alpha = p.alpha;
    switch (kind) {
    case PotentialKind::SKHP: return momentum_eigenvalue(p, us, mu, n);
    case PotentialKind::Hellmann: {
        const double R = (A * (p.V0 + p.V1) / alpha + n * (n + 2.0) + 1.0) / (2.0 * (n + 1.0));
        const double gap = alpha * alpha / A * (R * R);
        return detail::make_solution(n, alpha * p.V1 - gap, gap, A, alpha, 1.0, R);
    }
    case PotentialKind::ScreenedKratzer: {
        const double ie = inv_eta(p, us, mu);
        const double R = (A * (p.V0 + alpha * p.V2) / alpha + n * (n + 2.0 * ie) + ie) / (2.0 * (n + ie));
        const double gap = alpha * alpha / A * (R * R);
        return detail::make_solution(n, -gap, gap, A, alpha, ie, R);
    }
    case PotentialKind::ScreenedCoulomb: {
        const double R = (A * p.V0 / alpha + n * (n + 2.0) + 1.0) / (2.0 * (n + 1.0));
        const double gap = alpha * alpha / A * (R * R);
        return detail::make_solution(n, -gap, gap, A, alpha, 1.0, R);
    }
    case PotentialKind::Kratzer: {
        const double ie = inv_eta(p, us, mu);
        const double P = -(A / 4.0) * p.V0 * p.V0 / ((n + ie) * (n + ie));
        return detail::make_solution(n, P, -P, A, 0.0, ie, A * p.V0 / (2.0 * (n + ie)));
    }
    case PotentialKind::Coulomb: {
        const double P = -(A / 4.0) * p.V0 * p.V0 / ((n + 1.0) * (n + 1.0));
        return detail::make_solution(n, P, -P, A, 0.0, 1.0, A * p.V0 / (2.0 * (n + 1.0)));
    }
    }
    throw KindError("unknown potential kind");
}

/// Highest n on the branch of the n = 0 state, or nullopt if n = 0 is invalid.
struct ValidRange {
    int n_max = 0;
    bool capped = false; // true: every n up to the cap is valid ("n >= n_max")
};

inline std::optional<ValidRange> max_valid_n(const PotentialParams& p, const UnitSystem& us,
                                             double mu, int n_cap = 64) {
    const auto first = momentum_eigenvalue(p, us, mu, 0);
    if (!first.valid || !(2.0 * first.gamma1 > -1.0)) return std::nullopt;
    const int branch = first.branch();
    for (int n = 1; n <= n_cap; ++n) {
        const auto s = momentum_eigenvalue(p, us, mu, n);
        if (!s.valid || s.branch() != branch) return ValidRange{n - 1, false};
    }
    return ValidRange{n_cap, true};
}

/**
 * psi_n(t) = B_n e^{-alpha gamma1 t} (1 - e^{-alpha t})^{1/eta}
 *            P_n^{(2 gamma1, 2/eta - 1)}(1 - 2 e^{-alpha t})
 *
 * With B_n unset, evaluation returns the unnormalised form (B_n = 1).
 */
struct WavefunctionSpec {
    int n = 0;
    double decay = 0.0;    // alpha * gamma1
    double edge = 1.0;     // 1/eta
    double jacobi_a = 0.0; // 2 gamma1
    double jacobi_b = 1.0; // 2/eta - 1
    double alpha = 0.0;
    std::optional<double> B_n;
    std::optional<double> log_B_n;

    bool normalized() const noexcept { return log_B_n.has_value(); }
};

inline WavefunctionSpec wavefunction_spec(const MomentumSolution& sol, double alpha) {
    if (!(alpha > 0.0)) {
        throw DomainError("wavefunctions are only defined for alpha > 0");
    }
    if (!sol.valid) {
        throw DomainError("state n=" + std::to_string(sol.n) + " is not valid (alpha V1 - P c <= 0)");
    }
    WavefunctionSpec w;
    w.n = sol.n;
    w.decay = alpha * sol.gamma1;
    w.edge = sol.inv_eta;
    w.jacobi_a = 2.0 * sol.gamma1;
    w.jacobi_b = 2.0 * sol.inv_eta - 1.0;
    w.alpha = alpha;
    check_jacobi_domain(w.jacobi_a, w.jacobi_b);
    return w;
}

inline WavefunctionSpec wavefunction_spec(const PotentialParams& p, const UnitSystem& us,
                                          double mu, int n) {
    return wavefunction_spec(momentum_eigenvalue(p, us, mu, n), p.alpha);
}

// Evaluated through logarithms; the envelope and the Jacobi factor can
// individually over- or underflow for molecular parameters.
inline double evaluate_wavefunction(const WavefunctionSpec& w, double t) {
    if (!(t > 0.0)) throw DomainError("evaluate_wavefunction: t must be positive");
    const double s = std::exp(-w.alpha * t);
    const double jac = jacobi_eval(w.n, w.jacobi_a, w.jacobi_b, 1.0 - 2.0 * s);
    if (jac == 0.0) return 0.0;
    const double log_env = -w.decay * t + w.edge * std::log(-std::expm1(-w.alpha * t));
    const double log_b = w.log_B_n.value_or(0.0);
    const double mag = std::exp(log_b + log_env + std::log(std::abs(jac)));
    return jac < 0.0 ? -mag : mag;
}

struct NormalizationResult {
    double B_n = 0.0;
    double log_B_n = 0.0;
    double relative_change = 0.0; // of log I between order and 2*order, relative to max(1, |log I|)
};

/**
 * B_n with int_0^inf psi_n^2 dt = 1.
 *
 * Under s = e^{-alpha t} the integral becomes
 *   (1/alpha) int_0^1 s^{2 gamma1 - 1} (1-s)^{2/eta} P_n(1-2s)^2 ds,
 * a polynomial against a Jacobi weight, so a Gauss-Jacobi rule with
 * order > n is exact. The rule is re-run at twice the order as a check.
 */
inline NormalizationResult normalize(const WavefunctionSpec& w, int order = 32, double tol = 1e-12) {
    if (order < w.n + 1) throw DomainError("normalize: quadrature order must exceed n");
    const double a = w.jacobi_a - 1.0;
    const double b = 2.0 * w.edge;
    auto log_integral = [&](int ord) {
        const auto rule = build_gauss_jacobi(ord, a, b);
        const double sum = rule.scaled_sum([&](double x) {
            const double p = jacobi_eval(w.n, w.jacobi_a, w.jacobi_b, x);
            return p * p;
        });
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            throw NumericalError("normalize: non-finite quadrature sum at order " + std::to_string(ord));
        }
        return -std::log(w.alpha) + log_beta(a + 1.0, b + 1.0) + std::log(sum);
    };
    const double coarse = log_integral(order);
    const double fine = log_integral(2 * order);
    const double change = std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
    if (change > tol) {
        throw NumericalError("normalize: quadrature not converged (log I = " + std::to_string(coarse) +
                             " at order " + std::to_string(order) + ", " + std::to_string(fine) +
                             " at order " + std::to_string(2 * order) + ")");
    }
    NormalizationResult r;
    r.log_B_n = -0.5 * fine;
    r.B_n = std::exp(r.log_B_n);
    r.relative_change = change;
    return r;
}

inline WavefunctionSpec normalized(WavefunctionSpec w, int order = 32) {
    const auto r = normalize(w, order);
    w.B_n = r.B_n;
    w.log_B_n = r.log_B_n;
    return w;
}

/// Coefficients of the reduced equation in s = e^{-alpha t}.
struct SDomainCoefficients {
    double gamma1_sq;
    double gamma2;
    double gamma3;
};

inline SDomainCoefficients s_domain_coefficients(const PotentialParams& p, const UnitSystem& us,
                                                 double mu, double P) {
    if (!(p.alpha > 0.0)) throw DomainError("s_domain_coefficients: alpha must be positive");
    const double A = kinetic_coefficients(us, mu).A;
    const double a = p.alpha;
    const double f = A / (a * a);
    return {f * (a * p.V1 - P), f * (a * p.V0 + P),
            -f * (a * p.V0 - a * p.V1 + a * a * p.V2 + 2.0 * P)};
}

} // namespace fhkh
