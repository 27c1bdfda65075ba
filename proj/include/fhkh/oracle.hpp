#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhkh/errors.hpp"
#include "fhkh/nu_analytic.hpp"
#include "fhkh/potentials.hpp"
#include "fhkh/quantities.hpp"
#include "fhkh/specfun.hpp"

namespace fhkh {

/// Uniform grid t_min, t_min + h, ..., t_max with `points` nodes.
struct GridSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    int points = 0;

    double step() const { return (t_max - t_min) / (points - 1); }
    double at(int i) const { return i == points - 1 ? t_max : t_min + i * step(); }

    /// Grid whose first node is one step from the origin: t_min = h = t_max / points.
    static GridSpec from_origin(double t_max, int points) {
        return GridSpec{t_max / points, t_max, points};
    }

    GridSpec refined() const { return from_origin(t_max, 2 * points); }
};

inline void check_grid(const GridSpec& g) {
    if (!(g.t_min > 0.0) || !(g.t_max > g.t_min) || g.points < 100) {
        throw DomainError("grid needs 0 < t_min < t_max and at least 100 points");
    }
}

/**
 * The operator -kappa psi'' + V psi = P c psi with its small-t behaviour.
 *
 * Near the origin V ~ V2/t^2 + c1/t, so regular solutions start as
 * t^{1/eta} (1 + A c1 t / (2/eta)).
 */
struct PotentialModel {
    std::function<double(double)> V;
    double A = 2.0;
    double threshold = 0.0;
    double inv_eta = 1.0;
    double inverse_t_coefficient = 0.0;
    bool approximated = true;
};

/// alpha > 0: the approximated potential, on which the closed form is exact.
/// alpha = 0: the exact Kratzer/Coulomb potential.
inline PotentialModel make_model(const PotentialParams& p, const UnitSystem& us, double mu) {
    check_kind(p);
    PotentialModel m;
    m.A = kinetic_coefficients(us, mu).A;
    m.inv_eta = inv_eta(p, us, mu);
    m.inverse_t_coefficient = p.V0 + p.V1;
    if (p.alpha > 0.0) {
        m.V = [p](double t) { return evaluate_approx_potential(p, t); };
        m.threshold = continuum_threshold(p);
        m.approximated = true;
    } else {
        m.V = [p](double t) { return evaluate_potential(p, t); };
        m.threshold = 0.0;
        m.approximated = false;
    }
    return m;
}

struct OracleResult {
    std::vector<double> eigenvalues;
    std::vector<int> node_counts;
    GridSpec grid{};
    bool extrapolated = false;
    bool complete = true;              // false: fewer bound states than requested
    std::vector<double> observed_orders; // per eigenvalue, when extrapolated
};

namespace detail {

// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0;

    // Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
    int count_below(double x) const {
        const double off2 = off * off;
        const double tiny = std::numeric_limits<double>::min() * 1e10;
        int count = 0;
        double q = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            q = diag[i] - x - (i == 0 ? 0.0 : off2 / q);
            if (q == 0.0) q = -tiny;
            if (q < 0.0) ++count;
        }
        return count;
    }

    double lower_bound() const {
        return *std::min_element(diag.begin(), diag.end()) - 2.0 * std::abs(off);
    }

    // k-th smallest eigenvalue (0-based) inside [lo, hi].
    double kth_eigenvalue(int k, double lo, double hi) const {
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (count_below(mid) > k) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    // Inverse iteration (Thomas algorithm) for the eigenvector at `lambda`.
    std::vector<double> eigenvector(double lambda) const {
        const std::size_t n = diag.size();
        const double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
        std::vector<double> v(n, 1.0);
        std::vector<double> c(n);
        std::vector<double> d(n);
        for (int it = 0; it < 3; ++it) {
            double denom = diag[0] - shift;
            c[0] = off / denom;
            d[0] = v[0] / denom;
            for (std::size_t i = 1; i < n; ++i) {
                denom = diag[i] - shift - off * c[i - 1];
                if (denom == 0.0) denom = 1e-300;
                c[i] = off / denom;
                d[i] = (v[i] - off * d[i - 1]) / denom;
            }
            v[n - 1] = d[n - 1];
            for (std::size_t i = n - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];
            double mx = 0.0;
            for (double x : v) mx = std::max(mx, std::abs(x));
            for (double& x : v) x /= mx;
        }
        return v;
    }
};

} // namespace detail

/// Sign changes in a sampled function, ignoring samples below `floor` x max|f|.
inline int count_sign_changes(std::span<const double> f, double floor = 1e-8) {
    double mx = 0.0;
    for (double x : f) mx = std::max(mx, std::abs(x));
    int changes = 0;
    int last = 0;
    for (double x : f) {
        if (std::abs(x) <= floor * mx) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/**
 * Lowest `count` eigenvalues of the three-point discretisation of
 * -kappa psi'' + V psi = P psi, with Dirichlet conditions one step outside
 * both ends of the grid. Eigenvalues come from Sturm-count bisection.
 */
inline OracleResult fd_eigenvalues(const std::function<double(double)>& V, double A,
                                   double threshold, const GridSpec& grid, int count) {
    check_grid(grid);
    if (count < 1) throw DomainError("fd_eigenvalues: count must be >= 1");
    const double h = grid.step();
    const double kappa = 1.0 / A;
    detail::Tridiagonal T;
    T.diag.resize(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        T.diag[static_cast<std::size_t>(i)] = 2.0 * kappa / (h * h) + V(grid.at(i));
    }
    T.off = -kappa / (h * h);

    OracleResult r;
    r.grid = grid;
    const int available = T.count_below(threshold);
    const int wanted = std::min(count, available);
    r.complete = wanted == count;
    const double lo = T.lower_bound();
    for (int k = 0; k < wanted; ++k) {
        const double ev = T.kth_eigenvalue(k, lo, threshold);
        r.eigenvalues.push_back(ev);
        const auto vec = T.eigenvector(ev);
        r.node_counts.push_back(count_sign_changes(vec));
    }
    return r;
}

inline OracleResult fd_eigenvalues(const PotentialParams& p, const UnitSystem& us, double mu,
                                   const GridSpec& grid, int count) {
    const auto m = make_model(p, us, mu);
    return fd_eigenvalues(m.V, m.A, m.threshold, grid, count);
}

struct RichardsonResult {
    double value = 0.0;
    double observed_order = std::numeric_limits<double>::quiet_NaN();
    bool monotone = true;
};

/// h^2 extrapolation from values at h, h/2, h/4.
inline RichardsonResult richardson_extrapolate(double v_h, double v_h2, double v_h4) {
    RichardsonResult r;
    const double d1 = v_h - v_h2;
    const double d2 = v_h2 - v_h4;
    r.value = v_h4 + (v_h4 - v_h2) / 3.0;
    if (d1 == 0.0 && d2 == 0.0) return r;
    if (d2 == 0.0 || d1 / d2 <= 0.0) {
        r.monotone = false;
        return r;
    }
    r.observed_order = std::log2(d1 / d2);
    return r;
}

/// fd_eigenvalues on `grid`, twice and four times as many points, extrapolated.
inline OracleResult fd_eigenvalues_extrapolated(const std::function<double(double)>& V, double A,
                                                double threshold, const GridSpec& grid, int count) {
    const auto r1 = fd_eigenvalues(V, A, threshold, grid, count);
    const auto r2 = fd_eigenvalues(V, A, threshold, grid.refined(), count);
    const auto r4 = fd_eigenvalues(V, A, threshold, grid.refined().refined(), count);
    OracleResult out = r4;
    out.extrapolated = true;
    const std::size_t k = std::min({r1.eigenvalues.size(), r2.eigenvalues.size(), r4.eigenvalues.size()});
    out.eigenvalues.resize(k);
    out.node_counts.resize(k);
    out.complete = out.complete && k == static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < k; ++i) {
        const auto rr = richardson_extrapolate(r1.eigenvalues[i], r2.eigenvalues[i], r4.eigenvalues[i]);
        out.eigenvalues[i] = rr.value;
        out.observed_orders.push_back(rr.observed_order);
    }
    return out;
}

/// Default domain: t_max = max(40 / (alpha gamma1), 20 / alpha) for the highest state wanted.
inline double default_t_max(const PotentialParams& p, const UnitSystem& us, double mu, int n_highest) {
    const auto sol = momentum_eigenvalue(p, us, mu, n_highest);
    if (p.alpha > 0.0) {
        const double decay = p.alpha * sol.gamma1;
        return std::max(decay > 0.0 ? 40.0 / decay : 0.0, 20.0 / p.alpha);
    }
    // Unscreened: gamma1 already holds the decay rate.
    if (!(sol.gamma1 > 0.0)) throw DomainError("default_t_max: no decaying state");
    return 40.0 / sol.gamma1;
}

/// `points` is a floor; the coarsest grid also keeps `steps_per_decay` steps per ground-state decay length.
struct OracleSettings {
    int points = 4000;
    std::optional<double> t_max;
    double steps_per_decay = 150.0;
    int max_points = 400000;
};

inline int oracle_points(const PotentialParams& p, const UnitSystem& us, double mu, double t_max,
                         const OracleSettings& settings) {
    const auto g = momentum_eigenvalue(p, us, mu, 0);
    const double k0 = p.alpha > 0.0 ? p.alpha * g.gamma1 : g.gamma1;
    double wanted = settings.points;
    if (g.valid && k0 > 0.0) wanted = std::max(wanted, std::ceil(t_max * k0 * settings.steps_per_decay));
    return static_cast<int>(std::min(wanted, static_cast<double>(settings.max_points)));
}

inline OracleResult fd_eigenvalues_extrapolated(const PotentialParams& p, const UnitSystem& us,
                                                double mu, int count, OracleSettings settings = {}) {
    const auto m = make_model(p, us, mu);
    const double t_max = settings.t_max.value_or(default_t_max(p, us, mu, count - 1));
    const int points = oracle_points(p, us, mu, t_max, settings);
    return fd_eigenvalues_extrapolated(m.V, m.A, m.threshold, GridSpec::from_origin(t_max, points), count);
}

/// Outcome of one Numerov shot.
struct ShootResult {
    double mismatch = 0.0; // sign of the Wronskian of outward and inward solutions at the match point
    int nodes = 0;         // sign changes of the outward solution over the whole grid
    int match_index = 0;
};

namespace detail {

inline int outer_turning_index(const PotentialModel& m, const GridSpec& g, double P) {
    for (int i = g.points - 3; i >= 2; --i) {
        if (m.V(g.at(i)) < P) return i;
    }
    return g.points / 2;
}

} // namespace detail

/**
 * Numerov integration of psi'' = A (V - P) psi from both ends.
 *
 * The outward solution starts from the regular small-t behaviour, the inward
 * one from e^{-k t} with k = sqrt(A (threshold - P)). Both are rescaled while
 * marching. The returned mismatch is
 *   (psi_out' - L_in psi_out) / sqrt(psi_out'^2 + (K psi_out)^2)
 * at the match point, where L_in is the inward log-derivative and K a
 * positive inverse length; it is continuous in P and vanishes at eigenvalues.
 */
inline ShootResult numerov_shoot(const PotentialModel& m, double P, const GridSpec& g,
                                 std::optional<int> match_index = std::nullopt) {
    check_grid(g);
    const int N = g.points;
    const double h = g.step();
    const double h12 = h * h / 12.0;
    std::vector<double> f(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) f[static_cast<std::size_t>(i)] = m.A * (m.V(g.at(i)) - P);
    auto F = [&](int i) { return f[static_cast<std::size_t>(i)]; };

    const int mi = std::clamp(match_index.value_or(detail::outer_turning_index(m, g, P)), 2, N - 3);
    constexpr double big = 1e100;

    // Outward.
    const double c1 = m.A * m.inverse_t_coefficient / (2.0 * m.inv_eta);
    auto regular = [&](double t) { return m.inv_eta * std::log(t) + std::log(std::abs(1.0 + c1 * t)); };
    const double t0 = g.at(0);
    const double t1 = g.at(1);
    double y_prev = 1.0;
    double y = std::exp(regular(t1) - regular(t0));
    double rec[3] = {0.0, 0.0, 0.0};
    bool recorded[3] = {false, false, false};
    auto record = [&](int i, double v) {
        for (int d = -1; d <= 1; ++d) {
            if (i == mi + d) {
                rec[d + 1] = v;
                recorded[d + 1] = true;
            }
        }
    };
    record(0, y_prev);
    record(1, y);
    int nodes = 0;
    int last_sign = 1;
    if (y < 0.0) {
        ++nodes;
        last_sign = -1;
    }
    for (int i = 1; i < N - 1; ++i) {
        const double y_next = (2.0 * y * (1.0 + 5.0 * h12 * F(i)) - y_prev * (1.0 - h12 * F(i - 1))) /
                              (1.0 - h12 * F(i + 1));
        y_prev = y;
        y = y_next;
        if (std::abs(y) > big) {
            y /= big;
            y_prev /= big;
            for (int d = 0; d < 3; ++d) rec[d] /= big;
        }
        record(i + 1, y);
        if (y != 0.0) {
            const int s = y > 0.0 ? 1 : -1;
            if (s != last_sign) ++nodes;
            last_sign = s;
        }
    }
    if (!std::isfinite(y)) throw NumericalError("numerov_shoot: outward integration overflowed");
    const double out_m = rec[1];
    const double out_d = (rec[2] - rec[0]) / (2.0 * h);

    // Inward.
    const double k = P < m.threshold ? std::sqrt(m.A * (m.threshold - P)) : 0.0;
    double z_next = 1.0;
    double z = std::exp(k * h);
    double zin[3] = {0.0, 0.0, 0.0};
    auto record_in = [&](int i, double v) {
        for (int d = -1; d <= 1; ++d) {
            if (i == mi + d) zin[d + 1] = v;
        }
    };
    record_in(N - 1, z_next);
    record_in(N - 2, z);
    for (int i = N - 2; i > mi - 1; --i) {
        const double z_prev = (2.0 * z * (1.0 + 5.0 * h12 * F(i)) - z_next * (1.0 - h12 * F(i + 1))) /
                              (1.0 - h12 * F(i - 1));
        z_next = z;
        z = z_prev;
        if (std::abs(z) > big) {
            z /= big;
            z_next /= big;
            for (double& v : zin) v /= big;
        }
        record_in(i - 1, z);
    }
    if (!(zin[1] != 0.0) || !std::isfinite(zin[1])) {
        throw NumericalError("numerov_shoot: inward solution vanished at the match point");
    }
    const double L_in = (zin[2] - zin[0]) / (2.0 * h * zin[1]);
    const double K = std::abs(L_in) + 1.0 / g.at(mi);
    const double norm = std::hypot(out_d, K * out_m);

    ShootResult r;
    r.mismatch = norm > 0.0 ? (out_d - L_in * out_m) / norm : 0.0;
    if (zin[1] < 0.0) r.mismatch = -r.mismatch;
    r.nodes = nodes;
    r.match_index = mi;
    return r;
}

/// At least `points` nodes and 400 steps per ground-state decay length, capped at 400000.
inline GridSpec default_shooting_grid(const PotentialParams& p, const UnitSystem& us, double mu, int n,
                                      int points = 20000) {
    const double t_max = default_t_max(p, us, mu, n);
    return GridSpec::from_origin(t_max, oracle_points(p, us, mu, t_max, {points, t_max, 400.0, 400000}));
}

inline ShootResult numerov_shoot(const PotentialParams& p, const UnitSystem& us, double mu, double P,
                                 const GridSpec& g) {
    return numerov_shoot(make_model(p, us, mu), P, g);
}

struct Bracket {
    double lo;
    double hi;
};

/**
 * Bisection on the mismatch inside `bracket` until the width is below
 * 1e-10 max(1, |P|). The lower end must carry `n` nodes.
 */
inline double shooting_eigenvalue(const PotentialModel& m, int n, Bracket bracket, const GridSpec& g) {
    if (!(bracket.hi > bracket.lo)) throw BracketError("shooting_eigenvalue: empty bracket");
    const int mi = detail::outer_turning_index(m, g, 0.5 * (bracket.lo + bracket.hi));
    auto lo = numerov_shoot(m, bracket.lo, g, mi);
    auto hi = numerov_shoot(m, bracket.hi, g, mi);
    if (lo.mismatch == 0.0) return bracket.lo;
    if (hi.mismatch == 0.0) return bracket.hi;
    if ((lo.mismatch > 0.0) == (hi.mismatch > 0.0)) {
        throw BracketError("shooting_eigenvalue: no sign change of the mismatch in [" +
                           std::to_string(bracket.lo) + ", " + std::to_string(bracket.hi) + "]");
    }
    double a = bracket.lo;
    double b = bracket.hi;
    for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(0.5 * (a + b))); ++it) {
        const double mid = 0.5 * (a + b);
        const auto s = numerov_shoot(m, mid, g, mi);
        if (s.mismatch == 0.0) return mid;
        if ((s.mismatch > 0.0) == (lo.mismatch > 0.0)) {
            a = mid;
            lo = s;
        } else {
            b = mid;
        }
    }
    const auto below = numerov_shoot(m, a, g);
    if (below.nodes != n) {
        throw BracketError("shooting_eigenvalue: root in bracket has " + std::to_string(below.nodes) +
                           " nodes below it, expected " + std::to_string(n));
    }
    return 0.5 * (a + b);
}

/**
 * Bracket for state n from node counting: the outward solution has exactly
 * n sign changes for P between the (n-1)-th and n-th eigenvalues.
 */
inline Bracket find_bracket(const PotentialModel& m, int n, const GridSpec& g) {
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.points; ++i) vmin = std::min(vmin, m.V(g.at(i)));
    double lo = vmin;
    double hi = m.threshold;
    if (numerov_shoot(m, hi, g).nodes <= n) {
        throw BracketError("find_bracket: fewer than " + std::to_string(n + 1) + " bound states below threshold");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * std::max(1e-3, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (numerov_shoot(m, mid, g).nodes <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Widen until the mismatch changes sign.
    double width = std::max(hi - lo, 1e-12 * std::max(1.0, std::abs(hi)));
    for (int it = 0; it < 40; ++it) {
        const Bracket b{lo - width, hi + width};
        const int mi = detail::outer_turning_index(m, g, 0.5 * (b.lo + b.hi));
        const auto sl = numerov_shoot(m, b.lo, g, mi);
        const auto sh = numerov_shoot(m, b.hi, g, mi);
        if ((sl.mismatch > 0.0) != (sh.mismatch > 0.0)) return b;
        width *= 2.0;
    }
    throw BracketError("find_bracket: mismatch does not change sign near state " + std::to_string(n));
}

inline double shooting_eigenvalue(const PotentialParams& p, const UnitSystem& us, double mu, int n,
                                  std::optional<Bracket> bracket = std::nullopt,
                                  std::optional<GridSpec> grid = std::nullopt) {
    const auto m = make_model(p, us, mu);
    const GridSpec g = grid.value_or(default_shooting_grid(p, us, mu, n));
    return shooting_eigenvalue(m, n, bracket.value_or(find_bracket(m, n, g)), g);
}

/// `count` Chebyshev points of the first kind on (lo, hi).
inline std::vector<double> chebyshev_points(int count, double lo, double hi) {
    std::vector<double> s(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        s[static_cast<std::size_t>(k)] =
            0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * count));
    }
    return s;
}

/**
 * Max over s of |residual| / (|psi''| + |psi'/s| + |Q psi / (s^2 (1-s)^2)|) for
 *   psi'' + psi'/s + (-gamma1^2 + gamma3 s + gamma2 s^2) / (s^2 (1-s)^2) psi = 0,
 * with psi the unnormalised closed-form state and analytic derivatives.
 * The common factor s^{gamma1} (1-s)^{1/eta} is divided out.
 */
inline double ode_residual_s_domain(const PotentialParams& p, const UnitSystem& us, double mu,
                                    const MomentumSolution& sol, const WavefunctionSpec& w,
                                    std::span<const double> s_points) {
    const auto c = s_domain_coefficients(p, us, mu, sol.P);
    const double g1 = w.decay / w.alpha;
    const double e = w.edge;
    const int n = w.n;
    const double a = w.jacobi_a;
    const double b = w.jacobi_b;
    double worst = 0.0;
    for (double s : s_points) {
        if (!(s > 0.0 && s < 1.0)) throw DomainError("ode_residual_s_domain: s must lie in (0, 1)");
        const double x = 1.0 - 2.0 * s;
        const double y = jacobi_eval(n, a, b, x);
        const double ys = -2.0 * jacobi_derivative(n, a, b, x, 1);
        const double yss = 4.0 * jacobi_derivative(n, a, b, x, 2);
        const double L = g1 / s - e / (1.0 - s);
        const double psi = y;
        const double dpsi = L * y + ys;
        const double d2psi = (L * L - g1 / (s * s) - e / ((1.0 - s) * (1.0 - s))) * y + 2.0 * L * ys + yss;
        const double Q = (-c.gamma1_sq + c.gamma3 * s + c.gamma2 * s * s) / (s * s * (1.0 - s) * (1.0 - s));
        const double t1 = d2psi;
        const double t2 = dpsi / s;
        const double t3 = Q * psi;
        const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
        if (scale > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / scale);
    }
    return worst;
}

} // namespace fhkh
