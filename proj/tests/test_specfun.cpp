#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fhkh/specfun.hpp"
#include "support/random_params.hpp"

using namespace fhkh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Explicit low-degree forms, sum_k C(n+a, n-k) C(n+a+b+k, k) ((x-1)/2)^k.
double jacobi_closed(int n, double a, double b, double x) {
    const double y = x - 1.0;
    switch (n) {
    case 0: return 1.0;
    case 1: return 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    case 2:
        return 0.5 * (a + 1.0) * (a + 2.0) + 0.5 * (a + 2.0) * (a + b + 3.0) * y +
               0.125 * (a + b + 3.0) * (a + b + 4.0) * y * y;
    default: return NAN;
    }
}

double binomial_int(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("jacobi_eval low degrees", "[specfun]") {
    CHECK(jacobi_eval(0, 3.7, -0.2, 0.3) == 1.0);
    CHECK(jacobi_eval(1, 2.0, 1.0, 0.0) == 0.5);
    CHECK_THROWS_AS(jacobi_eval(-1, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("recurrence agrees with explicit forms", "[specfun][property]") {
    testing::Sampler rng(6);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-0.99, 12.0);
        const double b = rng.uniform(-0.99, 12.0);
        const double x = rng.uniform(-1.0, 1.0);
        for (int n = 0; n <= 2; ++n) {
            const double want = jacobi_closed(n, a, b, x);
            CHECK_THAT(jacobi_eval(n, a, b, x), WithinAbs(want, 1e-13 * std::max(1.0, std::abs(want))));
        }
    }
}

TEST_CASE("endpoint identity P_n(1) = C(n+a, n)", "[specfun][property]") {
    for (int n = 0; n <= 8; ++n) {
        CHECK_THAT(jacobi_eval(n, 3.0, 0.5, 1.0), WithinRel(binomial_int(n + 3, n), 1e-13));
    }
    testing::Sampler rng(7);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-0.99, 20.0);
        const double b = rng.uniform(-0.99, 20.0);
        const int n = rng.integer(0, 10);
        CHECK_THAT(jacobi_eval(n, a, b, 1.0), WithinRel(generalized_binomial(n + a, n), 1e-12));
    }
}

TEST_CASE("generalized binomial reduces to the integer one", "[specfun]") {
    for (int n = 0; n <= 12; ++n) {
        for (int k = 0; k <= n; ++k) CHECK_THAT(generalized_binomial(n, k), WithinRel(binomial_int(n, k), 1e-12));
    }
    CHECK(generalized_binomial(2.5, -1) == 0.0);
}

TEST_CASE("jacobi_derivative against central differences", "[specfun]") {
    testing::Sampler rng(8);
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(0.0, 6.0);
        const double b = rng.uniform(0.0, 6.0);
        const double x = rng.uniform(-0.9, 0.9);
        const int n = rng.integer(1, 6);
        const double h = 1e-5;
        const double fd1 = (jacobi_eval(n, a, b, x + h) - jacobi_eval(n, a, b, x - h)) / (2 * h);
        const double fd2 =
            (jacobi_eval(n, a, b, x + h) - 2 * jacobi_eval(n, a, b, x) + jacobi_eval(n, a, b, x - h)) / (h * h);
        const double d1 = jacobi_derivative(n, a, b, x, 1);
        const double d2 = jacobi_derivative(n, a, b, x, 2);
        CHECK_THAT(d1, WithinAbs(fd1, 1e-6 * std::max(1.0, std::abs(d1))));
        CHECK_THAT(d2, WithinAbs(fd2, 1e-3 * std::max(1.0, std::abs(d2))));
    }
    CHECK(jacobi_derivative(1, 1.0, 1.0, 0.2, 2) == 0.0);
}

TEST_CASE("Gauss-Legendre rules", "[specfun][quadrature]") {
    const auto r2 = build_quadrature(2);
    CHECK(r2.integrate([](double x) { return x * x * x; }) == 0.0);

    const auto r3 = build_quadrature(3);
    CHECK_THAT(r3.integrate([](double x) { return x * x * x * x; }), WithinAbs(0.4, 1e-14));

    CHECK_THROWS_AS(build_quadrature(1), DomainError);
    CHECK_THROWS_AS(build_quadrature(4, {1.0, 1.0}), DomainError);

    // int_0^1 e^x dx converges to machine precision beyond order 10
    const auto ex = [](double x) { return std::exp(x); };
    for (int order = 10; order <= 40; order += 10) {
        const double a = build_quadrature(order, {0.0, 1.0}).integrate(ex);
        const double b = build_quadrature(2 * order, {0.0, 1.0}).integrate(ex);
        CHECK(std::abs(a - b) < 1e-14);
        CHECK_THAT(b, WithinRel(1.718281828459045, 1e-15));
    }
}

TEST_CASE("Gauss-Legendre exactness up to degree 2n-1", "[specfun][quadrature][property]") {
    testing::Sampler rng(9);
    for (int order = 2; order <= 24; ++order) {
        const double lo = rng.uniform(-3.0, 1.0);
        const double hi = lo + rng.uniform(0.5, 4.0);
        const auto rule = build_quadrature(order, {lo, hi});
        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            CHECK(rule.weights[i] > 0.0);
            CHECK(rule.nodes[i] > lo);
            CHECK(rule.nodes[i] < hi);
            wsum += rule.weights[i];
        }
        CHECK_THAT(wsum, WithinRel(hi - lo, 1e-14));
        const int deg = 2 * order - 1;
        const double got = rule.integrate([&](double x) { return std::pow(x, deg); });
        const double want = (std::pow(hi, deg + 1) - std::pow(lo, deg + 1)) / (deg + 1);
        CHECK_THAT(got, WithinAbs(want, 1e-13 * std::max(1.0, std::abs(want))));
    }
}

TEST_CASE("Gauss-Jacobi rules integrate the weighted norms exactly", "[specfun][quadrature]") {
    testing::Sampler rng(10);
    for (int i = 0; i < 40; ++i) {
        const double a = rng.uniform(-0.9, 30.0);
        const double b = rng.uniform(-0.9, 30.0);
        const int n = rng.integer(0, 8);
        const auto rule = build_gauss_jacobi(n + 2, a, b);
        const double got = rule.integrate([&](double x) {
            const double p = jacobi_eval(n, a, b, x);
            return p * p;
        });
        CHECK_THAT(got, WithinRel(jacobi_norm_squared(n, a, b), 1e-11));
    }
    CHECK_THROWS_AS(build_gauss_jacobi(4, -1.0, 0.0), DomainError);
}

TEST_CASE("jacobi_inner", "[specfun][quadrature]") {
    const auto legendre = build_quadrature(16);
    CHECK_THAT(jacobi_inner({0, 0, 0}, {0, 0, 0}, legendre).value, WithinRel(2.0, 1e-14));
    CHECK_THAT(jacobi_inner({0, 0, 1}, {0, 0, 1}, legendre).value, WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(jacobi_inner({0, 0, 2}, {0, 0, 5}, legendre).value, WithinAbs(0.0, 1e-14));

    testing::Sampler rng(12);
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(-0.9, 10.0);
        const double b = rng.uniform(-0.9, 10.0);
        const int n1 = rng.integer(0, 8);
        int n2 = rng.integer(0, 8);
        if (n2 == n1) n2 = n1 + 1;
        const auto res = jacobi_inner({a, b, n1}, {a, b, n2}, build_gauss_jacobi(12, a, b));
        CHECK_THAT(res.value, WithinAbs(0.0, 1e-10));
        CHECK(res.converged(1e-10));
    }

    CHECK_THROWS_AS(jacobi_inner({1, 0, 1}, {0, 0, 1}, legendre), DomainError);
    CHECK_THROWS_AS(jacobi_inner({0, 0, 1}, {0, 0, 1}, build_quadrature(8, {0.0, 1.0})), DomainError);
}

TEST_CASE("under-resolved inner products are flagged", "[specfun][quadrature]") {
    // A Legendre rule cannot resolve (1-x)^0.3 at the endpoint.
    const auto res = jacobi_inner({0.3, 0.0, 2}, {0.3, 0.0, 2}, build_quadrature(6));
    CHECK_FALSE(res.converged(1e-10));
}
