#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fhkh/nu_analytic.hpp"
#include "fhkh/oracle.hpp"
#include "support/random_params.hpp"

using namespace fhkh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const UnitSystem nat = natural_units();

PotentialParams skp_example() { return make_special_case(PotentialKind::ScreenedKratzer, -3, 0, 10, 0.1); }

// Composite Gauss-Legendre of psi^2 over (0, t_end] in the time domain.
double norm_in_time(const WavefunctionSpec& w, double t_end, int panels = 400) {
    const auto rule = build_quadrature(20, {0.0, 1.0});
    const double width = t_end / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = (k + rule.nodes[i]) * width;
            const double psi = evaluate_wavefunction(w, t);
            sum += rule.weights[i] * width * psi * psi;
        }
    }
    return sum;
}

} // namespace

TEST_CASE("inv_eta", "[analytic]") {
    auto with_v2 = [](double v2) { return make_special_case(PotentialKind::SKHP, -1, 0, v2, 0.1); };
    CHECK(inv_eta(with_v2(0.0), nat, 1.0) == 1.0);
    CHECK(inv_eta(with_v2(3.0), nat, 1.0) == 3.0);
    CHECK(inv_eta(with_v2(10.0), nat, 1.0) == 5.0);
    CHECK_THROWS_AS(inv_eta(with_v2(-1.0), nat, 1.0), SpectralConditionError);
    CHECK_NOTHROW(inv_eta(with_v2(-0.125), nat, 1.0));
}

TEST_CASE("momentum eigenvalues", "[analytic]") {
    const auto p = skp_example();
    CHECK_THAT(momentum_eigenvalue(p, nat, 1.0, 0).P, WithinRel(-0.06125, 1e-14));
    CHECK_THAT(momentum_eigenvalue(p, nat, 1.0, 1).P, WithinRel(-0.02, 1e-14));
    CHECK_THAT(momentum_eigenvalue(p, nat, 1.0, 2).P, WithinRel(-0.005 * (11.0 / 14.0) * (11.0 / 14.0), 1e-14));
    CHECK(momentum_eigenvalue(p, nat, 1.0, 0).ratio == -3.5);

    for (double alpha : {0.05, 0.3, 2.0}) {
        const auto zero = make_special_case(PotentialKind::SKHP, 0, 0, 0, alpha);
        for (int n = 0; n < 5; ++n) {
            CHECK_THAT(momentum_eigenvalue(zero, nat, 1.0, n).P,
                       WithinRel(-alpha * alpha * (n + 1) * (n + 1) / 8.0, 1e-14));
        }
    }

    const auto balanced = make_special_case(PotentialKind::SKHP, -0.5, 0, 1, 0.5);
    const auto s0 = momentum_eigenvalue(balanced, nat, 1.0, 0);
    CHECK(s0.ratio == 0.5);
    CHECK(s0.P == -0.03125);

    const auto coul = make_special_case(PotentialKind::Coulomb, -1, 0, 0, 0);
    CHECK(momentum_eigenvalue(coul, nat, 1.0, 0).P == -0.5);
    CHECK(momentum_eigenvalue(coul, nat, 1.0, 1).P == -0.125);

    CHECK_THROWS_AS(momentum_eigenvalue(p, nat, 1.0, -1), DomainError);
    const auto bad = make_special_case(PotentialKind::SKHP, -1, 0, -1, 0.1);
    CHECK_THROWS_AS(momentum_eigenvalue(bad, nat, 1.0, 0), SpectralConditionError);
}

TEST_CASE("solution invariants", "[analytic][property]") {
    testing::Sampler rng(21);
    for (int i = 0; i < 300; ++i) {
        const auto p = rng.constrained(PotentialKind::SKHP);
        const double mu = rng.uniform(0.2, 3.0);
        const double A = kinetic_coefficients(nat, mu).A;
        for (int n = 0; n < 4; ++n) {
            const auto s = momentum_eigenvalue(p, nat, mu, n);
            if (!s.valid) continue;
            CHECK(s.gamma1 > 0.0);
            CHECK_THAT(s.gamma1, WithinRel(std::abs(s.ratio), 1e-12));
            const double g1sq = A * (p.alpha * p.V1 - s.P) / (p.alpha * p.alpha);
            CHECK_THAT(s.gamma1 * s.gamma1, WithinRel(g1sq, 1e-9));
        }
    }
}

TEST_CASE("special-case formulas", "[analytic]") {
    const auto h = make_special_case(PotentialKind::Hellmann, -2, 0.5, 0, 0.2);
    for (int n = 0; n < 4; ++n) {
        CHECK(special_case_eigenvalue(PotentialKind::Hellmann, h, nat, 1.0, n).P ==
              momentum_eigenvalue(h, nat, 1.0, n).P);
    }

    // Screened Coulomb approaches -0.5 linearly in alpha.
    auto sc = [](double alpha) {
        return special_case_eigenvalue(PotentialKind::ScreenedCoulomb,
                                       make_special_case(PotentialKind::ScreenedCoulomb, -1, 0, 0, alpha), nat,
                                       1.0, 0)
            .P;
    };
    CHECK_THAT(sc(1e-3), WithinAbs(-0.5, 2e-3));
    const double r = (sc(1e-3) + 0.5) / (sc(1e-4) + 0.5);
    CHECK(r > 9.0);
    CHECK(r < 11.0);

    // Kratzer V0=-1, V2=3: 1/eta = 3 and P0 = -1/18.
    const auto kr = make_special_case(PotentialKind::Kratzer, -1, 0, 3, 0);
    const double pk = special_case_eigenvalue(PotentialKind::Kratzer, kr, nat, 1.0, 0).P;
    CHECK_THAT(pk, WithinRel(-1.0 / 18.0, 1e-15));
    auto skp = [](double alpha) {
        return momentum_eigenvalue(make_special_case(PotentialKind::ScreenedKratzer, -1, 0, 3, alpha), nat, 1.0, 0)
            .P;
    };
    const double a1 = 1e-4;
    const double a2 = 1e-5;
    const double extrapolated = skp(a2) - a2 * (skp(a1) - skp(a2)) / (a1 - a2);
    CHECK_THAT(extrapolated, WithinRel(-1.0 / 18.0, 1e-6));

    CHECK_THROWS_AS(special_case_eigenvalue(PotentialKind::Coulomb, kr, nat, 1.0, 0), KindError);
}

TEST_CASE("reduced formulas equal the general one", "[analytic][property]") {
    testing::Sampler rng(22);
    for (auto kind : all_kinds) {
        for (int i = 0; i < 100; ++i) {
            const auto p = rng.constrained(kind);
            const double mu = rng.uniform(0.2, 3.0);
            const int n = rng.integer(0, 6);
            const double general = momentum_eigenvalue(p, nat, mu, n).P;
            const double special = special_case_eigenvalue(kind, p, nat, mu, n).P;
            INFO(to_string(kind) << " V0=" << p.V0 << " V2=" << p.V2 << " alpha=" << p.alpha);
            CHECK(testing::rel_diff(general, special) <= 1e-15);
        }
    }
}

TEST_CASE("eigenvalues depend on the potential only through its combinations", "[analytic][property]") {
    testing::Sampler rng(23);
    for (int i = 0; i < 100; ++i) {
        const auto p = rng.constrained(PotentialKind::SKHP);
        const double sum = p.V0 + p.V1 + p.alpha * p.V2;
        const auto q = make_special_case(PotentialKind::SKHP, sum - p.V1 - p.alpha * p.V2, p.V1, p.V2, p.alpha);
        // Same A from different constants.
        const UnitSystem other{2.0, 4.0, true};
        for (int n = 0; n < 4; ++n) {
            const double base = momentum_eigenvalue(p, nat, 1.0, n).P;
            CHECK_THAT(momentum_eigenvalue(q, nat, 1.0, n).P, WithinRel(base, 1e-12));
            CHECK(momentum_eigenvalue(p, other, 1.0, n).P == base);
        }
    }
}

TEST_CASE("screened Kratzer tends to the Kratzer limit linearly", "[analytic][property]") {
    testing::Sampler rng(24);
    for (int i = 0; i < 10; ++i) {
        const double V0 = rng.uniform(-3.0, -1.0);
        const double V2 = rng.uniform(0.5, 3.0);
        const auto kr = make_special_case(PotentialKind::Kratzer, V0, 0, V2, 0);
        for (int n = 0; n <= 2; ++n) {
            const double limit = momentum_eigenvalue(kr, nat, 1.0, n).P;
            auto diff = [&](double alpha) {
                const auto sk = make_special_case(PotentialKind::ScreenedKratzer, V0, 0, V2, alpha);
                return std::abs(momentum_eigenvalue(sk, nat, 1.0, n).P - limit);
            };
            const double r1 = diff(1e-2) / diff(1e-3);
            const double r2 = diff(1e-3) / diff(1e-4);
            INFO("V0=" << V0 << " V2=" << V2 << " n=" << n);
            CHECK(r1 >= 8.0);
            CHECK(r1 <= 12.0);
            CHECK(r2 >= 8.0);
            CHECK(r2 <= 12.0);
        }
    }
}

TEST_CASE("max_valid_n", "[analytic]") {
    const auto coul = make_special_case(PotentialKind::Coulomb, -1, 0, 0, 0);
    const auto c = max_valid_n(coul, nat, 1.0, 20);
    REQUIRE(c.has_value());
    CHECK(c->capped);
    CHECK(c->n_max == 20);

    const auto s = max_valid_n(skp_example(), nat, 1.0);
    REQUIRE(s.has_value());
    CHECK_FALSE(s->capped);
    CHECK(s->n_max == 2);
    CHECK(momentum_eigenvalue(skp_example(), nat, 1.0, 3).ratio > 0.0);

    const auto z = max_valid_n(make_special_case(PotentialKind::SKHP, 0, 0, 0, 0.3), nat, 1.0, 15);
    REQUIRE(z.has_value());
    CHECK(z->capped);

    // R = 0 at n = 0.
    const auto none = make_special_case(PotentialKind::SKHP, -0.25, 0, 0, 0.5);
    CHECK(momentum_eigenvalue(none, nat, 1.0, 0).ratio == 0.0);
    CHECK_FALSE(max_valid_n(none, nat, 1.0).has_value());
}

TEST_CASE("wavefunction_spec", "[analytic]") {
    const auto w = wavefunction_spec(skp_example(), nat, 1.0, 0);
    CHECK_THAT(w.decay, WithinRel(0.35, 1e-14));
    CHECK(w.edge == 5.0);
    CHECK_THAT(w.jacobi_a, WithinRel(7.0, 1e-14));
    CHECK(w.jacobi_b == 9.0);
    CHECK_FALSE(w.normalized());

    const auto z = wavefunction_spec(make_special_case(PotentialKind::SKHP, 0, 0, 0, 1.0), nat, 1.0, 0);
    CHECK(z.decay == 0.5);
    CHECK(z.jacobi_a == 1.0);
    CHECK(z.jacobi_b == 1.0);

    testing::Sampler rng(25);
    for (int i = 0; i < 50; ++i) {
        const auto p = rng.well_branch();
        const auto ws = wavefunction_spec(p, nat, 1.0, 0);
        CHECK(ws.jacobi_b == 2.0 * ws.edge - 1.0);
        CHECK(ws.jacobi_a > -1.0);
        CHECK(ws.edge >= 0.5);
    }

    const auto none = make_special_case(PotentialKind::SKHP, -0.25, 0, 0, 0.5);
    CHECK_THROWS_AS(wavefunction_spec(none, nat, 1.0, 0), DomainError);
    const auto kr = make_special_case(PotentialKind::Kratzer, -1, 0, 3, 0);
    CHECK_THROWS_AS(wavefunction_spec(kr, nat, 1.0, 0), DomainError);
}

TEST_CASE("evaluate_wavefunction", "[analytic]") {
    const auto p = skp_example();
    const auto w0 = normalized(wavefunction_spec(p, nat, 1.0, 0));
    CHECK(std::abs(evaluate_wavefunction(w0, 1e-6)) < 1e-20);
    CHECK(std::abs(evaluate_wavefunction(w0, 800.0)) < 1e-100);
    CHECK_THROWS_AS(evaluate_wavefunction(w0, 0.0), DomainError);

    for (int n = 0; n <= 2; ++n) {
        const auto w = normalized(wavefunction_spec(p, nat, 1.0, n));
        std::vector<double> samples;
        const double t_end = 80.0 / p.alpha;
        for (int i = 1; i <= 20000; ++i) samples.push_back(evaluate_wavefunction(w, t_end * i / 20000.0));
        CHECK(count_sign_changes(samples) == n);
    }
}

TEST_CASE("normalisation", "[analytic]") {
    const auto p = skp_example();
    for (int n = 0; n <= 2; ++n) {
        const auto spec = wavefunction_spec(p, nat, 1.0, n);
        const auto r = normalize(spec, 16);
        CHECK(r.B_n > 0.0);
        const auto r2 = normalize(spec, 32);
        CHECK_THAT(r2.B_n, WithinRel(r.B_n, 1e-10));
        const auto w = normalized(spec);
        CHECK_THAT(norm_in_time(w, 1000.0), WithinAbs(1.0, 1e-8));
    }
    CHECK_THROWS_AS(normalize(wavefunction_spec(p, nat, 1.0, 2), 2), DomainError);
}

TEST_CASE("normalisation of random well states", "[analytic][property]") {
    testing::Sampler rng(26);
    for (int i = 0; i < 20; ++i) {
        const auto p = rng.well_branch();
        const auto w = normalized(wavefunction_spec(p, nat, 1.0, 0));
        CHECK_THAT(norm_in_time(w, 80.0 / w.decay + 40.0 / p.alpha, 800), WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("molecular states normalise without overflow", "[analytic]") {
    const auto us = molecular_units();
    const auto& m = find_molecule("I2");
    const auto p = make_special_case(PotentialKind::ScreenedKratzer, -3, 0, 10, 0.001);
    const auto w = normalized(wavefunction_spec(p, us, m.mu, 1));
    CHECK(std::isfinite(*w.log_B_n));
    CHECK(std::isfinite(evaluate_wavefunction(w, 1.0)));
}

TEST_CASE("s-domain coefficients", "[analytic]") {
    const auto p = skp_example();
    const auto c = s_domain_coefficients(p, nat, 1.0, -0.06125);
    CHECK_THAT(c.gamma1_sq, WithinRel(12.25, 1e-14));

    const auto h = make_special_case(PotentialKind::SKHP, -3, 5, 10, 0.1);
    CHECK(s_domain_coefficients(h, nat, 1.0, continuum_threshold(h)).gamma1_sq == 0.0);

    testing::Sampler rng(27);
    for (int i = 0; i < 200; ++i) {
        const auto q = rng.constrained(PotentialKind::SKHP);
        const double mu = rng.uniform(0.2, 3.0);
        const double P = rng.uniform(-3.0, 3.0);
        const auto k = s_domain_coefficients(q, nat, mu, P);
        const double A = kinetic_coefficients(nat, mu).A;
        const double lhs = k.gamma1_sq - k.gamma2 - k.gamma3;
        CHECK_THAT(lhs, WithinAbs(A * q.V2, 1e-9 * (std::abs(k.gamma1_sq) + std::abs(k.gamma2) + std::abs(k.gamma3))));
    }
    CHECK_THROWS_AS(s_domain_coefficients(make_special_case(PotentialKind::Coulomb, -1, 0, 0, 0), nat, 1.0, -0.5),
                    DomainError);
}

TEST_CASE("alpha trend of the screened Kratzer molecular rows", "[analytic][property]") {
    const auto us = molecular_units();
    for (const auto& m : molecule_catalog()) {
        for (int n = 0; n <= 3; ++n) {
            std::vector<double> P;
            for (double alpha : {0.001, 0.01, 0.1}) {
                P.push_back(momentum_eigenvalue(make_special_case(PotentialKind::ScreenedKratzer, -3, 0, 10, alpha),
                                                us, m.mu, n)
                                .P);
            }
            INFO(m.name << " n=" << n);
            CHECK(P[0] < P[1]);
            CHECK(P[1] < P[2]);
        }
    }
}
