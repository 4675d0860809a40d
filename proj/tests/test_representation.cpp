#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace enl;
using fx::Q;

namespace {

// E[X | G_t] for a random G_h-measurable X.
Process<Q> random_g_martingale(std::mt19937_64& rng, const Bundle<Q>& b) {
    return martingale_closure(b.w(), b.gfil, random_measurable<Q>(rng, b.gfil, b.h(), -5, 5));
}

}  // namespace

TEST_CASE("W4 optional payoff h = 1") {
    auto b = fx::w4();
    auto one = fx::constant<Q>(4, 2, Q(1));
    auto r = represent_optional_payoff(b, one);
    CHECK(r.Mh(0, 0) == Q(3, 4));
    CHECK(r.H(3, 0) == Q(3, 4));
    CHECK(all_zero(r.residual, 0));
    CHECK(orthogonality_defect(b, r) == 0);
    // H_1 on the surviving atom {2, 3}: P(tau = 2 | F_1, tau > 1) = 1/2
    CHECK(r.H(2, 1) == Q(1, 2));
    CHECK(r.H(0, 1) == Q(1));
}

TEST_CASE("representation residual vanishes on random claims") {
    std::mt19937_64 rng(606);
    for (int i = 0; i < 40; ++i) {
        auto b = random_bundle<Q>(rng, {5, 48, 3, true, 1});
        int term = 1 + static_cast<int>(rng() % b.h());
        auto h = random_adapted<Q>(rng, b.space.F);
        auto g = random_measurable<Q>(rng, b.space.F, term);
        auto c = make_claim(b, &h, &g, term);
        auto r = represent_claim(b, c);
        REQUIRE(all_zero(r.residual, 0));
        CHECK(orthogonality_defect(b, r) == 0);
        CHECK(jh_crosscheck(b, c) == 0);
        CHECK(is_martingale(b.w(), b.gfil, r.financial, 0).pass);
        CHECK(is_martingale(b.w(), b.gfil, r.pure1, 0).pass);
    }
}

TEST_CASE("G-martingale decomposition is unique off the support of D") {
    std::mt19937_64 rng(707);
    for (int i = 0; i < 30; ++i) {
        auto b = random_bundle<Q>(rng, {5, 48, 3, true, 1});
        auto MG = random_g_martingale(rng, b);
        auto r = represent_g_martingale(b, MG);
        REQUIRE(all_zero(r.residual, 0));
        CHECK(jeulin_class_check(b, r.k).second_type);

        // change the representative where D^o does not charge and where no path survives
        Claim<Q> c;
        c.term = b.h();
        c.h = r.h;
        c.g = r.g;
        c.k = r.k;
        for (int p = 0; p < b.n(); ++p) {
            for (int t = 1; t <= b.h(); ++t)
                if (sgn(b.Do.inc(p, t)) == 0) c.h(p, t) += Q(7 + t);
            if (sgn(b.G(p, b.h())) == 0) c.g[p] += Q(11);
        }
        auto r2 = represent_claim(b, c);
        CHECK(equal(r2.H, stop(MG, b.tau), 0));
        CHECK(equal(r2.pure1, r.pure1, 0));
        CHECK(equal(r2.pure2, r.pure2, 0));
        CHECK(equal(r2.financial + r2.correlation, r.financial + r.correlation, 0));
        for (int p = 0; p < b.n(); ++p)
            for (int t = 1; t <= b.h(); ++t)
                if (sgn(b.NG.inc(p, t)) != 0) REQUIRE(r2.phi_o(p, t) == r.phi_o(p, t));
    }
}

TEST_CASE("correlation part vanishes for pseudo-stopping tau") {
    auto s = fx::w4_space();
    auto prod = product_space(s, build_space<Q>({Q(1, 2), Q(1, 2)}, {{{0, 1}}, {{0}, {1}}, {{0}, {1}}}, 2));
    RandomTime tau;
    for (int i = 0; i < 4; ++i) {
        tau.push_back(1);
        tau.push_back(INF);
    }
    auto b = enlarge(prod, tau);
    std::mt19937_64 rng(808);
    auto h = random_adapted<Q>(rng, b.space.F);
    auto g = random_measurable<Q>(rng, b.space.F, 2);
    auto r = represent_claim(b, make_claim(b, &h, &g, 2));
    CHECK(all_zero(r.correlation, 0));
    CHECK(all_zero(r.residual, 0));
}

TEST_CASE("claim preconditions") {
    auto b = fx::w4();
    try {
        make_claim<Q>(b, nullptr, nullptr, 3);
        FAIL("accepted term beyond horizon");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TermOutOfRange);
    }
    auto raw = fx::from_rows<Q>({{Q(0), Q(1), Q(0)}, {Q(0), Q(2), Q(0)}, {Q(0), Q(0), Q(0)}, {Q(0), Q(0), Q(0)}});
    try {
        represent_optional_payoff(b, raw);
        FAIL("accepted a non-adapted h");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MeasurabilityError);
    }
}

TEST_CASE("pure mortality classification") {
    auto b = fx::w4();
    SECTION("K . N^G is pure of the first type") {
        auto K = fx::from_rows<Q>({{Q(0), Q(2), Q(5)}, {Q(0), Q(2), Q(3)}, {Q(0), Q(1), Q(1)}, {Q(0), Q(1), Q(4)}});
        auto N = integrate(b.space.F, K, b.NG, 0, false);
        auto v = classify_pure_mortality(b, N);
        CHECK(v.pure);
        CHECK_FALSE(v.witness);
        // N^G only charges the first atom at t = 1; at R = 2 the jump is fully compensated
        CHECK(v.xi_o(0, 1) == Q(2));
        CHECK(v.xi_o(1, 1) == Q(2));
    }
    SECTION("hat of an F-martingale is not pure") {
        auto M = martingale_closure<Q>(b.w(), b.space.F, {Q(1), Q(1), Q(-1), Q(-1)});
        auto v = classify_pure_mortality(b, hat_transform(b, M));
        CHECK_FALSE(v.pure);
        REQUIRE(v.witness);
        CHECK(v.witness->time == 1);
    }
}

TEST_CASE("second-type jumps with marks") {
    auto s = fx::three_flips();
    RandomTime tau{1, 1, 1, 1, 2, 2, 2, INF};
    auto b = enlarge(s, tau, {0, 1, 0, 1, 0, 1, 0, 0});
    std::vector<Q> k{Q(1), Q(-1), Q(1), Q(-1), Q(0), Q(0), Q(0), Q(0)};
    auto j = jeulin_class_check(b, k);
    CHECK(j.second_type);
    CHECK(j.third_type);
    CHECK(orthogonal_to_first_type(b, k));
    Process<Q> kD(8, 3, Klass::Adapted);
    for (int p = 0; p < 8; ++p)
        for (int t = 0; t <= 3; ++t) kD(p, t) = tau[p] <= t ? k[p] : Q(0);
    auto v = classify_pure_mortality(b, kD);
    CHECK(v.pure);
    CHECK(v.xi_pr == k);
    CHECK(all_zero(v.xi_o, 0));

    std::vector<Q> third{Q(0), Q(0), Q(0), Q(0), Q(1), Q(1), Q(-2), Q(0)};
    auto j3 = jeulin_class_check(b, third);
    CHECK(j3.third_type);
    CHECK_FALSE(j3.second_type);
}

TEST_CASE("Nbar report on W4 is all false with the t = 1 witness") {
    auto b = fx::w4();
    auto r = nbar_report(b);
    CHECK_FALSE(r.nbar_is_pure);
    CHECK_FALSE(r.nbar_equals_ng);
    CHECK_FALSE(r.condition_c);
    CHECK(r.consistent());
    auto pG = projection(b.w(), b.space.F, b.G, ProjKind::Predictable);
    for (int p = 0; p < 4; ++p) CHECK(pG(p, 1) * b.Gt(p, 1) == Q(3, 4));
    CHECK(b.G(0, 0) * b.G(0, 1) == Q(1, 2));
    CHECK(b.G(2, 0) * b.G(2, 1) == Q(1));
    CHECK_FALSE(r.grid_condition[1]);
}

TEST_CASE("Nbar report agrees on random bundles") {
    std::mt19937_64 rng(909);
    for (int i = 0; i < 40; ++i) {
        auto b = random_bundle<Q>(rng, {4, 32, 3, false, 1});
        CHECK(nbar_report(b).consistent());
    }
}
