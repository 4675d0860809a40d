#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace enl;
using fx::Q;

TEST_CASE("optional and predictable projections on W4") {
    auto b = fx::w4();
    auto oD = projection(b.w(), b.space.F, b.D, ProjKind::Optional);
    auto pD = projection(b.w(), b.space.F, b.D, ProjKind::Predictable);
    // 1 - G and 1 - E[G_t | F_{t-1}]
    for (int p = 0; p < 4; ++p)
        for (int t = 0; t <= 2; ++t) CHECK(oD(p, t) == Q(1) - b.G(p, t));
    CHECK(pD(0, 1) == Q(1, 4));
    CHECK(pD(0, 2) == Q(1));
    CHECK(pD(2, 2) == Q(1, 2));
}

TEST_CASE("dual projections of D are the Azema compensators") {
    auto b = fx::w4();
    auto Do = dual_projection(b.w(), b.space.F, b.D, ProjKind::Optional, 0);
    auto Dp = dual_projection(b.w(), b.space.F, b.D, ProjKind::Predictable, 0);
    CHECK(equal(Do, b.Do, 0));
    CHECK(equal(Dp, b.Dp, 0));
    // path 0: P(tau = 1 | F_1) = 1/2 and tau != 2 on the path
    CHECK(Do(0, 1) == Q(1, 2));
    CHECK(Do(0, 2) == Q(1, 2));
    CHECK(Dp(0, 1) == Q(1, 4));
    CHECK(Dp(0, 2) == Q(3, 4));
    CHECK(is_martingale(b.space, Do - Dp).pass);
}

TEST_CASE("dual projection needs V_0 = 0") {
    auto s = fx::w4_space();
    auto V = fx::constant<Q>(4, 2, Q(1));
    try {
        dual_projection(s.weights, s.F, V, ProjKind::Optional, 0);
        FAIL("accepted V_0 != 0");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("dual Radon-Nikodym derivative") {
    auto b = fx::w4();
    auto half = fx::constant<Q>(4, 2, Q(1, 2));
    auto psi = dual_rn_derivative(b.w(), b.space.F, half, b.D, 0);
    for (int p = 0; p < 4; ++p)
        for (int t = 1; t <= 2; ++t) CHECK(psi(p, t) == (b.Dp.inc(p, t) == 0 ? Q(1) : Q(1, 2)));
    auto two = fx::constant<Q>(4, 2, Q(2));
    try {
        dual_rn_derivative(b.w(), b.space.F, two, b.D, 0);
        FAIL("accepted phi outside [0, 1]");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("minimal-norm solve on a rank-deficient Gram matrix") {
    int rank = -1;
    auto x = solve_min_norm<Q>({Q(1), Q(1), Q(1), Q(1)}, {Q(2), Q(2)}, 2, 0, &rank);
    CHECK(rank == 1);
    CHECK(x[0] == Q(1));
    CHECK(x[1] == Q(1));
    auto y = solve_min_norm<Q>({Q(2), Q(1), Q(1), Q(2)}, {Q(3), Q(3)}, 2, 0, &rank);
    CHECK(rank == 2);
    CHECK(y[0] == Q(1));
    CHECK(y[1] == Q(1));
    auto z = solve_min_norm<Q>({Q(0)}, {Q(0)}, 1, 0, &rank);
    CHECK(rank == 0);
    CHECK(z[0] == Q(0));
}

TEST_CASE("single-asset GKW matches the brute-force ratio") {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 25; ++i) {
        auto s = random_space<Q>(rng);
        auto M = martingale_closure(s.weights, s.F, column(random_adapted<Q>(rng, s.F), s.horizon()));
        auto S = martingale_closure(s.weights, s.F, column(random_adapted<Q>(rng, s.F), s.horizon()));
        auto r = gkw(s.weights, s.F, M, {S}, 0);
        auto th = oracle::gkw_theta(oracle::raw(s), oracle::rows(M), oracle::rows(S));
        for (int p = 0; p < s.n_paths(); ++p)
            for (int t = 1; t <= s.horizon(); ++t) REQUIRE(r.theta[0](p, t) == th[p][t]);
        CHECK(is_martingale(s, r.residual).pass);
        CHECK(all_zero(predictable_bracket(s, r.residual, S), 0));
        auto rebuilt = integrate(s, r.theta[0], S) + r.residual;
        for (int p = 0; p < s.n_paths(); ++p)
            for (int t = 0; t <= s.horizon(); ++t) REQUIRE(rebuilt(p, t) + M(p, 0) == M(p, t));
    }
}

TEST_CASE("GKW rejects non-martingale inputs") {
    auto s = fx::w4_space();
    auto X = fx::from_rows<Q>({{Q(0), Q(1), Q(2)}, {Q(0), Q(1), Q(2)}, {Q(0), Q(1), Q(2)}, {Q(0), Q(1), Q(2)}});
    try {
        gkw(s.weights, s.F, X, {X}, 0);
        FAIL("accepted a drift");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotMartingale);
    }
}

TEST_CASE("bracket ratio uses 0/0 = 0") {
    auto s = fx::w4_space();
    auto X = fx::from_rows<Q>({{Q(0), Q(1), Q(2)}, {Q(0), Q(1), Q(0)}, {Q(0), Q(-1), Q(-1)}, {Q(0), Q(-1), Q(-1)}});
    auto zero = fx::constant<Q>(4, 2, Q(0));
    auto r = bracket_ratio(s.weights, s.F, X, zero, 0);
    CHECK(all_zero(r, 0));
    auto self = bracket_ratio(s.weights, s.F, X, X, 0);
    CHECK(self(0, 1) == Q(1));
    CHECK(self(0, 2) == Q(1));
    CHECK(self(2, 2) == Q(0));
}
