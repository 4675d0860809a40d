#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace enl;
using fx::Q;

TEST_CASE("filtration atoms and branching on W4") {
    auto s = fx::w4_space();
    CHECK(s.F.n_atoms(0) == 1);
    CHECK(s.F.n_atoms(1) == 2);
    CHECK(s.F.n_atoms(2) == 4);
    CHECK(s.F.atom(1, 0) == s.F.atom(1, 1));
    CHECK(s.F.atom(1, 1) != s.F.atom(1, 2));
    CHECK(s.F.atom(-1, 3) == s.F.atom(0, 3));
    for (int a = 0; a < s.F.n_atoms(1); ++a) CHECK(s.F.branches(1, a));
}

TEST_CASE("non-refining partitions are rejected") {
    auto bad = [] {
        return build_space<Q>({Q(1, 2), Q(1, 2)}, {{{0}, {1}}, {{0, 1}}}, 1);
    };
    try {
        bad();
        FAIL("accepted a coarsening filtration");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonRefiningFiltration);
    }
}

TEST_CASE("weights must be a probability vector with positive entries") {
    auto code = [](std::vector<Q> w) {
        try {
            build_space<Q>(w, {{{0, 1}}, {{0}, {1}}}, 1);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Ok;
    };
    CHECK(code({Q(1, 2), Q(1, 3)}) == ErrorCode::BadWeights);
    CHECK(code({Q(3, 2), Q(-1, 2)}) == ErrorCode::BadWeights);
    CHECK(code({Q(1), Q(0)}) == ErrorCode::BadWeights);
    CHECK(code({Q(1, 3), Q(2, 3)}) == ErrorCode::Ok);
}

TEST_CASE("conditional expectation matches brute force") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 20; ++i) {
        auto s = random_space<Q>(rng);
        auto r = oracle::raw(s);
        std::vector<Q> X(s.n_paths());
        for (auto& x : X) x = ratio(static_cast<long>(rng() % 17) - 8, 1 + static_cast<long>(rng() % 5));
        for (int t = 0; t <= s.horizon(); ++t) {
            auto c = cond_expect(s, X, t);
            for (int p = 0; p < s.n_paths(); ++p) REQUIRE(c[p] == oracle::cond(r, X, t, p));
        }
        auto M = martingale_closure(s.weights, s.F, X);
        CHECK(is_martingale(s, M).pass);
        CHECK(column(M, s.horizon()) == X);
    }
}

TEST_CASE("integration requires a predictable integrand") {
    auto s = fx::w4_space();
    auto X = fx::from_rows<Q>({{Q(0), Q(1), Q(2)}, {Q(0), Q(1), Q(0)}, {Q(0), Q(-1), Q(0)}, {Q(0), Q(-1), Q(-2)}});
    auto H = X;  // adapted, not predictable
    try {
        integrate(s, H, X);
        FAIL("accepted an adapted integrand");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MeasurabilityError);
    }
    auto one = fx::constant<Q>(4, 2, Q(1));
    auto I = integrate(s, one, X);
    CHECK(equal(I, X, 0));
    auto B = bracket(X, X);
    CHECK(B(0, 2) == Q(2));
    auto P = predictable_bracket(s, X, X);
    CHECK(P(0, 1) == Q(1));
    CHECK(P(0, 2) == Q(2));
    CHECK(is_martingale(s, B - P).pass);
    CHECK(is_martingale(s, mul(X, X) - P).pass);
}

TEST_CASE("martingale report locates the violation") {
    auto s = fx::w4_space();
    auto X = fx::from_rows<Q>({{Q(0), Q(1), Q(1)}, {Q(0), Q(1), Q(1)}, {Q(0), Q(0), Q(1)}, {Q(0), Q(0), Q(-1)}});
    auto r = is_martingale(s, X);
    CHECK_FALSE(r.pass);
    CHECK(r.time == 1);
    CHECK(r.max_violation == Catch::Approx(0.5));
    auto Xr = X;
    Xr(0, 1) = Q(2);  // not adapted at t = 1
    CHECK_FALSE(is_martingale(s, Xr).adapted);
}

TEST_CASE("stopping freezes paths") {
    auto X = fx::from_rows<Q>({{Q(0), Q(1), Q(3)}, {Q(0), Q(2), Q(5)}});
    auto Y = stop(X, {1, INF});
    CHECK(Y(0, 2) == Q(1));
    CHECK(Y(1, 2) == Q(5));
}

TEST_CASE("float backend agrees with exact arithmetic within tolerance") {
    std::mt19937_64 a(5), b(5);
    auto sq = random_space<Q>(a);
    auto sd = random_space<double>(b);
    REQUIRE(sq.n_paths() == sd.n_paths());
    std::vector<Q> X(sq.n_paths());
    std::vector<double> Xd(sq.n_paths());
    for (int p = 0; p < sq.n_paths(); ++p) {
        X[p] = ratio(p * p % 7, 3);
        Xd[p] = X[p].get_d();
    }
    for (int t = 0; t <= sq.horizon(); ++t) {
        auto cq = cond_expect(sq, X, t);
        auto cd = cond_expect(sd, Xd, t);
        for (int p = 0; p < sq.n_paths(); ++p) CHECK(std::fabs(cq[p].get_d() - cd[p]) <= 1e-12);
    }
}
