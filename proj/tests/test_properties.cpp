#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "enl/runner.hpp"
#include "fixtures.hpp"

using namespace enl;
using fx::Q;

namespace {

constexpr double kFloatTol = 1e-10;

// Runs `prop` on `count` instances; each instance gets its own engine seeded from (seed, index)
// so a failure can be replayed in isolation.
void for_all(std::uint64_t seed, int count, const std::function<void(std::mt19937_64&)>& prop) {
    for (int i = 0; i < count; ++i) {
        std::seed_seq ss{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(ss);
        INFO("seed " << seed << " instance " << i);
        prop(rng);
    }
}

template <class T>
double tol_of() {
    return Field<T>::exact ? 0.0 : kFloatTol;
}

template <class T>
Process<T> f_martingale(std::mt19937_64& rng, const Bundle<T>& b) {
    return martingale_closure(b.w(), b.space.F, random_measurable<T>(rng, b.space.F, b.h(), -4, 4));
}

template <class T>
void bundle_properties(std::mt19937_64& rng) {
    const double tol = tol_of<T>();
    auto b = random_bundle<T>(rng, {5, 48, 3, true, 1});
    auto ng = is_martingale(b.w(), b.gfil, b.NG, tol);
    REQUIRE(ng.pass);
    REQUIRE(ng.max_violation <= kFloatTol);
    REQUIRE(is_martingale(b.w(), b.gfil, b.NGbar, tol).pass);
    REQUIRE(is_martingale(b.space, b.m).pass);
    for (int t = 0; t <= b.h(); ++t) {
        auto back = cond_expect(b.space, column(b.Gt, t), t - 1);
        for (int p = 0; p < b.n(); ++p) {
            REQUIRE(Field<T>::to_double(b.G(p, t)) >= -tol);
            REQUIRE(Field<T>::to_double(b.Gt(p, t)) <= 1 + tol);
            REQUIRE(Field<T>::to_double(b.Gt(p, t) - b.G(p, t)) >= -tol);
            if (t > 0) REQUIRE(Field<T>::is_zero(T(back[p] - b.G(p, t - 1)), tol));
        }
    }
    int term = 1 + static_cast<int>(rng() % b.h());
    auto h = random_adapted<T>(rng, b.space.F);
    auto g = random_measurable<T>(rng, b.space.F, term);
    auto r = represent_claim(b, make_claim(b, &h, &g, term));
    REQUIRE(all_zero(r.residual, tol));
    REQUIRE(orthogonality_defect(b, r) <= tol);
}

template <class T>
void appendix_properties(std::mt19937_64& rng) {
    const double tol = tol_of<T>();
    auto b = random_bundle<T>(rng, {5, 48, 3, true, 1});
    const auto& F = b.space.F;
    const int n = b.n(), h = b.h();

    // linearity of the hat transform
    auto M = f_martingale(rng, b), N = f_martingale(rng, b);
    T a(2), c(-3);
    auto lhs = hat_transform(b, a * M + c * N);
    auto rhs = a * hat_transform(b, M) + c * hat_transform(b, N);
    REQUIRE(equal(lhs, rhs, tol));
    REQUIRE(is_martingale(b.w(), b.gfil, lhs, tol).pass);

    // a member of the null class has a vanishing hat transform
    auto ho = random_adapted<T>(rng, F);
    Process<T> Mn(n, h, Klass::Adapted);
    for (int t = 1; t <= h; ++t) {
        std::vector<T> x(n), y(n);
        for (int p = 0; p < n; ++p) {
            T dv = b.Rt[p] == t ? T(1) : T(0);
            x[p] = ho(p, t) * b.G(p, t - 1) * dv;
            y[p] = ho(p, t) * dv;
        }
        auto ex = cond_expect(b.w(), F, x, t - 1);
        auto ey = cond_expect(b.w(), F, y, t - 1);
        for (int p = 0; p < n; ++p) {
            T gp = b.G(p, t - 1);
            T d(0);
            if (Field<T>::positive(gp, tol)) d = (x[p] - ex[p] - ey[p] * b.m.inc(p, t)) / gp;
            Mn(p, t) = Mn(p, t - 1) + d;
        }
    }
    REQUIRE(is_martingale(b.space, Mn).pass);
    REQUIRE(all_zero(hat_transform(b, Mn), tol));

    // duality of the dual Radon-Nikodym derivative
    auto phi = random_adapted<T>(rng, F, 0, 1, 3);
    auto psi = dual_rn_derivative(b.w(), F, phi, b.D, tol);
    auto pV = dual_projection(b.w(), F, integrate(F, phi, b.D, tol, false), ProjKind::Predictable, tol);
    REQUIRE(equal(pV, integrate(F, psi, b.Dp, tol), tol));

    // compensator of U^tau in G from F-quantities
    auto U = random_adapted<T>(rng, F);
    for (int p = 0; p < n; ++p) U(p, 0) = T(0);
    REQUIRE(equal(g_compensator(b, U), g_compensator_direct(b, U), tol));
}

}  // namespace

TEST_CASE("bundle and representation properties, exact") {
    for_all(11, 60, bundle_properties<Q>);
}

TEST_CASE("bundle and representation properties, float") {
    for_all(11, 60, bundle_properties<double>);
}

TEST_CASE("appendix identities, exact") {
    for_all(12, 60, appendix_properties<Q>);
}

TEST_CASE("appendix identities, float") {
    for_all(12, 60, appendix_properties<double>);
}

TEST_CASE("G-martingales decompose without residual") {
    for_all(13, 40, [](std::mt19937_64& rng) {
        auto b = random_bundle<Q>(rng, {5, 48, 3, true, 1});
        auto MG = martingale_closure(b.w(), b.gfil, random_measurable<Q>(rng, b.gfil, b.h(), -5, 5));
        auto r = represent_g_martingale(b, MG);
        REQUIRE(all_zero(r.residual, 0));
        REQUIRE(orthogonality_defect(b, r) == 0);
        REQUIRE(jeulin_class_check(b, r.k).second_type);
    });
}

TEST_CASE("space serialization round trip") {
    for_all(14, 20, [](std::mt19937_64& rng) {
        auto b = random_bundle<Q>(rng, {4, 32, 3, true, 1});
        json j;
        j["space"] = space_to_json(b.space, b.tau, b.marks);
        auto sc = parse_scenario(j.dump());
        auto m = scenario_model<Q>(sc);
        auto b2 = enlarge(m.space, m.tau, m.marks);
        REQUIRE(b2.w() == b.w());
        REQUIRE(b2.tau == b.tau);
        REQUIRE(equal(b2.G, b.G, 0));
        REQUIRE(equal(b2.NG, b.NG, 0));
        REQUIRE(b2.gfil.refines(b.gfil));
        REQUIRE(b.gfil.refines(b2.gfil));
    });
}

TEST_CASE("verify battery is deterministic and catches a sign flip in N^G") {
    VerifyOptions o;
    o.seed = 99;
    o.count = 8;
    o.max_horizon = 4;
    o.max_paths = 32;
    o.competitors = 5;
    o.workers = 1;
    auto a = verify_all<Q>(o);
    o.workers = 3;
    auto b = verify_all<Q>(o);
    CHECK(a.pass());
    CHECK(a.to_json().dump() == b.to_json().dump());
    o.flip_ng_sign = true;
    auto m = verify_all<Q>(o);
    CHECK_FALSE(m.pass());
    bool residual_failed = false;
    for (const auto& c : m.checks)
        if (c.name == "representation_residual") residual_failed = !c.pass;
    CHECK(residual_failed);
}

TEST_CASE("verify battery in float mode") {
    VerifyOptions o;
    o.seed = 5;
    o.count = 8;
    o.max_horizon = 4;
    o.max_paths = 32;
    o.competitors = 5;
    auto r = verify_all<double>(o);
    CHECK(r.pass());
    for (const auto& c : r.checks) CHECK(c.max_defect <= kFloatTol);
}
