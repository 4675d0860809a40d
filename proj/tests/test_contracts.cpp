#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace enl;
using fx::Q;

namespace {

const ContractKind kKinds[] = {ContractKind::PureEndowment, ContractKind::TermInsurance, ContractKind::Endowment,
                               ContractKind::LongevityBond};

ContractSpec<Q> random_spec(std::mt19937_64& rng, const Bundle<Q>& b, ContractKind kind) {
    ContractSpec<Q> s;
    s.kind = kind;
    s.term = 1 + static_cast<int>(rng() % b.h());
    s.g = random_measurable<Q>(rng, b.space.F, s.term, 0, 6);
    s.K = random_adapted<Q>(rng, b.space.F, 0, 4, 2);
    return s;
}

// E[payoff | G_t] from the payoff vector, evaluated at t ^ tau ^ term for the bond.
Process<Q> payoff_oracle(const Bundle<Q>& b, const ContractSpec<Q>& s) {
    const int T = s.term;
    Process<Q> out(b.n(), b.h());
    if (s.kind == ContractKind::LongevityBond) {
        auto GT = column(b.G, T);
        for (int p = 0; p < b.n(); ++p)
            for (int t = 0; t <= b.h(); ++t) {
                int u = std::min({t, T, b.tau[p]});
                out(p, t) = cond_expect(b.w(), b.gfil, GT, u)[p];
            }
        return out;
    }
    std::vector<Q> x(b.n(), Q(0));
    for (int p = 0; p < b.n(); ++p) {
        bool dead = b.tau[p] <= T;
        if (dead && s.kind != ContractKind::PureEndowment) x[p] = s.K(p, b.tau[p]);
        if (!dead && s.kind != ContractKind::TermInsurance) x[p] = s.g[p];
    }
    for (int t = 0; t <= b.h(); ++t) {
        auto e = cond_expect(b.w(), b.gfil, x, std::min(t, T));
        for (int p = 0; p < b.n(); ++p) out(p, t) = e[p];
    }
    return out;
}

// A coin that F never observes.
Space<Q> hidden_coin(const Q& q, int h) {
    std::vector<std::vector<std::vector<int>>> parts(h + 1, {{0, 1}});
    return build_space<Q>({q, Q(1) - q}, parts, h);
}

}  // namespace

TEST_CASE("every contract kind prices to its conditional payoff") {
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 30; ++i) {
        auto b = random_bundle<Q>(rng, {4, 40, 3, i % 2 == 0, 1});
        for (auto kind : kKinds) {
            auto spec = random_spec(rng, b, kind);
            auto d = price(b, spec);
            INFO(contract_name(kind) << " term " << spec.term);
            REQUIRE(all_zero(d.residual, 0));
            REQUIRE(equal(d.price, payoff_oracle(b, spec), 0));
        }
    }
}

TEST_CASE("independent tau: constant longevity bond and closed-form pure endowment") {
    auto s = product_space(fx::three_flips(), hidden_coin(Q(1, 3), 3));
    RandomTime tau;
    for (int p = 0; p < 8; ++p) {
        tau.push_back(2);
        tau.push_back(INF);
    }
    auto b = enlarge(s, tau);
    const int T = 3;
    ContractSpec<Q> bond{ContractKind::LongevityBond, T, {}, {}};
    auto db = price(b, bond);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t <= b.h(); ++t) CHECK(db.bond(p, t) == Q(2, 3));
    CHECK(all_zero(db.residual, 0));

    std::vector<Q> g(b.n());
    for (int p = 0; p < b.n(); ++p) g[p] = Q((p / 2) % 5);
    ContractSpec<Q> pe{ContractKind::PureEndowment, T, g, {}};
    auto d = price(b, pe);
    auto U = martingale_closure(b.w(), b.space.F, g);
    const Q GT(2, 3);
    for (int p = 0; p < b.n(); ++p) {
        Q mort(0);
        for (int t = 0; t <= T; ++t) {
            Q Gt = t < 2 ? Q(1) : GT;
            if (t >= 1 && t <= b.tau[p]) mort += -U(p, t) * GT / Gt * b.NG.inc(p, t);
            Q closed = b.tau[p] > t ? U(p, t) * GT / Gt : Q(0);
            CHECK(d.price(p, t) == closed);
            CHECK(d.parts[2].second(p, t) == mort);
            CHECK(sgn(d.parts[1].second(p, t)) == 0);
        }
    }
}

TEST_CASE("second-type risk of the longevity bond needs information beyond F at tau") {
    auto s = fx::three_flips();
    RandomTime tau{1, INF, 1, 1, 2, INF, INF, 3};
    auto plain = enlarge(s, tau);
    CHECK(second_type_risk(plain, 2).vanishes);
    CHECK(all_zero(second_type_risk(plain, 2).jump, 0));

    auto marked = enlarge(s, tau, {0, 0, 1, 1, 0, 0, 0, 0});
    auto r = second_type_risk(marked, 2);
    CHECK_FALSE(r.vanishes);
    // G_2 = (1/2, 1/2, 0, 0, ...); F_tau cell {0, 2, 3} averages to 1/6, the mark isolates path 0
    CHECK(r.jump(0, 1) == Q(1, 2) - Q(1, 6));
    CHECK(r.jump(2, 1) == Q(0) - Q(1, 6));
    ContractSpec<Q> bond{ContractKind::LongevityBond, 2, {}, {}};
    auto d = price(marked, bond);
    CHECK(all_zero(d.residual, 0));
    CHECK_FALSE(all_zero(d.parts[3].second, 0));
    CHECK(jeulin_class_check(marked, d.claim.k).second_type);
}

TEST_CASE("contract preconditions") {
    auto b = fx::w4();
    auto code = [&](const ContractSpec<Q>& s) {
        try {
            price(b, s);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Ok;
    };
    std::vector<Q> g{Q(1), Q(2), Q(3), Q(4)};
    CHECK(code({ContractKind::PureEndowment, 1, g, {}}) == ErrorCode::MeasurabilityError);
    CHECK(code({ContractKind::PureEndowment, 2, g, {}}) == ErrorCode::Ok);
    CHECK(code({ContractKind::PureEndowment, 3, g, {}}) == ErrorCode::TermOutOfRange);
    CHECK(code({ContractKind::LongevityBond, 0, {}, {}}) == ErrorCode::TermOutOfRange);
    auto raw = fx::from_rows<Q>({{Q(0), Q(1), Q(0)}, {Q(0), Q(2), Q(0)}, {Q(0), Q(0), Q(0)}, {Q(0), Q(0), Q(0)}});
    CHECK(code({ContractKind::TermInsurance, 2, {}, raw}) == ErrorCode::MeasurabilityError);
}

TEST_CASE("W4 term insurance") {
    auto b = fx::w4();
    ContractSpec<Q> ti{ContractKind::TermInsurance, 2, {}, fx::constant<Q>(4, 2, Q(1))};
    auto d = price(b, ti);
    CHECK(d.price(0, 0) == Q(3, 4));
    CHECK(d.price(2, 1) == Q(1, 2));
    CHECK(d.price(3, 2) == Q(0));
    CHECK(all_zero(d.residual, 0));
}
