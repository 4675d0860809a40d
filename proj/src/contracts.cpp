#include "enl/contracts.hpp"

#include <algorithm>

namespace enl {

const char* contract_name(ContractKind k) {
    switch (k) {
        case ContractKind::PureEndowment: return "pure_endowment";
        case ContractKind::TermInsurance: return "term_insurance";
        case ContractKind::Endowment: return "endowment";
        case ContractKind::LongevityBond: return "longevity_bond";
    }
    return "unknown";
}

template <class T>
static void check_spec(const Bundle<T>& b, const ContractSpec<T>& s) {
    if (s.term < 1 || s.term > b.h()) throw Error(ErrorCode::TermOutOfRange, "contract term outside 1..horizon");
    const double tol = b.tol();
    bool needs_g = s.kind == ContractKind::PureEndowment || s.kind == ContractKind::Endowment;
    bool needs_k = s.kind == ContractKind::TermInsurance || s.kind == ContractKind::Endowment;
    if (needs_g) {
        if (static_cast<int>(s.g.size()) != b.n()) throw Error(ErrorCode::InvalidArgument, "g has wrong length");
        for (const auto& a : b.space.F.partition(s.term))
            for (int p : a)
                if (!Field<T>::is_zero(s.g[p] - s.g[a.front()], tol))
                    throw Error(ErrorCode::MeasurabilityError, "g is not F_T-measurable");
    }
    if (needs_k) {
        if (s.K.n != b.n() || s.K.h != b.h()) throw Error(ErrorCode::InvalidArgument, "K has wrong shape");
        if (!is_adapted(b.space.F, s.K, tol)) throw Error(ErrorCode::MeasurabilityError, "K is not adapted");
    }
}

template <class T>
Claim<T> contract_claim(const Bundle<T>& b, const ContractSpec<T>& spec, Process<T>* xiG, Process<T>* Dbar_o) {
    check_spec(b, spec);
    const int n = b.n(), h = b.h(), T_ = spec.term;
    Claim<T> c = make_claim<T>(b, nullptr, nullptr, T_);
    switch (spec.kind) {
        case ContractKind::PureEndowment: c.g = spec.g; break;
        case ContractKind::TermInsurance: c.h = spec.K; break;
        case ContractKind::Endowment:
            c.g = spec.g;
            c.h = spec.K;
            break;
        case ContractKind::LongevityBond: {
            auto GT = column(b.G, T_);
            Process<T> xi(n, h, Klass::Adapted), db(n, h, Klass::Adapted);
            std::vector<T> x(n);
            for (int t = 1; t <= h; ++t) {
                for (int p = 0; p < n; ++p) x[p] = (t <= T_ && b.tau[p] == t) ? GT[p] : T(0);
                auto e = cond_expect(b.space, x, t);
                for (int p = 0; p < n; ++p) {
                    db(p, t) = db(p, t - 1) + e[p];
                    xi(p, t) = safe_div(e[p], T(b.Do.inc(p, t)), b.tol());
                }
            }
            auto at_g = cond_expect_at_tau(b, GT, TauField::G_tau);
            c.h = xi;
            c.g = GT;
            for (int p = 0; p < n; ++p)
                if (b.tau[p] <= T_) c.k[p] = at_g[p] - xi(p, b.tau[p]);
            if (xiG) *xiG = xi;
            if (Dbar_o) *Dbar_o = db;
            break;
        }
    }
    return c;
}

template <class T>
PriceDecomposition<T> price(const Bundle<T>& b, const ContractSpec<T>& spec) {
    PriceDecomposition<T> d;
    d.kind = spec.kind;
    d.term = spec.term;
    d.claim = contract_claim(b, spec, &d.xiG, &d.Dbar_o);
    auto r = represent_claim(b, d.claim);
    d.direct = r.H;
    d.M = r.Mh;
    d.Y = r.Mh - r.hDo;
    d.parts.emplace_back("financial", r.financial);
    d.parts.emplace_back("correlation", r.correlation);
    d.parts.emplace_back("mortality", r.pure1);
    if (spec.kind == ContractKind::LongevityBond) {
        d.parts.emplace_back("second_type", r.pure2);
        auto GT = column(b.G, spec.term);
        d.bond = Process<T>(b.n(), b.h(), Klass::Adapted);
        for (int t = 0; t <= b.h(); ++t) {
            auto e = cond_expect(b.w(), b.gfil, GT, std::min(t, spec.term));
            for (int p = 0; p < b.n(); ++p) d.bond(p, t) = e[p];
        }
        d.direct = stop(d.bond, b.tau);
    }
    d.price = Process<T>(b.n(), b.h(), Klass::Adapted);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t <= b.h(); ++t) d.price(p, t) = r.H(p, 0);
    for (const auto& [name, proc] : d.parts) d.price += proc;
    d.price.klass = Klass::Adapted;
    d.residual = d.direct - d.price;
    return d;
}

template <class T>
SecondTypeRisk<T> second_type_risk(const Bundle<T>& b, int term) {
    ContractSpec<T> spec;
    spec.kind = ContractKind::LongevityBond;
    spec.term = term;
    auto c = contract_claim(b, spec);
    SecondTypeRisk<T> s;
    s.jump = Process<T>(b.n(), b.h(), Klass::Adapted);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t <= b.h(); ++t)
            if (b.tau[p] <= t && b.tau[p] <= term) s.jump(p, t) = c.k[p];
    auto GT = column(b.G, term);
    auto eg = cond_expect_at_tau(b, GT, TauField::G_tau);
    auto ef = cond_expect_at_tau(b, GT, TauField::F_tau);
    for (int p = 0; p < b.n(); ++p)
        if (b.tau[p] < term && !Field<T>::is_zero(eg[p] - ef[p], b.tol())) s.vanishes = false;
    return s;
}

#define ENL_INST(T)                                                                                  \
    template Claim<T> contract_claim(const Bundle<T>&, const ContractSpec<T>&, Process<T>*, Process<T>*); \
    template PriceDecomposition<T> price(const Bundle<T>&, const ContractSpec<T>&);                  \
    template SecondTypeRisk<T> second_type_risk(const Bundle<T>&, int);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
