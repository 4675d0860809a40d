#include "enl/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace enl {

bool AssumptionReport::all() const {
    auto ok = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool x) { return x; }); };
    return ok(martingale) && ok(orthogonal_to_m) && ok(no_jump_at_Rtilde);
}

std::string AssumptionReport::describe() const {
    std::ostringstream os;
    for (size_t i = 0; i < martingale.size(); ++i) {
        if (!martingale[i]) os << "asset " << i << ": not an F-martingale; ";
        if (!orthogonal_to_m[i]) os << "asset " << i << ": <S,m> != 0; ";
        if (!no_jump_at_Rtilde[i]) os << "asset " << i << ": jumps at R~; ";
    }
    std::string s = os.str();
    return s.empty() ? "ok" : s.substr(0, s.size() - 2);
}

const char* instrument_name(Instrument i) {
    return i == Instrument::LongevityBond ? "longevity_bond" : "pure_endowment_1";
}

template <class T>
AssumptionReport check_market_assumptions(const std::vector<Process<T>>& S, const Bundle<T>& b) {
    AssumptionReport r;
    const double tol = b.tol();
    for (const auto& s : S) {
        if (s.n != b.n() || s.h != b.h()) throw Error(ErrorCode::InvalidArgument, "asset has wrong shape");
        r.martingale.push_back(is_martingale(b.w(), b.space.F, s, tol).pass);
        r.orthogonal_to_m.push_back(all_zero(predictable_bracket(b.w(), b.space.F, s, b.m), tol));
        bool ok = true;
        for (int p = 0; p < b.n() && ok; ++p)
            for (int t = 1; t <= b.h(); ++t)
                if (Field<T>::is_zero(b.Gt(p, t), tol) && Field<T>::positive(b.G(p, t - 1), tol) &&
                    !Field<T>::is_zero(s.inc(p, t), tol)) {
                    ok = false;
                    break;
                }
        r.no_jump_at_Rtilde.push_back(ok);
    }
    return r;
}

template <class T>
static void require_market(const Market<T>& mk) {
    if (mk.S.size() != 1) throw Error(ErrorCode::InvalidArgument, "closed-form hedging needs exactly one risky asset");
    auto rep = check_market_assumptions(mk.S, mk.bundle);
    if (!rep.all()) throw Error(ErrorCode::AssumptionViolated, rep.describe());
}

template <class T>
static Process<T> cut(const Process<T>& X, int term) {
    return stop_at(X, RandomTime(X.n, INF), term);
}

template <class T>
DriftGkw<T> mortality_drift_gkw(const Market<T>& mk) {
    require_market(mk);
    const auto& b = mk.bundle;
    const auto& S = mk.S[0];
    const double tol = b.tol();
    DriftGkw<T> d;
    d.U = from_increments<T>(b.n(), b.h(), [&](int p, int t) {
        return Field<T>::positive(b.G(p, t - 1), tol) ? T(S.inc(p, t) * b.m.inc(p, t)) : T(0);
    });
    auto g = gkw(b.w(), b.space.F, d.U, {S}, tol);
    d.phi_m = g.theta[0];
    d.L_m = g.residual;
    for (int p = 0; p < b.n(); ++p)
        for (int t = 1; t <= b.h(); ++t)
            if (b.alive_at(p, t) && Field<T>::positive(b.G(p, t - 1), tol) &&
                !Field<T>::positive(b.G(p, t - 1) + d.phi_m(p, t), tol))
                d.inclusion_ok = false;
    return d;
}

template <class T>
Process<T> payment_process(const Bundle<T>& b, const Claim<T>& c) {
    Process<T> A(b.n(), b.h(), Klass::Adapted);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t <= b.h(); ++t) {
            if (b.tau[p] <= c.term && b.tau[p] <= t)
                A(p, t) = c.h(p, b.tau[p]) + c.k[p];
            else if (b.tau[p] > c.term && t >= c.term)
                A(p, t) = c.g[p];
        }
    return A;
}

template <class T>
Process<T> value_formula(const Bundle<T>& b, const Claim<T>& c) {
    auto r = represent_claim(b, c);
    Process<T> V(b.n(), b.h(), Klass::Adapted);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t < std::min(c.term, b.tau[p]); ++t)
            V(p, t) = (r.Mh(p, t) - r.hDo(p, t)) / b.G(p, t);
    return V;
}

template <class T>
static T energy_of(const Bundle<T>& b, const Process<T>& L) {
    auto q = bracket(L, L);
    return expectation(b.w(), column(q, b.h()));
}

template <class T>
RiskProcess<T> risk_process(const std::vector<T>& w, const Filtration& f, const std::vector<Process<T>>& assets,
                            const Strategy<T>& rho, const Process<T>& A, double tol) {
    if (rho.xi.size() != assets.size()) throw Error(ErrorCode::InvalidArgument, "strategy and asset count differ");
    const int n = A.n, h = A.h;
    RiskProcess<T> r;
    r.value = rho.eta;
    Process<T> gains(n, h, Klass::Adapted);
    for (size_t i = 0; i < assets.size(); ++i) {
        r.value += mul(rho.xi[i], assets[i]);
        gains += integrate(f, rho.xi[i], assets[i], tol);
    }
    r.value.klass = Klass::Adapted;
    for (int p = 0; p < n; ++p)
        if (!Field<T>::is_zero(r.value(p, h), tol)) throw Error(ErrorCode::NotAdmissible, "terminal value is not zero");
    r.cost = r.value - gains + A;
    r.cost.klass = Klass::Adapted;
    r.risk = Process<T>(n, h, Klass::Adapted);
    std::vector<T> sq(n);
    for (int t = 0; t <= h; ++t) {
        for (int p = 0; p < n; ++p) {
            T d = r.cost(p, h) - r.cost(p, t);
            sq[p] = d * d;
        }
        auto e = cond_expect(w, f, sq, t);
        for (int p = 0; p < n; ++p) r.risk(p, t) = e[p];
    }
    return r;
}

template <class T>
static void fill_value_cost(const Bundle<T>& b, const Claim<T>& c, HedgeResult<T>& r) {
    r.payments = payment_process(b, c);
    r.value = r.H - r.payments;
    for (int p = 0; p < b.n(); ++p)
        for (int t = c.term; t <= b.h(); ++t) r.value(p, t) = T(0);
    r.value.klass = Klass::Adapted;
    r.eta = r.value;
    for (size_t i = 0; i < r.prices.size(); ++i) r.eta -= mul(r.xi[i], r.prices[i]);
    r.eta.klass = Klass::Adapted;
    auto rp = risk_process(b.w(), b.gfil, r.prices, Strategy<T>{r.xi, r.eta}, r.payments, b.tol());
    r.cost = rp.cost;
    r.risk = rp.risk;
    r.energy = Field<T>::to_double(energy_of(b, r.remaining));
}

template <class T>
HedgeResult<T> g_side_hedge(const Market<T>& mk, const Claim<T>& c, const Process<T>& xiF, const Process<T>& LF) {
    require_market(mk);
    const auto& b = mk.bundle;
    const int n = b.n(), h = b.h(), T_ = c.term;
    const double tol = b.tol();
    auto drift = mortality_drift_gkw(mk);
    if (!drift.inclusion_ok) throw Error(ErrorCode::AssumptionViolated, "G_- + phi_m vanishes before tau");
    auto rep = represent_claim(b, c);
    auto Lm_hat = hat_transform(b, drift.L_m, false);
    auto LF_hat = hat_transform(b, LF, false);

    HedgeResult<T> r;
    r.term = T_;
    r.assets = {"stock"};
    r.prices = {stop_at(mk.S[0], b.tau, T_)};
    r.xiF = xiF;
    r.LF = LF;
    r.H = rep.H;
    Process<T> xi(n, h, Klass::Predictable), L(n, h, Klass::Adapted);
    for (int p = 0; p < n; ++p)
        for (int t = 1; t <= h; ++t) {
            T dl(0);
            if (t <= T_) {
                if (b.alive_at(p, t)) {
                    T gp = b.G(p, t - 1);
                    T den = gp + drift.phi_m(p, t);
                    xi(p, t) = safe_div(T(xiF(p, t)), den, tol);
                    dl -= safe_div(T(xiF(p, t) * Lm_hat.inc(p, t)), T(gp * den), tol);
                    dl += safe_div(T(LF_hat.inc(p, t)), gp, tol);
                    T y = rep.Mh(p, t - 1) - rep.hDo(p, t - 1);
                    dl -= safe_div(T(y * rep.m_hat.inc(p, t)), T(gp * gp), tol);
                }
                dl += rep.pure1.inc(p, t) + rep.pure2.inc(p, t);
            }
            L(p, t) = L(p, t - 1) + dl;
        }
    r.xi = {xi};
    r.remaining = L;
    fill_value_cost(b, c, r);
    return r;
}

template <class T>
HedgeResult<T> risk_minimize(const Market<T>& mk, const Claim<T>& c) {
    require_market(mk);
    const auto& b = mk.bundle;
    auto rep = represent_claim(b, c);
    auto g = gkw(b.w(), b.space.F, rep.Mh, {cut(mk.S[0], c.term)}, b.tol());
    return g_side_hedge(mk, c, g.theta[0], g.residual);
}

template <class T>
HedgeResult<T> risk_minimize(const Market<T>& mk, const Process<T>& h, int term) {
    return risk_minimize(mk, make_claim<T>(mk.bundle, &h, nullptr, term));
}

template <class T>
GkwResult<T> direct_g_gkw(const Market<T>& mk, const Claim<T>& c, const std::vector<Process<T>>& assets) {
    const auto& b = mk.bundle;
    return gkw(b.w(), b.gfil, claim_martingale(b, c), assets, b.tol());
}

template <class T>
DriftIdentities<T> drift_identity_defects(const Market<T>& mk) {
    const auto& b = mk.bundle;
    const double tol = b.tol();
    auto d = mortality_drift_gkw(mk);
    const auto& S = mk.S[0];
    auto U_hat = hat_transform(b, d.U, false);
    auto S_hat = hat_transform(b, S, false);
    auto Lm_hat = hat_transform(b, d.L_m, false);
    auto S_tau = stop(S, b.tau);
    DriftIdentities<T> r;
    for (int p = 0; p < b.n(); ++p)
        for (int t = 1; t <= b.h(); ++t) {
            T expect(0);
            if (b.alive_at(p, t)) {
                expect = safe_div(T(b.G(p, t - 1) * d.U.inc(p, t)), T(b.Gt(p, t)), tol);
                T lhs = (b.G(p, t - 1) + d.phi_m(p, t)) * S_hat.inc(p, t);
                T rhs = b.G(p, t - 1) * S_tau.inc(p, t) - Lm_hat.inc(p, t);
                r.s_hat = std::max(r.s_hat, std::abs(Field<T>::to_double(lhs - rhs)));
            }
            r.u_hat = std::max(r.u_hat, std::abs(Field<T>::to_double(U_hat.inc(p, t) - expect)));
        }
    auto q = predictable_bracket(b.w(), b.gfil, Lm_hat, S_tau);
    for (const auto& x : q.v) r.l_orth = std::max(r.l_orth, std::abs(Field<T>::to_double(x)));
    return r;
}

template <class T>
static Process<T> closure_at(const Space<T>& s, const std::vector<T>& X, int term) {
    Process<T> M(s.n_paths(), s.horizon(), Klass::Adapted);
    for (int t = 0; t <= s.horizon(); ++t) {
        auto e = cond_expect(s, X, std::min(t, term));
        for (int p = 0; p < s.n_paths(); ++p) M(p, t) = e[p];
    }
    return M;
}

// F-side pieces of g G_T (+ an optional C~_T) and the assembled G-side hedge.
template <class T>
static EndowmentSplit<T> split(const Market<T>& mk, const Claim<T>& c, const std::vector<T>* ctilde) {
    require_market(mk);
    const auto& b = mk.bundle;
    const auto& sp = b.space;
    const int n = b.n(), h = b.h(), T_ = c.term;
    const double tol = b.tol();
    auto ST = cut(mk.S[0], T_);
    EndowmentSplit<T> s;
    auto GT = column(b.G, T_);
    std::vector<T> gG(n);
    for (int p = 0; p < n; ++p) gG[p] = c.g[p] * GT[p];
    s.Ug = closure_at(sp, c.g, T_);
    s.GTm = closure_at(sp, GT, T_);
    s.Mg = closure_at(sp, gG, T_);
    s.Cor = bracket(s.GTm, s.Ug) + s.Mg - mul(s.GTm, s.Ug);
    s.Cor.klass = Klass::Adapted;
    s.identity_defect = is_martingale(b.w(), sp.F, s.Cor, tol).max_violation;

    auto decompose = [&](const Process<T>& M, Process<T>& xi, Process<T>& L) {
        auto g = gkw(b.w(), sp.F, M, {ST}, tol);
        xi = g.theta[0];
        L = g.residual;
    };
    decompose(s.Ug, s.xi_g, s.L_g);
    decompose(s.GTm, s.xi_GT, s.L_GT);
    decompose(s.Cor, s.xi_Cor, s.L_Cor);
    s.xi_Ctilde = Process<T>(n, h, Klass::Predictable);
    s.L_Ctilde = Process<T>(n, h, Klass::Adapted);
    if (ctilde) decompose(closure_at(sp, *ctilde, T_), s.xi_Ctilde, s.L_Ctilde);

    s.xiF = Process<T>(n, h, Klass::Predictable);
    for (int p = 0; p < n; ++p)
        for (int t = 1; t <= h; ++t)
            s.xiF(p, t) = s.GTm(p, t - 1) * s.xi_g(p, t) + s.Ug(p, t - 1) * s.xi_GT(p, t) + s.xi_Cor(p, t) +
                          s.xi_Ctilde(p, t);
    s.LF = from_increments<T>(n, h, [&](int p, int t) {
        return T(s.GTm(p, t - 1) * s.L_g.inc(p, t) + s.Ug(p, t - 1) * s.L_GT.inc(p, t) + s.L_Cor.inc(p, t) +
                 s.L_Ctilde.inc(p, t));
    });
    s.hedge = g_side_hedge(mk, c, s.xiF, s.LF);

    auto direct = risk_minimize(mk, c);
    s.xi_defect = std::max(max_abs_diff(s.xiF, direct.xiF), max_abs_diff(s.hedge.xi[0], direct.xi[0]));
    s.L_defect = std::max(max_abs_diff(s.LF, direct.LF), max_abs_diff(s.hedge.remaining, direct.remaining));
    return s;
}

template <class T>
EndowmentSplit<T> endowment_strategy_split(const Market<T>& mk, const std::vector<T>& g, int term) {
    auto c = make_claim<T>(mk.bundle, nullptr, &g, term);
    for (const auto& a : mk.bundle.space.F.partition(term))
        for (int p : a)
            if (!Field<T>::is_zero(g[p] - g[a.front()], mk.bundle.tol()))
                throw Error(ErrorCode::MeasurabilityError, "g is not F_T-measurable");
    return split<T>(mk, c, nullptr);
}

template <class T>
EndowmentSplit<T> annuity_strategy_split(const Market<T>& mk, const Process<T>& C, int term) {
    const auto& b = mk.bundle;
    const double tol = b.tol();
    if (!is_adapted(b.space.F, C, tol)) throw Error(ErrorCode::MeasurabilityError, "annuity process is not adapted");
    for (int p = 0; p < b.n(); ++p) {
        if (!Field<T>::is_zero(C(p, 0), tol)) throw Error(ErrorCode::DomainError, "annuity must start at 0");
        for (int t = 1; t <= b.h(); ++t)
            if (Field<T>::positive(C(p, t - 1) - C(p, t), tol))
                throw Error(ErrorCode::DomainError, "annuity must be nondecreasing");
    }
    auto CT = column(C, term);
    auto c = make_claim<T>(b, &C, &CT, term);
    std::vector<T> ct(b.n(), T(0));
    for (int p = 0; p < b.n(); ++p)
        for (int t = 1; t <= term; ++t) ct[p] += C(p, t) * b.Do.inc(p, t);
    return split(mk, c, &ct);
}

template <class T>
HedgeResult<T> securitized_hedge(const Market<T>& mk, const Claim<T>& c, const std::vector<Instrument>& instruments) {
    const auto& b = mk.bundle;
    const int n = b.n(), h = b.h();
    const double tol = b.tol();
    auto base = risk_minimize(mk, c);
    const size_t k = instruments.size();
    if (k > 2) throw Error(ErrorCode::InvalidArgument, "at most two instruments");

    std::vector<Process<T>> price(k), phi(k), Lx(k);
    for (size_t i = 0; i < k; ++i) {
        Claim<T> ci;
        if (instruments[i] == Instrument::LongevityBond) {
            ContractSpec<T> spec;
            spec.kind = ContractKind::LongevityBond;
            spec.term = c.term;
            ci = contract_claim(b, spec);
        } else {
            std::vector<T> one(n, T(1));
            ci = make_claim<T>(b, nullptr, &one, c.term);
        }
        auto hi = risk_minimize(mk, ci);
        price[i] = hi.H;
        phi[i] = hi.xi[0];
        Lx[i] = hi.remaining;
    }

    // Gram increments of the instrument risks and their covariation with the claim risk.
    std::vector<std::vector<Process<T>>> gram(k, std::vector<Process<T>>(k));
    std::vector<Process<T>> rhs(k);
    for (size_t i = 0; i < k; ++i) {
        rhs[i] = predictable_bracket(b.w(), b.gfil, base.remaining, Lx[i]);
        for (size_t j = 0; j < k; ++j) gram[i][j] = predictable_bracket(b.w(), b.gfil, Lx[i], Lx[j]);
    }
    std::vector<Process<T>> a(k, Process<T>(n, h, Klass::Predictable));
    int degenerate = 0;
    for (int t = 1; t <= std::min(c.term, h); ++t)
        for (int at = 0; at < b.gfil.n_atoms(t - 1); ++at) {
            const auto& mem = b.gfil.members(t - 1, at);
            int p0 = mem.front();
            if (!b.alive_at(p0, t)) continue;
            auto G = [&](size_t i, size_t j) { return T(gram[i][j].inc(p0, t)); };
            auto B = [&](size_t i) { return T(rhs[i].inc(p0, t)); };
            std::vector<T> x(k, T(0));
            for (size_t i = 0; i < k; ++i)
                if (Field<T>::is_zero(G(i, i), tol)) ++degenerate;
            if (k == 1) {
                x[0] = safe_div(B(0), G(0, 0), tol);
            } else if (k == 2) {
                // instrument 0 plays the bond, instrument 1 the pure endowment
                T theta = safe_div(G(1, 0), G(0, 0), tol);
                T psi = safe_div(G(1, 0), G(1, 1), tol);
                T rb = safe_div(B(0), G(0, 0), tol), re = safe_div(B(1), G(1, 1), tol);
                T det = T(1) - psi * theta;
                if (!Field<T>::is_zero(det, tol)) {
                    x[1] = (re - psi * rb) / det;
                    x[0] = rb - theta * x[1];
                } else {
                    x = solve_min_norm<T>({G(0, 0), G(0, 1), G(1, 0), G(1, 1)}, {B(0), B(1)}, 2, tol);
                }
            }
            for (int p : mem)
                for (size_t i = 0; i < k; ++i) a[i](p, t) = x[i];
        }

    HedgeResult<T> r = base;
    r.degenerate_atoms = degenerate;
    Process<T> stock = base.xi[0];
    Process<T> L = base.remaining;
    for (size_t i = 0; i < k; ++i) {
        stock -= mul(a[i], phi[i]);
        L -= integrate(b.gfil, a[i], Lx[i], tol);
        r.assets.push_back(instrument_name(instruments[i]));
        r.prices.push_back(price[i]);
    }
    stock.klass = Klass::Predictable;
    L.klass = Klass::Adapted;
    r.xi = {stock};
    for (size_t i = 0; i < k; ++i) r.xi.push_back(a[i]);
    r.remaining = L;
    fill_value_cost(b, c, r);
    return r;
}

#define ENL_INST(T)                                                                                           \
    template AssumptionReport check_market_assumptions(const std::vector<Process<T>>&, const Bundle<T>&);    \
    template DriftGkw<T> mortality_drift_gkw(const Market<T>&);                                              \
    template HedgeResult<T> risk_minimize(const Market<T>&, const Claim<T>&);                                \
    template HedgeResult<T> risk_minimize(const Market<T>&, const Process<T>&, int);                         \
    template HedgeResult<T> g_side_hedge(const Market<T>&, const Claim<T>&, const Process<T>&,               \
                                         const Process<T>&);                                                  \
    template GkwResult<T> direct_g_gkw(const Market<T>&, const Claim<T>&, const std::vector<Process<T>>&);   \
    template RiskProcess<T> risk_process(const std::vector<T>&, const Filtration&,                           \
                                         const std::vector<Process<T>>&, const Strategy<T>&,                  \
                                         const Process<T>&, double);                                          \
    template Process<T> payment_process(const Bundle<T>&, const Claim<T>&);                                  \
    template Process<T> value_formula(const Bundle<T>&, const Claim<T>&);                                    \
    template DriftIdentities<T> drift_identity_defects(const Market<T>&);                                    \
    template EndowmentSplit<T> endowment_strategy_split(const Market<T>&, const std::vector<T>&, int);       \
    template EndowmentSplit<T> annuity_strategy_split(const Market<T>&, const Process<T>&, int);             \
    template HedgeResult<T> securitized_hedge(const Market<T>&, const Claim<T>&, const std::vector<Instrument>&);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
