#include "enl/representation.hpp"

#include <algorithm>

namespace enl {

template <class T>
Claim<T> make_claim(const Bundle<T>& b, const Process<T>* h, const std::vector<T>* g, int term) {
    if (term < 0 || term > b.h()) throw Error(ErrorCode::TermOutOfRange, "term outside the time grid");
    Claim<T> c;
    c.term = term;
    c.h = h ? *h : Process<T>(b.n(), b.h(), Klass::Adapted);
    c.g = g ? *g : std::vector<T>(b.n(), T(0));
    c.k.assign(b.n(), T(0));
    return c;
}

template <class T>
static std::vector<T> payoff(const Bundle<T>& b, const Claim<T>& c) {
    std::vector<T> x(b.n());
    for (int p = 0; p < b.n(); ++p)
        x[p] = b.tau[p] <= c.term ? T(c.h(p, b.tau[p]) + c.k[p]) : c.g[p];
    return x;
}

template <class T>
Process<T> claim_martingale(const Bundle<T>& b, const Claim<T>& c) {
    auto x = payoff(b, c);
    Process<T> H(b.n(), b.h(), Klass::Adapted);
    for (int t = 0; t <= b.h(); ++t) {
        auto e = cond_expect(b.w(), b.gfil, x, std::min(t, c.term));
        for (int p = 0; p < b.n(); ++p) H(p, t) = e[p];
    }
    return H;
}

template <class T>
OptionalRepresentation<T> represent_claim(const Bundle<T>& b, const Claim<T>& c) {
    const int n = b.n(), h = b.h(), T_ = c.term;
    const double tol = b.tol();
    if (T_ < 0 || T_ > h) throw Error(ErrorCode::TermOutOfRange, "term outside the time grid");
    if (!is_adapted(b.space.F, c.h, tol)) throw Error(ErrorCode::MeasurabilityError, "payoff process h is not adapted");
    OptionalRepresentation<T> r;
    r.term = T_;
    r.h = c.h;
    r.g = c.g;
    r.k = c.k;
    r.H = claim_martingale(b, c);

    r.hDo = Process<T>(n, h, Klass::Adapted);
    std::vector<T> z(n);
    for (int p = 0; p < n; ++p) {
        for (int t = 1; t <= h; ++t)
            r.hDo(p, t) = r.hDo(p, t - 1) + (t <= T_ ? T(c.h(p, t) * b.Do.inc(p, t)) : T(0));
        z[p] = r.hDo(p, h) + c.g[p] * b.G(p, T_);
    }
    r.Mh = Process<T>(n, h, Klass::Adapted);
    for (int t = 0; t <= h; ++t) {
        auto e = cond_expect(b.space, z, std::min(t, T_));
        for (int p = 0; p < n; ++p) r.Mh(p, t) = e[p];
    }
    r.Mh_hat = hat_transform(b, r.Mh, false);
    r.m_hat = hat_transform(b, b.m, false);

    r.phi_o = Process<T>(n, h, Klass::Adapted);
    r.financial = Process<T>(n, h, Klass::Adapted);
    r.correlation = Process<T>(n, h, Klass::Adapted);
    r.pure1 = Process<T>(n, h, Klass::Adapted);
    r.pure2 = Process<T>(n, h, Klass::Adapted);
    for (int p = 0; p < n; ++p) {
        for (int t = 1; t <= h; ++t) {
            T df(0), dc(0), d1(0), d2(0);
            if (t <= T_) {
                if (b.alive_at(p, t)) {
                    T gp = b.G(p, t - 1);
                    df = safe_div(T(r.Mh_hat.inc(p, t)), gp, tol);
                    T y = r.Mh(p, t - 1) - r.hDo(p, t - 1);
                    dc = -safe_div(T(y * r.m_hat.inc(p, t)), T(gp * gp), tol);
                }
                if (t < b.R[p]) {
                    r.phi_o(p, t) = (c.h(p, t) * b.G(p, t) - r.Mh(p, t) + r.hDo(p, t)) / b.G(p, t);
                    d1 = r.phi_o(p, t) * b.NG.inc(p, t);
                }
                if (b.tau[p] == t) d2 = c.k[p];
            }
            r.financial(p, t) = r.financial(p, t - 1) + df;
            r.correlation(p, t) = r.correlation(p, t - 1) + dc;
            r.pure1(p, t) = r.pure1(p, t - 1) + d1;
            r.pure2(p, t) = r.pure2(p, t - 1) + d2;
        }
    }
    r.residual = Process<T>(n, h, Klass::Adapted);
    for (int p = 0; p < n; ++p)
        for (int t = 0; t <= h; ++t)
            r.residual(p, t) = r.H(p, t) - r.H(p, 0) - r.financial(p, t) - r.correlation(p, t) - r.pure1(p, t) -
                               r.pure2(p, t);
    return r;
}

template <class T>
OptionalRepresentation<T> represent_optional_payoff(const Bundle<T>& b, const Process<T>& h) {
    return represent_claim(b, make_claim<T>(b, &h, nullptr, b.h()));
}

template <class T>
OptionalRepresentation<T> represent_g_martingale(const Bundle<T>& b, const Process<T>& MG) {
    if (!is_martingale(b.w(), b.gfil, MG, b.tol()).pass)
        throw Error(ErrorCode::NotMartingale, "input is not a G-martingale");
    const int n = b.n(), h = b.h();
    Process<T> stopped = stop(MG, b.tau);
    std::vector<T> zeta(n, T(0)), g(n, T(0));
    for (int p = 0; p < n; ++p)
        if (b.tau[p] <= h) zeta[p] = MG(p, b.tau[p]);
    // survival value: F_h-measurable, read off the survivors of each atom
    for (int a = 0; a < b.space.F.n_atoms(h); ++a) {
        const auto& mem = b.space.F.members(h, a);
        auto it = std::find_if(mem.begin(), mem.end(), [&](int p) { return b.tau[p] > h; });
        if (it == mem.end()) continue;
        for (int p : mem) g[p] = MG(*it, h);
    }
    Claim<T> c;
    c.term = h;
    c.h = mu_cond_expect(b.space, b.tau, zeta, ProjKind::Optional);
    c.g = g;
    c.k.assign(n, T(0));
    for (int p = 0; p < n; ++p)
        if (b.tau[p] <= h) c.k[p] = zeta[p] - c.h(p, b.tau[p]);
    auto r = represent_claim(b, c);
    r.H = stopped;
    for (int p = 0; p < n; ++p)
        for (int t = 0; t <= h; ++t)
            r.residual(p, t) = stopped(p, t) - stopped(p, 0) - r.financial(p, t) - r.correlation(p, t) -
                               r.pure1(p, t) - r.pure2(p, t);
    return r;
}

template <class T>
double orthogonality_defect(const Bundle<T>& b, const OptionalRepresentation<T>& r) {
    Process<T> a = r.financial + r.correlation;
    const Process<T>* parts[3] = {&a, &r.pure1, &r.pure2};
    Process<T> zero(b.n(), b.h());
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            worst = std::max(worst, max_abs_diff(predictable_bracket(b.w(), b.gfil, *parts[i], *parts[j]), zero));
    return worst;
}

template <class T>
std::vector<Witness<T>> indicator_basis(const Space<T>& s) {
    std::vector<Witness<T>> out;
    const int n = s.n_paths(), h = s.horizon();
    for (int t = 1; t <= h; ++t)
        for (int a = 0; a < s.F.n_atoms(t); ++a) {
            std::vector<T> ind(n, T(0));
            for (int p : s.F.members(t, a)) ind[p] = T(1);
            auto pr = cond_expect(s, ind, t - 1);
            Witness<T> w{t, a, Process<T>(n, h, Klass::Adapted)};
            for (int p = 0; p < n; ++p)
                for (int u = t; u <= h; ++u) w.M(p, u) = ind[p] - pr[p];
            out.push_back(std::move(w));
        }
    return out;
}

template <class T>
PurityVerdict<T> classify_pure_mortality(const Bundle<T>& b, const Process<T>& N) {
    auto rep = represent_g_martingale(b, N);
    PurityVerdict<T> v;
    v.pure = all_zero(rep.financial + rep.correlation, b.tol());
    v.xi_o = rep.phi_o;
    v.xi_pr = rep.k;
    if (!v.pure) {
        Process<T> Nt = stop(N, b.tau);
        for (auto& w : indicator_basis(b.space))
            if (!all_zero(predictable_bracket(b.w(), b.gfil, Nt, w.M), b.tol())) {
                v.witness = std::move(w);
                break;
            }
    }
    return v;
}

template <class T>
NbarReport nbar_report(const Bundle<T>& b) {
    NbarReport r;
    const double tol = b.tol();
    r.nbar_is_pure = classify_pure_mortality(b, b.NGbar).pure;
    r.nbar_equals_ng = equal(b.NG, b.NGbar, tol);
    r.grid_condition.assign(b.h() + 1, true);
    auto pG = projection(b.w(), b.space.F, b.G, ProjKind::Predictable);
    r.condition_c = true;
    for (int t = 1; t <= b.h(); ++t)
        for (int p = 0; p < b.n(); ++p) {
            if (!Field<T>::is_zero(pG(p, t) * b.Gt(p, t) - b.G(p, t - 1) * b.G(p, t), tol)) r.condition_c = false;
            if (!Field<T>::is_zero(b.Do.inc(p, t) * b.G(p, t - 1) - b.Dp.inc(p, t) * b.Gt(p, t), tol))
                r.grid_condition[t] = false;
        }
    return r;
}

template <class T>
JeulinClass jeulin_class_check(const Bundle<T>& b, const std::vector<T>& k) {
    JeulinClass j;
    auto e2 = cond_expect_at_tau(b, k, TauField::F_tau);
    auto e3 = cond_expect_at_tau(b, k, TauField::F_tau_minus);
    j.second_type = std::all_of(e2.begin(), e2.end(), [&](const T& x) { return Field<T>::is_zero(x, b.tol()); });
    j.third_type = std::all_of(e3.begin(), e3.end(), [&](const T& x) { return Field<T>::is_zero(x, b.tol()); });
    return j;
}

template <class T>
bool orthogonal_to_first_type(const Bundle<T>& b, const std::vector<T>& k, int* witness_time) {
    const int n = b.n();
    std::vector<T> x(n);
    for (int t = 1; t <= b.h(); ++t)
        for (int a = 0; a < b.space.F.n_atoms(t); ++a) {
            std::fill(x.begin(), x.end(), T(0));
            for (int p : b.space.F.members(t, a))
                if (b.tau[p] == t) x[p] = k[p] * b.NG.inc(p, t);
            auto e = cond_expect(b.w(), b.gfil, x, t - 1);
            for (const auto& v : e)
                if (!Field<T>::is_zero(v, b.tol())) {
                    if (witness_time) *witness_time = t;
                    return false;
                }
        }
    return true;
}

template <class T>
double jh_crosscheck(const Bundle<T>& b, const Claim<T>& c, Process<T>* Jout) {
    auto r = represent_claim(b, c);
    const int n = b.n(), h = b.h();
    Process<T> J(n, h, Klass::Adapted);
    double worst = 0;
    for (int p = 0; p < n; ++p)
        for (int t = 0; t <= h; ++t) {
            T K = b.G(p, t);
            if (t >= b.R[p]) {
                T gr = b.Gprev(p, b.R[p]);
                K += Field<T>::is_zero(gr, b.tol()) ? T(gr + 1) : gr;
            }
            J(p, t) = (r.Mh(p, t) - r.hDo(p, t)) / K;
            if (t > c.term) continue;
            T expect = b.tau[p] <= t ? T(c.h(p, b.tau[p]) + c.k[p]) : J(p, t);
            worst = std::max(worst, Field<T>::to_double(Field<T>::abs(r.H(p, t) - expect)));
        }
    if (Jout) *Jout = J;
    return worst;
}

#define ENL_INST(T)                                                                                       \
    template Claim<T> make_claim(const Bundle<T>&, const Process<T>*, const std::vector<T>*, int);        \
    template Process<T> claim_martingale(const Bundle<T>&, const Claim<T>&);                              \
    template OptionalRepresentation<T> represent_claim(const Bundle<T>&, const Claim<T>&);                \
    template OptionalRepresentation<T> represent_optional_payoff(const Bundle<T>&, const Process<T>&);    \
    template OptionalRepresentation<T> represent_g_martingale(const Bundle<T>&, const Process<T>&);       \
    template double orthogonality_defect(const Bundle<T>&, const OptionalRepresentation<T>&);             \
    template std::vector<Witness<T>> indicator_basis(const Space<T>&);                                    \
    template PurityVerdict<T> classify_pure_mortality(const Bundle<T>&, const Process<T>&);               \
    template NbarReport nbar_report(const Bundle<T>&);                                                    \
    template JeulinClass jeulin_class_check(const Bundle<T>&, const std::vector<T>&);                     \
    template bool orthogonal_to_first_type(const Bundle<T>&, const std::vector<T>&, int*);                \
    template double jh_crosscheck(const Bundle<T>&, const Claim<T>&, Process<T>*);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
