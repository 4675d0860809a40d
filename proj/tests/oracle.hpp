#pragma once
// Brute-force reference computations written directly from definitions over raw
// (weights, labels) data, without the library's conditional-expectation code.

#include <functional>
#include <vector>

#include "enl/field.hpp"
#include "enl/space.hpp"

namespace oracle {

using Q = enl::Rational;

struct RawSpace {
    std::vector<Q> w;
    std::vector<std::vector<int>> label;  // label[t][path]
    int n() const { return static_cast<int>(w.size()); }
    int h() const { return static_cast<int>(label.size()) - 1; }
};

// E[X | atom of path p at time t]
inline Q cond(const RawSpace& s, const std::vector<Q>& X, int t, int p) {
    t = t < 0 ? 0 : t;
    Q num(0), den(0);
    for (int q = 0; q < s.n(); ++q)
        if (s.label[t][q] == s.label[t][p]) {
            num += s.w[q] * X[q];
            den += s.w[q];
        }
    return num / den;
}

inline Q cond_prob(const RawSpace& s, int t, int p, const std::function<bool(int)>& event) {
    std::vector<Q> x(s.n());
    for (int q = 0; q < s.n(); ++q) x[q] = event(q) ? Q(1) : Q(0);
    return cond(s, x, t, p);
}

struct Azema {
    std::vector<std::vector<Q>> G, Gt, m, dNG, NGbar;  // [path][t]
};

// G_t = P(tau > t | F_t), G~_t = P(tau >= t | F_t), m = G + sum (G~ - G),
// dN^G_t = 1{tau = t} - 1{t <= tau} dD^o_t / G~_t, dNbar_t = 1{tau=t} - 1{t<=tau} dD^p_t / G_{t-1}.
inline Azema azema(const RawSpace& s, const std::vector<int>& tau) {
    const int n = s.n(), h = s.h();
    Azema a;
    a.G.assign(n, std::vector<Q>(h + 1));
    a.Gt = a.m = a.dNG = a.NGbar = a.G;
    for (int p = 0; p < n; ++p)
        for (int t = 0; t <= h; ++t) {
            a.G[p][t] = cond_prob(s, t, p, [&](int q) { return tau[q] > t; });
            a.Gt[p][t] = cond_prob(s, t, p, [&](int q) { return tau[q] >= t; });
        }
    for (int p = 0; p < n; ++p) {
        a.m[p][0] = a.G[p][0];
        Q nb(0);
        for (int t = 1; t <= h; ++t) {
            Q ddo = a.Gt[p][t] - a.G[p][t];
            a.m[p][t] = a.m[p][t - 1] + a.G[p][t] + ddo - a.G[p][t - 1];
            Q jump = tau[p] == t ? Q(1) : Q(0);
            bool alive = t <= tau[p];
            a.dNG[p][t] = jump - (alive && sgn(a.Gt[p][t]) != 0 ? ddo / a.Gt[p][t] : Q(0));
            Q ddp = cond_prob(s, t - 1, p, [&](int q) { return tau[q] == t; });
            nb += jump - (alive && sgn(a.G[p][t - 1]) != 0 ? ddp / a.G[p][t - 1] : Q(0));
            a.NGbar[p][t] = nb;
        }
    }
    return a;
}

// Single-asset GKW integrand per F_{t-1}-atom: E[dM dS | F_{t-1}] / E[dS^2 | F_{t-1}], 0/0 = 0.
inline std::vector<std::vector<Q>> gkw_theta(const RawSpace& s, const std::vector<std::vector<Q>>& M,
                                             const std::vector<std::vector<Q>>& S) {
    const int n = s.n(), h = s.h();
    std::vector<std::vector<Q>> th(n, std::vector<Q>(h + 1));
    for (int t = 1; t <= h; ++t) {
        std::vector<Q> ms(n), ss(n);
        for (int p = 0; p < n; ++p) {
            Q ds = S[p][t] - S[p][t - 1];
            ms[p] = (M[p][t] - M[p][t - 1]) * ds;
            ss[p] = ds * ds;
        }
        for (int p = 0; p < n; ++p) {
            Q den = cond(s, ss, t - 1, p);
            th[p][t] = sgn(den) == 0 ? Q(0) : cond(s, ms, t - 1, p) / den;
        }
    }
    return th;
}

inline RawSpace raw(const enl::Space<Q>& sp) {
    RawSpace r;
    r.w = sp.weights;
    r.label.assign(sp.horizon() + 1, std::vector<int>(sp.n_paths()));
    for (int t = 0; t <= sp.horizon(); ++t)
        for (int p = 0; p < sp.n_paths(); ++p) r.label[t][p] = sp.F.atom(t, p);
    return r;
}

inline std::vector<std::vector<Q>> rows(const enl::Process<Q>& X) {
    std::vector<std::vector<Q>> r(X.n, std::vector<Q>(X.h + 1));
    for (int p = 0; p < X.n; ++p)
        for (int t = 0; t <= X.h; ++t) r[p][t] = X(p, t);
    return r;
}

}  // namespace oracle
