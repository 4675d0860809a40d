#include "enl/enlargement.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

namespace enl {

Filtration progressive_enlargement(const Filtration& F, const RandomTime& tau, const std::vector<int>& marks) {
    const int n = F.n_paths(), h = F.horizon();
    std::vector<std::vector<int>> labels(h + 1, std::vector<int>(n));
    for (int t = 0; t <= h; ++t) {
        std::map<std::tuple<int, int, int>, int> ids;
        for (int p = 0; p < n; ++p) {
            bool dead = tau[p] <= t;
            auto key = std::make_tuple(F.atom(t, p), dead ? tau[p] : -1, dead && !marks.empty() ? marks[p] : 0);
            labels[t][p] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
        }
    }
    return Filtration::from_labels(n, h, labels);
}

template <class T>
Bundle<T> enlarge(const Space<T>& space, const RandomTime& tau, const std::vector<int>& marks) {
    const int n = space.n_paths(), h = space.horizon();
    const double tol = space.tol;
    if (static_cast<int>(tau.size()) != n) throw Error(ErrorCode::InvalidArgument, "tau has wrong length");
    if (!marks.empty() && static_cast<int>(marks.size()) != n)
        throw Error(ErrorCode::InvalidArgument, "marks have wrong length");
    for (int v : tau)
        if (v != INF && (v < 1 || v > h))
            throw Error(ErrorCode::InvalidArgument, "tau values must lie in 1..horizon or be INF");

    Bundle<T> b;
    b.space = space;
    b.tau = tau;
    b.marks = marks.empty() ? std::vector<int>(n, 0) : marks;
    b.gfil = progressive_enlargement(space.F, tau, b.marks);

    b.D = Process<T>(n, h, Klass::Adapted);
    b.G = Process<T>(n, h, Klass::Adapted);
    b.Gt = Process<T>(n, h, Klass::Adapted);
    std::vector<T> alive(n), alive_eq(n);
    for (int t = 0; t <= h; ++t) {
        for (int p = 0; p < n; ++p) {
            alive[p] = tau[p] > t ? T(1) : T(0);
            alive_eq[p] = tau[p] >= t ? T(1) : T(0);
            b.D(p, t) = T(1) - alive[p];
        }
        auto g = cond_expect(space, alive, t);
        auto gt = cond_expect(space, alive_eq, t);
        for (int p = 0; p < n; ++p) {
            b.G(p, t) = g[p];
            b.Gt(p, t) = gt[p];
        }
    }
    b.Do = from_increments<T>(n, h, [&](int p, int t) -> T { return b.Gt(p, t) - b.G(p, t); });
    b.Dp = dual_projection(space.weights, space.F, b.D, ProjKind::Predictable, tol);
    b.m = b.G + b.Do;
    b.m.klass = Klass::Adapted;
    b.NG = n_martingale(b);
    b.NGbar = nbar_martingale(b);

    b.R.assign(n, INF);
    b.Rt.assign(n, INF);
    for (int p = 0; p < n; ++p) {
        for (int t = 0; t <= h; ++t)
            if (Field<T>::is_zero(b.G(p, t), tol)) {
                b.R[p] = t;
                break;
            }
        int r = b.R[p];
        if (r != INF && r >= 1 && Field<T>::is_zero(b.Gt(p, r), tol) && Field<T>::positive(b.G(p, r - 1), tol))
            b.Rt[p] = r;
    }
    return b;
}

template <class T>
Process<T> n_martingale(const Bundle<T>& b) {
    return from_increments<T>(b.n(), b.h(), [&](int p, int t) {
        T d = b.D.inc(p, t);
        if (b.alive_at(p, t)) d -= safe_div(T(b.Do.inc(p, t)), b.Gt(p, t), b.tol());
        return d;
    });
}

template <class T>
Process<T> nbar_martingale(const Bundle<T>& b) {
    return from_increments<T>(b.n(), b.h(), [&](int p, int t) {
        T d = b.D.inc(p, t);
        if (b.alive_at(p, t)) d -= safe_div(T(b.Dp.inc(p, t)), b.G(p, t - 1), b.tol());
        return d;
    });
}

template <class T>
Process<T> hat_transform(const Bundle<T>& b, const Process<T>& M, bool check) {
    if (check && !is_martingale(b.space, M).pass)
        throw Error(ErrorCode::NotMartingale, "hat transform needs an F-martingale");
    const int n = b.n(), h = b.h();
    Process<T> r(n, h, Klass::Adapted);
    std::vector<T> at_rt(n);
    for (int p = 0; p < n; ++p) r(p, 0) = M(p, 0);
    for (int t = 1; t <= h; ++t) {
        for (int p = 0; p < n; ++p) at_rt[p] = b.Rt[p] == t ? T(M.inc(p, t)) : T(0);
        auto q = cond_expect(b.space, at_rt, t - 1);
        for (int p = 0; p < n; ++p) {
            T d(0);
            if (b.alive_at(p, t)) {
                T dm = M.inc(p, t);
                d = dm - safe_div(T(dm * b.m.inc(p, t)), b.Gt(p, t), b.tol()) + q[p];
            }
            r(p, t) = r(p, t - 1) + d;
        }
    }
    return r;
}

template <class T>
Process<T> bar_transform(const Bundle<T>& b, const Process<T>& M, bool check) {
    if (check && !is_martingale(b.space, M).pass)
        throw Error(ErrorCode::NotMartingale, "bar transform needs an F-martingale");
    const int n = b.n(), h = b.h();
    Process<T> r(n, h, Klass::Adapted);
    std::vector<T> prod(n);
    for (int p = 0; p < n; ++p) r(p, 0) = M(p, 0);
    for (int t = 1; t <= h; ++t) {
        for (int p = 0; p < n; ++p) prod[p] = M.inc(p, t) * b.m.inc(p, t);
        auto c = cond_expect(b.space, prod, t - 1);
        for (int p = 0; p < n; ++p) {
            T d(0);
            if (b.alive_at(p, t)) d = M.inc(p, t) - safe_div(c[p], b.G(p, t - 1), b.tol());
            r(p, t) = r(p, t - 1) + d;
        }
    }
    return r;
}

template <class T>
Process<T> mu_cond_expect(const Space<T>& space, const RandomTime& tau, const std::vector<T>& X, ProjKind kind) {
    const int n = space.n_paths(), h = space.horizon();
    Process<T> r(n, h, kind == ProjKind::Optional ? Klass::Adapted : Klass::Predictable);
    for (int t = 0; t <= h; ++t) {
        int ft = kind == ProjKind::Optional ? t : t - 1;
        for (int a = 0; a < space.F.n_atoms(ft); ++a) {
            const auto& mem = space.F.members(ft, a);
            T num(0), den(0);
            for (int p : mem)
                if (tau[p] == t) {
                    num += space.weights[p] * X[p];
                    den += space.weights[p];
                }
            if (Field<T>::is_zero(den, 0.0)) continue;
            T val = num / den;
            for (int p : mem) r(p, t) = val;
        }
    }
    return r;
}

template <class T>
TauSigmaField sigma_field_at_tau(const Bundle<T>& b, TauField klass) {
    TauSigmaField s;
    s.klass = klass;
    for (int t = 0; t <= b.h(); ++t) {
        const Filtration& f = klass == TauField::G_tau ? b.gfil : b.space.F;
        int ft = klass == TauField::F_tau_minus ? t - 1 : t;
        for (int a = 0; a < f.n_atoms(ft); ++a) {
            std::vector<int> cell;
            for (int p : f.members(ft, a))
                if (b.tau[p] == t) cell.push_back(p);
            if (!cell.empty()) s.cells.push_back(std::move(cell));
        }
    }
    return s;
}

template <class T>
std::vector<T> cond_expect_at_tau(const Bundle<T>& b, const std::vector<T>& Y, TauField klass) {
    std::vector<T> out(b.n(), T(0));
    for (const auto& cell : sigma_field_at_tau(b, klass).cells) {
        T num(0), den(0);
        for (int p : cell) {
            num += b.w()[p] * Y[p];
            den += b.w()[p];
        }
        T val = num / den;
        for (int p : cell) out[p] = val;
    }
    return out;
}

template <class T>
Process<T> g_compensator(const Bundle<T>& b, const Process<T>& U) {
    const int n = b.n(), h = b.h();
    Process<T> r(n, h, Klass::Predictable);
    std::vector<T> x(n);
    for (int t = 1; t <= h; ++t) {
        for (int p = 0; p < n; ++p) x[p] = b.Gt(p, t) * U.inc(p, t);
        auto c = cond_expect(b.space, x, t - 1);
        for (int p = 0; p < n; ++p)
            r(p, t) = r(p, t - 1) + (b.alive_at(p, t) ? safe_div(c[p], b.G(p, t - 1), b.tol()) : T(0));
    }
    return r;
}

template <class T>
Process<T> g_compensator_direct(const Bundle<T>& b, const Process<T>& U) {
    return dual_projection(b.w(), b.gfil, stop(U, b.tau), ProjKind::Predictable, b.tol());
}

template <class T>
static std::string render(const T& x, int precision) {
    if (precision < 0) return Field<T>::str(x);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, Field<T>::to_double(x));
    return buf;
}

template <class T>
std::string export_bundle_csv(const Bundle<T>& b, int precision) {
    std::ostringstream os;
    os << "path,time,G,Gtilde,m,dNG,dNGbar\n";
    for (int p = 0; p < b.n(); ++p)
        for (int t = 0; t <= b.h(); ++t)
            os << p << ',' << t << ',' << render(b.G(p, t), precision) << ',' << render(b.Gt(p, t), precision) << ','
               << render(b.m(p, t), precision) << ',' << render(T(b.NG.inc(p, t)), precision) << ','
               << render(T(b.NGbar.inc(p, t)), precision) << '\n';
    return os.str();
}

template <class T>
Process<T> stop_at(const Process<T>& X, const RandomTime& tau, int t_max) {
    Process<T> r(X.n, X.h, X.klass);
    for (int p = 0; p < X.n; ++p)
        for (int t = 0; t <= X.h; ++t) r(p, t) = X(p, std::min({t, tau[p], t_max}));
    return r;
}

#define ENL_INST(T)                                                                                            \
    template Bundle<T> enlarge(const Space<T>&, const RandomTime&, const std::vector<int>&);                  \
    template Process<T> n_martingale(const Bundle<T>&);                                                        \
    template Process<T> nbar_martingale(const Bundle<T>&);                                                     \
    template Process<T> hat_transform(const Bundle<T>&, const Process<T>&, bool);                              \
    template Process<T> bar_transform(const Bundle<T>&, const Process<T>&, bool);                              \
    template Process<T> mu_cond_expect(const Space<T>&, const RandomTime&, const std::vector<T>&, ProjKind);   \
    template TauSigmaField sigma_field_at_tau(const Bundle<T>&, TauField);                                     \
    template std::vector<T> cond_expect_at_tau(const Bundle<T>&, const std::vector<T>&, TauField);             \
    template Process<T> g_compensator(const Bundle<T>&, const Process<T>&);                                    \
    template Process<T> g_compensator_direct(const Bundle<T>&, const Process<T>&);                             \
    template std::string export_bundle_csv(const Bundle<T>&, int);                                             \
    template Process<T> stop_at(const Process<T>&, const RandomTime&, int);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
