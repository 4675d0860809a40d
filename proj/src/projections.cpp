#include "enl/projections.hpp"

#include <algorithm>

namespace enl {

template <class T>
Process<T> projection(const std::vector<T>& w, const Filtration& f, const Process<T>& X, ProjKind kind) {
    Process<T> r(X.n, X.h, kind == ProjKind::Optional ? Klass::Adapted : Klass::Predictable);
    for (int t = 0; t <= X.h; ++t) {
        auto c = cond_expect(w, f, column(X, t), kind == ProjKind::Optional ? t : t - 1);
        for (int p = 0; p < X.n; ++p) r(p, t) = c[p];
    }
    return r;
}

template <class T>
Process<T> dual_projection(const std::vector<T>& w, const Filtration& f, const Process<T>& V, ProjKind kind,
                           double tol) {
    for (int p = 0; p < V.n; ++p)
        if (!Field<T>::is_zero(V(p, 0), tol)) throw Error(ErrorCode::DomainError, "dual projection needs V_0 = 0");
    Process<T> r(V.n, V.h, Klass::Adapted);
    std::vector<T> d(V.n);
    for (int t = 1; t <= V.h; ++t) {
        for (int p = 0; p < V.n; ++p) d[p] = V.inc(p, t);
        auto c = cond_expect(w, f, d, kind == ProjKind::Optional ? t : t - 1);
        for (int p = 0; p < V.n; ++p) r(p, t) = r(p, t - 1) + c[p];
    }
    return r;
}

template <class T>
Process<T> dual_rn_derivative(const std::vector<T>& w, const Filtration& f, const Process<T>& phi,
                              const Process<T>& V, double tol) {
    for (const auto& x : phi.v)
        if ((x < T(0) && !Field<T>::is_zero(x, tol)) || (x > T(1) && !Field<T>::is_zero(x - T(1), tol))) throw Error(ErrorCode::DomainError, "phi outside [0,1]");
    Process<T> psi(V.n, V.h, Klass::Predictable);
    std::vector<T> num(V.n), den(V.n);
    for (int p = 0; p < V.n; ++p) psi(p, 0) = T(1);
    for (int t = 1; t <= V.h; ++t) {
        for (int p = 0; p < V.n; ++p) {
            den[p] = V.inc(p, t);
            num[p] = phi(p, t) * den[p];
        }
        auto a = cond_expect(w, f, num, t - 1);
        auto b = cond_expect(w, f, den, t - 1);
        for (int p = 0; p < V.n; ++p) psi(p, t) = Field<T>::is_zero(b[p], tol) ? T(1) : T(a[p] / b[p]);
    }
    return psi;
}

template <class T>
std::vector<T> solve_min_norm(std::vector<T> A, std::vector<T> b, int d, double tol, int* rank) {
    // Reduced row echelon form on [A | b].
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int piv = -1;
        double best = 0;
        for (int r = row; r < d; ++r) {
            double v = Field<T>::to_double(Field<T>::abs(A[r * d + col]));
            if (!Field<T>::is_zero(A[r * d + col], tol) && (piv < 0 || v > best)) {
                piv = r;
                best = v;
            }
        }
        if (piv < 0) continue;
        for (int c = 0; c < d; ++c) std::swap(A[row * d + c], A[piv * d + c]);
        std::swap(b[row], b[piv]);
        T inv = T(1) / A[row * d + col];
        for (int c = 0; c < d; ++c) A[row * d + c] *= inv;
        b[row] *= inv;
        for (int r = 0; r < d; ++r) {
            if (r == row || Field<T>::is_zero(A[r * d + col], 0.0)) continue;
            T fct = A[r * d + col];
            for (int c = 0; c < d; ++c) A[r * d + c] -= fct * A[row * d + c];
            b[r] -= fct * b[row];
        }
        pivots.push_back(col);
        ++row;
    }
    int rk = static_cast<int>(pivots.size());
    if (rank) *rank = rk;
    std::vector<T> x(d, T(0));
    for (int i = 0; i < rk; ++i) x[pivots[i]] = b[i];
    if (rk == d) return x;
    // Null space basis: one vector per free column.
    std::vector<int> is_pivot(d, -1);
    for (int i = 0; i < rk; ++i) is_pivot[pivots[i]] = i;
    std::vector<std::vector<T>> N;
    for (int fc = 0; fc < d; ++fc) {
        if (is_pivot[fc] >= 0) continue;
        std::vector<T> v(d, T(0));
        v[fc] = T(1);
        for (int i = 0; i < rk; ++i) v[pivots[i]] = -A[i * d + fc];
        N.push_back(std::move(v));
    }
    // Remove the null-space component: solve (N'N) c = N'x, x -= N c.
    int k = static_cast<int>(N.size());
    std::vector<T> g(k * k), r(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            T s(0);
            for (int c = 0; c < d; ++c) s += N[i][c] * N[j][c];
            g[i * k + j] = s;
        }
        T s(0);
        for (int c = 0; c < d; ++c) s += N[i][c] * x[c];
        r[i] = s;
    }
    // N has full column rank, so plain elimination suffices.
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < k; ++rr)
            if (Field<T>::to_double(Field<T>::abs(g[rr * k + col])) > Field<T>::to_double(Field<T>::abs(g[piv * k + col])))
                piv = rr;
        for (int c = 0; c < k; ++c) std::swap(g[col * k + c], g[piv * k + c]);
        std::swap(r[col], r[piv]);
        for (int rr = 0; rr < k; ++rr) {
            if (rr == col) continue;
            T fct = g[rr * k + col] / g[col * k + col];
            for (int c = 0; c < k; ++c) g[rr * k + c] -= fct * g[col * k + c];
            r[rr] -= fct * r[col];
        }
    }
    for (int i = 0; i < k; ++i) {
        T ci = r[i] / g[i * k + i];
        for (int c = 0; c < d; ++c) x[c] -= ci * N[i][c];
    }
    return x;
}

template <class T>
GkwResult<T> gkw(const std::vector<T>& w, const Filtration& f, const Process<T>& M,
                 const std::vector<Process<T>>& S, double tol, bool check_inputs) {
    if (check_inputs) {
        if (!is_martingale(w, f, M, tol).pass) throw Error(ErrorCode::NotMartingale, "gkw target is not a martingale");
        for (const auto& s : S)
            if (!is_martingale(w, f, s, tol).pass) throw Error(ErrorCode::NotMartingale, "gkw asset is not a martingale");
    }
    const int d = static_cast<int>(S.size());
    const int n = M.n, h = M.h;
    GkwResult<T> res;
    res.theta.assign(d, Process<T>(n, h, Klass::Predictable));
    for (int t = 1; t <= h; ++t) {
        for (int a = 0; a < f.n_atoms(t - 1); ++a) {
            const auto& mem = f.members(t - 1, a);
            std::vector<T> A(d * d, T(0)), b(d, T(0));
            T mass(0);
            for (int p : mem) {
                mass += w[p];
                T dm = M.inc(p, t);
                for (int i = 0; i < d; ++i) {
                    T si = S[i].inc(p, t);
                    b[i] += w[p] * si * dm;
                    for (int j = 0; j < d; ++j) A[i * d + j] += w[p] * si * S[j].inc(p, t);
                }
            }
            for (auto& x : A) x /= mass;
            for (auto& x : b) x /= mass;
            int rk = 0;
            auto th = solve_min_norm(A, b, d, tol, &rk);
            res.diagnostics.push_back({t, a, rk, d});
            if (rk < d) ++res.rank_deficient;
            for (int p : mem)
                for (int i = 0; i < d; ++i) res.theta[i](p, t) = th[i];
        }
    }
    res.residual = Process<T>(n, h, Klass::Adapted);
    for (int p = 0; p < n; ++p)
        for (int t = 1; t <= h; ++t) {
            T dl = M.inc(p, t);
            for (int i = 0; i < d; ++i) dl -= res.theta[i](p, t) * S[i].inc(p, t);
            res.residual(p, t) = res.residual(p, t - 1) + dl;
        }
    return res;
}

template <class T>
Process<T> bracket_ratio(const std::vector<T>& w, const Filtration& f, const Process<T>& X, const Process<T>& Y,
                         double tol) {
    Process<T> r(X.n, X.h, Klass::Predictable);
    std::vector<T> xy(X.n), yy(X.n);
    for (int t = 1; t <= X.h; ++t) {
        for (int p = 0; p < X.n; ++p) {
            xy[p] = X.inc(p, t) * Y.inc(p, t);
            yy[p] = Y.inc(p, t) * Y.inc(p, t);
        }
        auto a = cond_expect(w, f, xy, t - 1);
        auto b = cond_expect(w, f, yy, t - 1);
        for (int p = 0; p < X.n; ++p) r(p, t) = safe_div(a[p], b[p], tol);
    }
    return r;
}

#define ENL_INST(T)                                                                                           \
    template Process<T> projection(const std::vector<T>&, const Filtration&, const Process<T>&, ProjKind);     \
    template Process<T> dual_projection(const std::vector<T>&, const Filtration&, const Process<T>&, ProjKind, \
                                        double);                                                              \
    template Process<T> dual_rn_derivative(const std::vector<T>&, const Filtration&, const Process<T>&,       \
                                           const Process<T>&, double);                                        \
    template std::vector<T> solve_min_norm(std::vector<T>, std::vector<T>, int, double, int*);                \
    template GkwResult<T> gkw(const std::vector<T>&, const Filtration&, const Process<T>&,                    \
                              const std::vector<Process<T>>&, double, bool);                                  \
    template Process<T> bracket_ratio(const std::vector<T>&, const Filtration&, const Process<T>&,            \
                                      const Process<T>&, double);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
