#include "enl/space.hpp"

#include <algorithm>
#include <map>

namespace enl {

Filtration Filtration::from_labels(int n_paths, int horizon, const std::vector<std::vector<int>>& labels) {
    if (n_paths <= 0) throw Error(ErrorCode::InvalidArgument, "no paths");
    if (horizon < 0) throw Error(ErrorCode::TimeOutOfRange, "negative horizon");
    if (static_cast<int>(labels.size()) != horizon + 1)
        throw Error(ErrorCode::InvalidArgument, "need one partition per time 0..horizon");
    Filtration f;
    f.n_ = n_paths;
    f.h_ = horizon;
    f.atom_of_.assign(horizon + 1, std::vector<int>(n_paths, -1));
    f.atoms_.resize(horizon + 1);
    for (int t = 0; t <= horizon; ++t) {
        if (static_cast<int>(labels[t].size()) != n_paths)
            throw Error(ErrorCode::InvalidArgument, "label vector has wrong length at t=" + std::to_string(t));
        std::map<int, int> ids;
        for (int p = 0; p < n_paths; ++p) {
            auto [it, fresh] = ids.emplace(labels[t][p], static_cast<int>(ids.size()));
            if (fresh) f.atoms_[t].emplace_back();
            f.atom_of_[t][p] = it->second;
            f.atoms_[t][it->second].push_back(p);
        }
    }
    for (int t = 1; t <= horizon; ++t)
        for (const auto& a : f.atoms_[t]) {
            int par = f.atom_of_[t - 1][a.front()];
            for (int p : a)
                if (f.atom_of_[t - 1][p] != par)
                    throw Error(ErrorCode::NonRefiningFiltration,
                                "atom at t=" + std::to_string(t) + " straddles atoms at t=" + std::to_string(t - 1));
        }
    return f;
}

Filtration Filtration::from_partitions(int n_paths, int horizon,
                                       const std::vector<std::vector<std::vector<int>>>& parts) {
    if (static_cast<int>(parts.size()) != horizon + 1)
        throw Error(ErrorCode::InvalidArgument, "need one partition per time 0..horizon");
    std::vector<std::vector<int>> labels(horizon + 1, std::vector<int>(n_paths, -1));
    for (int t = 0; t <= horizon; ++t) {
        for (size_t a = 0; a < parts[t].size(); ++a)
            for (int p : parts[t][a]) {
                if (p < 0 || p >= n_paths)
                    throw Error(ErrorCode::InvalidArgument, "path index out of range at t=" + std::to_string(t));
                if (labels[t][p] != -1)
                    throw Error(ErrorCode::InvalidArgument, "path listed twice at t=" + std::to_string(t));
                labels[t][p] = static_cast<int>(a);
            }
        for (int p = 0; p < n_paths; ++p)
            if (labels[t][p] == -1)
                throw Error(ErrorCode::InvalidArgument, "path " + std::to_string(p) + " missing at t=" + std::to_string(t));
    }
    return from_labels(n_paths, horizon, labels);
}

bool Filtration::branches(int t, int a) const {
    if (t == 0) return atoms_[0].size() > 1;
    return atoms_[t][a].size() < atoms_[t - 1][parent(t, a)].size();
}

bool Filtration::refines(const Filtration& c) const {
    if (c.n_ != n_ || c.h_ != h_) return false;
    for (int t = 0; t <= h_; ++t)
        for (const auto& a : atoms_[t])
            for (int p : a)
                if (c.atom(t, p) != c.atom(t, a.front())) return false;
    return true;
}

template <class T>
Space<T> build_space(const std::vector<T>& weights, const std::vector<std::vector<std::vector<int>>>& partitions,
                     int horizon, double tol) {
    Space<T> s;
    s.F = Filtration::from_partitions(static_cast<int>(weights.size()), horizon, partitions);
    T total(0);
    for (const auto& w : weights) {
        if (!Field<T>::positive(w, 0.0)) throw Error(ErrorCode::BadWeights, "weights must be strictly positive");
        total += w;
    }
    if (!Field<T>::is_zero(total - T(1), tol)) throw Error(ErrorCode::BadWeights, "weights must sum to 1");
    s.weights = weights;
    s.tol = tol;
    return s;
}

template <class T>
Process<T>& Process<T>::operator+=(const Process& o) {
    for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    if (klass != o.klass) klass = Klass::Raw;
    return *this;
}

template <class T>
Process<T>& Process<T>::operator-=(const Process& o) {
    for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    if (klass != o.klass) klass = Klass::Raw;
    return *this;
}

template <class T>
Process<T>& Process<T>::operator*=(const T& c) {
    for (auto& x : v) x *= c;
    return *this;
}

template <class T>
Process<T> mul(const Process<T>& a, const Process<T>& b) {
    Process<T> r(a.n, a.h);
    for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i] * b.v[i];
    return r;
}

template <class T>
Process<T> constant_process(int n, int h, const std::vector<T>& c) {
    Process<T> r(n, h, Klass::Raw);
    for (int p = 0; p < n; ++p)
        for (int t = 0; t <= h; ++t) r(p, t) = c[p];
    return r;
}

template <class T>
std::vector<T> cond_expect(const std::vector<T>& w, const Filtration& f, const std::vector<T>& X, int t) {
    if (t > f.horizon()) throw Error(ErrorCode::TimeOutOfRange, "t=" + std::to_string(t) + " beyond horizon");
    std::vector<T> out(X.size());
    for (const auto& a : f.partition(t < 0 ? 0 : t)) {
        T num(0), den(0);
        for (int p : a) {
            num += w[p] * X[p];
            den += w[p];
        }
        T val = num / den;
        for (int p : a) out[p] = val;
    }
    return out;
}

template <class T>
std::vector<T> cond_expect(const Space<T>& s, const std::vector<T>& X, int t) {
    return cond_expect(s.weights, s.F, X, t);
}

template <class T>
Process<T> martingale_closure(const std::vector<T>& w, const Filtration& f, const std::vector<T>& X) {
    Process<T> m(f.n_paths(), f.horizon(), Klass::Adapted);
    for (int t = 0; t <= f.horizon(); ++t) {
        auto c = cond_expect(w, f, X, t);
        for (int p = 0; p < f.n_paths(); ++p) m(p, t) = c[p];
    }
    return m;
}

template <class T>
T expectation(const std::vector<T>& w, const std::vector<T>& X) {
    T s(0);
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * X[i];
    return s;
}

template <class T>
std::vector<T> column(const Process<T>& X, int t) {
    std::vector<T> c(X.n);
    for (int p = 0; p < X.n; ++p) c[p] = X(p, t);
    return c;
}

template <class T>
static bool constant_on(const Filtration& f, int ft, const Process<T>& X, int t, double tol) {
    for (const auto& a : f.partition(ft < 0 ? 0 : ft))
        for (int p : a)
            if (!Field<T>::is_zero(X(p, t) - X(a.front(), t), tol)) return false;
    return true;
}

template <class T>
bool is_adapted(const Filtration& f, const Process<T>& X, double tol) {
    for (int t = 0; t <= X.h; ++t)
        if (!constant_on(f, t, X, t, tol)) return false;
    return true;
}

template <class T>
bool is_predictable(const Filtration& f, const Process<T>& X, double tol) {
    for (int t = 0; t <= X.h; ++t)
        if (!constant_on(f, t - 1, X, t, tol)) return false;
    return true;
}

template <class T>
Process<T> integrate(const Filtration& f, const Process<T>& H, const Process<T>& X, double tol, bool check) {
    if (H.n != X.n || H.h != X.h) throw Error(ErrorCode::InvalidArgument, "shape mismatch in integrate");
    if (check && !is_predictable(f, H, tol))
        throw Error(ErrorCode::MeasurabilityError, "integrand is not predictable");
    Process<T> r(X.n, X.h, Klass::Adapted);
    for (int p = 0; p < X.n; ++p)
        for (int t = 1; t <= X.h; ++t) r(p, t) = r(p, t - 1) + H(p, t) * X.inc(p, t);
    return r;
}

template <class T>
Process<T> integrate(const Space<T>& s, const Process<T>& H, const Process<T>& X) {
    return integrate(s.F, H, X, s.tol, true);
}

template <class T>
Process<T> bracket(const Process<T>& X, const Process<T>& Y) {
    Process<T> r(X.n, X.h, Klass::Adapted);
    for (int p = 0; p < X.n; ++p)
        for (int t = 1; t <= X.h; ++t) r(p, t) = r(p, t - 1) + X.inc(p, t) * Y.inc(p, t);
    return r;
}

template <class T>
Process<T> predictable_bracket(const std::vector<T>& w, const Filtration& f, const Process<T>& X,
                               const Process<T>& Y) {
    Process<T> r(X.n, X.h, Klass::Predictable);
    std::vector<T> d(X.n);
    for (int t = 1; t <= X.h; ++t) {
        for (int p = 0; p < X.n; ++p) d[p] = X.inc(p, t) * Y.inc(p, t);
        auto c = cond_expect(w, f, d, t - 1);
        for (int p = 0; p < X.n; ++p) r(p, t) = r(p, t - 1) + c[p];
    }
    return r;
}

template <class T>
Process<T> predictable_bracket(const Space<T>& s, const Process<T>& X, const Process<T>& Y) {
    return predictable_bracket(s.weights, s.F, X, Y);
}

template <class T>
MartingaleReport is_martingale(const std::vector<T>& w, const Filtration& f, const Process<T>& X, double tol) {
    MartingaleReport rep;
    rep.adapted = is_adapted(f, X, tol);
    std::vector<T> d(X.n);
    for (int t = 1; t <= X.h; ++t) {
        for (int p = 0; p < X.n; ++p) d[p] = X.inc(p, t);
        auto c = cond_expect(w, f, d, t - 1);
        for (int p = 0; p < X.n; ++p) {
            double v = Field<T>::to_double(Field<T>::abs(c[p]));
            bool zero = Field<T>::is_zero(c[p], tol);
            if (!zero) rep.pass = false;
            if (v > rep.max_violation || (!zero && rep.time < 0)) {
                rep.max_violation = std::max(rep.max_violation, v);
                rep.path = p;
                rep.time = t;
            }
        }
    }
    if (!rep.adapted) rep.pass = false;
    return rep;
}

template <class T>
MartingaleReport is_martingale(const Space<T>& s, const Process<T>& X) {
    return is_martingale(s.weights, s.F, X, s.tol);
}

template <class T>
Process<T> stop(const Process<T>& X, const RandomTime& sigma) {
    Process<T> r(X.n, X.h, X.klass);
    for (int p = 0; p < X.n; ++p)
        for (int t = 0; t <= X.h; ++t) r(p, t) = X(p, std::min(t, sigma[p]));
    return r;
}

template <class T>
double max_abs_diff(const Process<T>& a, const Process<T>& b) {
    double m = 0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, Field<T>::to_double(Field<T>::abs(a.v[i] - b.v[i])));
    return m;
}

template <class T>
bool all_zero(const Process<T>& a, double tol) {
    for (const auto& x : a.v)
        if (!Field<T>::is_zero(x, tol)) return false;
    return true;
}

template <class T>
bool equal(const Process<T>& a, const Process<T>& b, double tol) {
    if (a.n != b.n || a.h != b.h) return false;
    for (size_t i = 0; i < a.v.size(); ++i)
        if (!Field<T>::is_zero(a.v[i] - b.v[i], tol)) return false;
    return true;
}

#define ENL_INST(T)                                                                                              \
    template struct Process<T>;                                                                                  \
    template Space<T> build_space(const std::vector<T>&, const std::vector<std::vector<std::vector<int>>>&, int, \
                                  double);                                                                       \
    template Process<T> mul(const Process<T>&, const Process<T>&);                                               \
    template Process<T> constant_process(int, int, const std::vector<T>&);                                       \
    template std::vector<T> cond_expect(const std::vector<T>&, const Filtration&, const std::vector<T>&, int);   \
    template std::vector<T> cond_expect(const Space<T>&, const std::vector<T>&, int);                            \
    template Process<T> martingale_closure(const std::vector<T>&, const Filtration&, const std::vector<T>&);     \
    template T expectation(const std::vector<T>&, const std::vector<T>&);                                        \
    template std::vector<T> column(const Process<T>&, int);                                                      \
    template bool is_adapted(const Filtration&, const Process<T>&, double);                                      \
    template bool is_predictable(const Filtration&, const Process<T>&, double);                                  \
    template Process<T> integrate(const Filtration&, const Process<T>&, const Process<T>&, double, bool);        \
    template Process<T> integrate(const Space<T>&, const Process<T>&, const Process<T>&);                        \
    template Process<T> bracket(const Process<T>&, const Process<T>&);                                           \
    template Process<T> predictable_bracket(const std::vector<T>&, const Filtration&, const Process<T>&,         \
                                            const Process<T>&);                                                  \
    template Process<T> predictable_bracket(const Space<T>&, const Process<T>&, const Process<T>&);              \
    template MartingaleReport is_martingale(const std::vector<T>&, const Filtration&, const Process<T>&, double); \
    template MartingaleReport is_martingale(const Space<T>&, const Process<T>&);                                 \
    template Process<T> stop(const Process<T>&, const RandomTime&);                                              \
    template double max_abs_diff(const Process<T>&, const Process<T>&);                                          \
    template bool all_zero(const Process<T>&, double);                                                           \
    template bool equal(const Process<T>&, const Process<T>&, double);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
