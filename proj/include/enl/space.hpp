#pragma once

#include <memory>
#include <string>
#include <vector>

#include "enl/field.hpp"

namespace enl {

inline constexpr int INF = std::numeric_limits<int>::max();

// Per-path random time with values in {0..horizon} or INF.
using RandomTime = std::vector<int>;

enum class Klass { Raw, Adapted, Predictable };
enum class ProjKind { Optional, Predictable };

// A refining sequence of partitions of {0..n_paths-1}, one per time 0..horizon.
class Filtration {
public:
    Filtration() = default;
    // labels[t][path] = atom label at time t (arbitrary ints, renumbered internally)
    static Filtration from_labels(int n_paths, int horizon, const std::vector<std::vector<int>>& labels);
    static Filtration from_partitions(int n_paths, int horizon,
                                      const std::vector<std::vector<std::vector<int>>>& parts);

    int n_paths() const { return n_; }
    int horizon() const { return h_; }
    // t = -1 maps to t = 0
    int atom(int t, int path) const { return atom_of_[t < 0 ? 0 : t][path]; }
    int n_atoms(int t) const { return static_cast<int>(atoms_[t < 0 ? 0 : t].size()); }
    const std::vector<int>& members(int t, int a) const { return atoms_[t < 0 ? 0 : t][a]; }
    const std::vector<std::vector<int>>& partition(int t) const { return atoms_[t]; }
    // parent atom at t-1 of atom a at t (t >= 1)
    int parent(int t, int a) const { return atom(t - 1, atoms_[t][a].front()); }
    // true iff atom a at t is strictly smaller than its parent at t-1
    bool branches(int t, int a) const;
    bool refines(const Filtration& coarser) const;

private:
    int n_ = 0;
    int h_ = 0;
    std::vector<std::vector<int>> atom_of_;
    std::vector<std::vector<std::vector<int>>> atoms_;
};

template <class T>
struct Space {
    std::vector<T> weights;
    Filtration F;
    double tol = 1e-10;

    int n_paths() const { return F.n_paths(); }
    int horizon() const { return F.horizon(); }
};

template <class T>
Space<T> build_space(const std::vector<T>& weights,
                     const std::vector<std::vector<std::vector<int>>>& partitions, int horizon,
                     double tol = 1e-10);

template <class T>
struct Process {
    int n = 0;
    int h = 0;
    std::vector<T> v;
    Klass klass = Klass::Raw;

    Process() = default;
    Process(int n_paths, int horizon, Klass k = Klass::Raw)
        : n(n_paths), h(horizon), v(static_cast<size_t>(n_paths) * (horizon + 1), T(0)), klass(k) {}

    T& operator()(int path, int t) { return v[static_cast<size_t>(path) * (h + 1) + t]; }
    const T& operator()(int path, int t) const { return v[static_cast<size_t>(path) * (h + 1) + t]; }
    // increment X_t - X_{t-1}; zero at t = 0
    T inc(int path, int t) const { return t == 0 ? T(0) : (*this)(path, t) - (*this)(path, t - 1); }
    T prev(int path, int t) const { return t == 0 ? (*this)(path, 0) : (*this)(path, t - 1); }

    Process& operator+=(const Process& o);
    Process& operator-=(const Process& o);
    Process& operator*=(const T& c);
};

template <class T> Process<T> operator+(Process<T> a, const Process<T>& b) { return a += b; }
template <class T> Process<T> operator-(Process<T> a, const Process<T>& b) { return a -= b; }
template <class T> Process<T> operator*(const T& c, Process<T> a) { return a *= c; }

// Pathwise product; the klass of the result is Raw.
template <class T>
Process<T> mul(const Process<T>& a, const Process<T>& b);

// Process with X_t = c(path) for all t.
template <class T>
Process<T> constant_process(int n, int h, const std::vector<T>& c);

// Process built from increments: X_0 = 0, X_t = sum_{s<=t} inc(path, s).
template <class T, class F>
Process<T> from_increments(int n, int h, F&& inc) {
    Process<T> x(n, h, Klass::Adapted);
    for (int p = 0; p < n; ++p)
        for (int t = 1; t <= h; ++t) x(p, t) = x(p, t - 1) + inc(p, t);
    return x;
}

// Weighted atom average of X over the partition at t.
template <class T>
std::vector<T> cond_expect(const std::vector<T>& w, const Filtration& f, const std::vector<T>& X, int t);
template <class T>
std::vector<T> cond_expect(const Space<T>& s, const std::vector<T>& X, int t);

// E[X | F_t] for all t.
template <class T>
Process<T> martingale_closure(const std::vector<T>& w, const Filtration& f, const std::vector<T>& X);

template <class T>
T expectation(const std::vector<T>& w, const std::vector<T>& X);

template <class T>
std::vector<T> column(const Process<T>& X, int t);

template <class T>
bool is_adapted(const Filtration& f, const Process<T>& X, double tol);
template <class T>
bool is_predictable(const Filtration& f, const Process<T>& X, double tol);

// (H.X)_t = sum_{s=1..t} H_s (X_s - X_{s-1}); H must be predictable w.r.t. f unless check is false.
template <class T>
Process<T> integrate(const Filtration& f, const Process<T>& H, const Process<T>& X, double tol, bool check = true);
template <class T>
Process<T> integrate(const Space<T>& s, const Process<T>& H, const Process<T>& X);

template <class T>
Process<T> bracket(const Process<T>& X, const Process<T>& Y);
template <class T>
Process<T> predictable_bracket(const std::vector<T>& w, const Filtration& f, const Process<T>& X,
                               const Process<T>& Y);
template <class T>
Process<T> predictable_bracket(const Space<T>& s, const Process<T>& X, const Process<T>& Y);

struct MartingaleReport {
    bool pass = true;
    bool adapted = true;
    double max_violation = 0.0;
    int path = -1;
    int time = -1;
};

template <class T>
MartingaleReport is_martingale(const std::vector<T>& w, const Filtration& f, const Process<T>& X, double tol);
template <class T>
MartingaleReport is_martingale(const Space<T>& s, const Process<T>& X);

template <class T>
Process<T> stop(const Process<T>& X, const RandomTime& sigma);

// Largest |a - b| over all entries, as a double.
template <class T>
double max_abs_diff(const Process<T>& a, const Process<T>& b);
template <class T>
bool all_zero(const Process<T>& a, double tol);
template <class T>
bool equal(const Process<T>& a, const Process<T>& b, double tol);

}  // namespace enl
