#pragma once

#include <string>
#include <vector>

#include "enl/projections.hpp"
#include "enl/space.hpp"

namespace enl {

enum class TauField { F_tau_minus, F_tau, G_tau };

// Everything derived from the pair (F, tau). Marks are revealed together with tau and
// split the G-atoms on {tau <= t}; all-zero marks give the plain progressive enlargement.
template <class T>
struct Bundle {
    Space<T> space;
    RandomTime tau;
    std::vector<int> marks;
    Process<T> D, G, Gt, m, Do, Dp, NG, NGbar;
    RandomTime R, Rt;
    Filtration gfil;

    int n() const { return space.n_paths(); }
    int h() const { return space.horizon(); }
    double tol() const { return space.tol; }
    const std::vector<T>& w() const { return space.weights; }
    bool alive_at(int path, int t) const { return t <= tau[path]; }  // t <= tau
    T Gprev(int path, int t) const { return t == 0 ? T(1) : G(path, t - 1); }
};

template <class T>
Bundle<T> enlarge(const Space<T>& space, const RandomTime& tau, const std::vector<int>& marks = {});

// G_t-atoms refine F_t by {tau = 1}, ..., {tau = t}, {tau > t} and by the mark on {tau <= t}.
Filtration progressive_enlargement(const Filtration& F, const RandomTime& tau, const std::vector<int>& marks);

template <class T>
Process<T> n_martingale(const Bundle<T>& b);
template <class T>
Process<T> nbar_martingale(const Bundle<T>& b);

// M^ with dM^_t = 1{t<=tau}(dM_t - dM_t dm_t / G~_t + E[dM_{R~} 1{R~=t} | F_{t-1}]).
template <class T>
Process<T> hat_transform(const Bundle<T>& b, const Process<T>& M, bool check = true);
// M^tau - G_-^{-1} 1_{(0,tau]} . <M, m>
template <class T>
Process<T> bar_transform(const Bundle<T>& b, const Process<T>& M, bool check = true);

// Values at tau (one per path, ignored where tau = INF) projected onto optional or predictable cells.
template <class T>
Process<T> mu_cond_expect(const Space<T>& space, const RandomTime& tau, const std::vector<T>& X_at_tau,
                          ProjKind kind);

struct TauSigmaField {
    TauField klass = TauField::F_tau;
    std::vector<std::vector<int>> cells;  // partition of {tau < INF}
};

template <class T>
TauSigmaField sigma_field_at_tau(const Bundle<T>& b, TauField klass);
template <class T>
std::vector<T> cond_expect_at_tau(const Bundle<T>& b, const std::vector<T>& Y, TauField klass);

// G_-^{-1} 1_{(0,tau]} . (G~ . U)^{p,F}
template <class T>
Process<T> g_compensator(const Bundle<T>& b, const Process<T>& U);
// Compensator of U^tau computed directly in the enlarged filtration.
template <class T>
Process<T> g_compensator_direct(const Bundle<T>& b, const Process<T>& U);

// path,time,G,Gtilde,m,dNG,dNGbar
template <class T>
std::string export_bundle_csv(const Bundle<T>& b, int precision = -1);

// Process restricted to the stochastic interval [0, tau] and cut after t_max.
template <class T>
Process<T> stop_at(const Process<T>& X, const RandomTime& tau, int t_max);

}  // namespace enl
