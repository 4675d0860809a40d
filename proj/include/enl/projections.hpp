#pragma once

#include <vector>

#include "enl/space.hpp"

namespace enl {

template <class T>
Process<T> projection(const std::vector<T>& w, const Filtration& f, const Process<T>& X, ProjKind kind);

// V must start at 0. Optional: increments E[dV_t | F_t]; predictable: E[dV_t | F_{t-1}].
template <class T>
Process<T> dual_projection(const std::vector<T>& w, const Filtration& f, const Process<T>& V, ProjKind kind,
                           double tol);

// psi with (phi.V)^p = psi.V^p; psi := 1 where the compensator increment of V vanishes.
template <class T>
Process<T> dual_rn_derivative(const std::vector<T>& w, const Filtration& f, const Process<T>& phi,
                              const Process<T>& V, double tol);

// Minimal-norm solution of the symmetric PSD system A x = b (d x d, row-major).
template <class T>
std::vector<T> solve_min_norm(std::vector<T> A, std::vector<T> b, int d, double tol, int* rank = nullptr);

struct GramDiag {
    int time = 0;
    int atom = 0;
    int rank = 0;
    int dim = 0;
};

template <class T>
struct GkwResult {
    std::vector<Process<T>> theta;  // one predictable integrand per asset
    Process<T> residual;            // L with L_0 = 0
    std::vector<GramDiag> diagnostics;
    int rank_deficient = 0;
};

// M = M_0 + theta.S + L with <S^i, L> = 0, computed per (F_{t-1}-atom, t).
template <class T>
GkwResult<T> gkw(const std::vector<T>& w, const Filtration& f, const Process<T>& M,
                 const std::vector<Process<T>>& S, double tol, bool check_inputs = true);

// d<X,Y>/d<Y> per (F_{t-1}-atom, t) with 0/0 := 0.
template <class T>
Process<T> bracket_ratio(const std::vector<T>& w, const Filtration& f, const Process<T>& X, const Process<T>& Y,
                         double tol);

}  // namespace enl
