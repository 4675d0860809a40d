#pragma once

#include <optional>
#include <vector>

#include "enl/enlargement.hpp"

namespace enl {

// Claim paid at the end of [0, term]: h_tau + k on {tau <= term}, g on {tau > term}.
template <class T>
struct Claim {
    Process<T> h;       // adapted
    std::vector<T> g;   // F_term-measurable
    std::vector<T> k;   // value at tau with E[k | F_tau] = 0 (second type), zero by default
    int term = 0;
};

template <class T>
Claim<T> make_claim(const Bundle<T>& b, const Process<T>* h, const std::vector<T>* g, int term);

template <class T>
struct OptionalRepresentation {
    int term = 0;
    Process<T> H;            // E[payoff | G_t]
    Process<T> Mh;           // E[sum_{u<=term} h_u dDo_u + g G_term | F_t]
    Process<T> hDo;          // (h . D^o) stopped at term
    Process<T> h;
    std::vector<T> g, k;
    Process<T> Mh_hat, m_hat;
    Process<T> phi_o;        // integrand against N^G (zero off (0, R) and after term)
    Process<T> financial, correlation, pure1, pure2, residual;
};

// Conditional expectation of the claim payoff in the enlarged filtration.
template <class T>
Process<T> claim_martingale(const Bundle<T>& b, const Claim<T>& c);

template <class T>
OptionalRepresentation<T> represent_claim(const Bundle<T>& b, const Claim<T>& c);

template <class T>
OptionalRepresentation<T> represent_optional_payoff(const Bundle<T>& b, const Process<T>& h);

// MG is stopped at tau internally; h is the F_tau-cell average of MG_tau and k the remainder.
template <class T>
OptionalRepresentation<T> represent_g_martingale(const Bundle<T>& b, const Process<T>& MG);

// Largest predictable G-bracket between {financial + correlation, pure1, pure2}, as a double.
template <class T>
double orthogonality_defect(const Bundle<T>& b, const OptionalRepresentation<T>& r);

template <class T>
struct Witness {
    int time = 0;
    int atom = 0;
    Process<T> M;  // compensated indicator martingale
};

template <class T>
struct PurityVerdict {
    bool pure = false;
    Process<T> xi_o;
    std::vector<T> xi_pr;
    std::optional<Witness<T>> witness;
};

// Compensated atom indicators 1_A 1{s>=t} - P(A | F_{t-1}) 1{s>=t}, one per (t >= 1, F_t-atom A).
template <class T>
std::vector<Witness<T>> indicator_basis(const Space<T>& s);

template <class T>
PurityVerdict<T> classify_pure_mortality(const Bundle<T>& b, const Process<T>& N);

struct NbarReport {
    bool nbar_is_pure = false;
    bool nbar_equals_ng = false;
    bool condition_c = false;
    std::vector<bool> grid_condition;  // index t = 1..horizon (entry 0 unused, true)
    bool consistent() const { return nbar_is_pure == nbar_equals_ng && nbar_equals_ng == condition_c; }
};

template <class T>
NbarReport nbar_report(const Bundle<T>& b);

struct JeulinClass {
    bool second_type = false;
    bool third_type = false;
};

template <class T>
JeulinClass jeulin_class_check(const Bundle<T>& b, const std::vector<T>& k);

// Whether [k.D, K.N^G] is a G-martingale for every F-adapted K (scanned over atom indicators).
template <class T>
bool orthogonal_to_first_type(const Bundle<T>& b, const std::vector<T>& k, int* witness_time = nullptr);

// J = Y / K with Y = M^h - h.D^o and K = G + (G_{R-} + 1{G_{R-}=0}) 1{t >= R};
// returns max |H - (h_tau 1{tau<=t} + J 1{t<tau})| over t <= term.
template <class T>
double jh_crosscheck(const Bundle<T>& b, const Claim<T>& c, Process<T>* J = nullptr);

}  // namespace enl
