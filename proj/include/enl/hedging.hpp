#pragma once

#include <string>
#include <vector>

#include "enl/contracts.hpp"

namespace enl {

template <class T>
struct Market {
    Bundle<T> bundle;
    std::vector<Process<T>> S;  // discounted F-martingale prices
};

struct AssumptionReport {
    std::vector<bool> martingale;        // S^i is an F-martingale
    std::vector<bool> orthogonal_to_m;   // <S^i, m> = 0
    std::vector<bool> no_jump_at_Rtilde; // dS^i = 0 on {G~ = 0 < G_-}
    bool all() const;
    std::string describe() const;
};

template <class T>
AssumptionReport check_market_assumptions(const std::vector<Process<T>>& S, const Bundle<T>& b);

template <class T>
struct DriftGkw {
    Process<T> U;      // 1{G_- > 0} . [S, m]
    Process<T> phi_m;  // U = phi_m . S + L_m
    Process<T> L_m;
    bool inclusion_ok = true;  // {G_- > 0} within {G_- + phi_m > 0} on (0, tau]
};

template <class T>
DriftGkw<T> mortality_drift_gkw(const Market<T>& mk);

template <class T>
struct HedgeResult {
    int term = 0;
    std::vector<std::string> assets;  // names of traded assets, stock first
    std::vector<Process<T>> prices;   // traded price processes in G (stopped)
    std::vector<Process<T>> xi;       // predictable positions, one per asset
    Process<T> remaining;             // L, orthogonal to every traded asset
    Process<T> H;                     // E[A_T | G_t]
    Process<T> payments;              // A
    Process<T> value, cost, risk, eta;
    Process<T> xiF, LF;               // F-side GKW of M^h against S^T
    double energy = 0;                // E[[L]_T]
    int degenerate_atoms = 0;
};

// Closed-form G-side hedge of a claim (single risky asset).
template <class T>
HedgeResult<T> risk_minimize(const Market<T>& mk, const Claim<T>& c);
template <class T>
HedgeResult<T> risk_minimize(const Market<T>& mk, const Process<T>& h, int term);

// G-side hedge assembled from a given F-side pair (xi^(h,F), L^(h,F)).
template <class T>
HedgeResult<T> g_side_hedge(const Market<T>& mk, const Claim<T>& c, const Process<T>& xiF, const Process<T>& LF);

// Direct GKW of the claim martingale against the given G-side assets.
template <class T>
GkwResult<T> direct_g_gkw(const Market<T>& mk, const Claim<T>& c, const std::vector<Process<T>>& assets);

template <class T>
struct Strategy {
    std::vector<Process<T>> xi;  // predictable
    Process<T> eta;              // cash, V = xi S + eta
};

template <class T>
struct RiskProcess {
    Process<T> value, cost, risk;
};

template <class T>
RiskProcess<T> risk_process(const std::vector<T>& w, const Filtration& f, const std::vector<Process<T>>& assets,
                            const Strategy<T>& rho, const Process<T>& A, double tol);

// Payment process of a claim: h_tau (+k) at tau if tau <= term, g at term on survival.
template <class T>
Process<T> payment_process(const Bundle<T>& b, const Claim<T>& c);

// G^{-1} o,F(X 1{t < tau}) 1{t < tau} (1 - 1{t = term}), the closed form of the value process.
template <class T>
Process<T> value_formula(const Bundle<T>& b, const Claim<T>& c);

template <class T>
struct DriftIdentities {
    double u_hat = 0;      // max |U^ - (G_-/G~) 1_{(0,tau]} . U|
    double s_hat = 0;      // max |(G_- + phi_m) dS^ - (G_- dS^tau - dL_m^)| on (0, tau]
    double l_orth = 0;     // max |<L_m^, S^tau>^G|
};

template <class T>
DriftIdentities<T> drift_identity_defects(const Market<T>& mk);

template <class T>
struct EndowmentSplit {
    Process<T> Ug, GTm, Cor, Mg;
    Process<T> xi_g, L_g, xi_GT, L_GT, xi_Cor, L_Cor, xi_Ctilde, L_Ctilde;
    Process<T> xiF, LF;  // assembled F-side pair
    HedgeResult<T> hedge;
    double xi_defect = 0, L_defect = 0;  // vs direct risk_minimize
    double identity_defect = 0;          // M^(g) = G_0(T)U_0 + G_-(T).U + U_-.G(T) + Cor
};

template <class T>
EndowmentSplit<T> endowment_strategy_split(const Market<T>& mk, const std::vector<T>& g, int term);

// Annuity h_t = C_t on t <= term, C_term on survival.
template <class T>
EndowmentSplit<T> annuity_strategy_split(const Market<T>& mk, const Process<T>& C, int term);

enum class Instrument { LongevityBond, PureEndowment1 };

const char* instrument_name(Instrument i);

template <class T>
HedgeResult<T> securitized_hedge(const Market<T>& mk, const Claim<T>& c, const std::vector<Instrument>& instruments);

}  // namespace enl
