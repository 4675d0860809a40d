#pragma once

#include <string>
#include <utility>
#include <vector>

#include "enl/representation.hpp"

namespace enl {

enum class ContractKind { PureEndowment, TermInsurance, Endowment, LongevityBond };

const char* contract_name(ContractKind k);

template <class T>
struct ContractSpec {
    ContractKind kind = ContractKind::PureEndowment;
    int term = 0;
    std::vector<T> g;  // survival amount, F_term-measurable (pure endowment, endowment)
    Process<T> K;      // death benefit, adapted (term insurance, endowment)
};

template <class T>
struct PriceDecomposition {
    ContractKind kind = ContractKind::PureEndowment;
    int term = 0;
    Process<T> price;   // assembled from the parts
    Process<T> direct;  // E[payoff | G_t]
    std::vector<std::pair<std::string, Process<T>>> parts;
    Process<T> residual;
    Process<T> M;       // M^(g), M^(K), M^(g)+M^(K) or M^(B)
    Process<T> Y;       // M - h.D^o
    // longevity bond only
    Process<T> bond;    // B_t = E[G_T | G_t], not stopped at tau
    Process<T> xiG;     // dDbar^o / dD^o
    Process<T> Dbar_o;  // (G_T 1_{[tau,inf)})^{o,F}
    Claim<T> claim;     // the claim that reproduces the price
};

// Claim whose G-martingale is the (stopped) price of the contract.
template <class T>
Claim<T> contract_claim(const Bundle<T>& b, const ContractSpec<T>& spec, Process<T>* xiG = nullptr,
                        Process<T>* Dbar_o = nullptr);

template <class T>
PriceDecomposition<T> price(const Bundle<T>& b, const ContractSpec<T>& spec);

template <class T>
struct SecondTypeRisk {
    Process<T> jump;  // (E[G_T | G_tau] - xi^(G)_tau) 1{tau <= t, tau <= T}
    bool vanishes = true;
};

template <class T>
SecondTypeRisk<T> second_type_risk(const Bundle<T>& b, int term);

}  // namespace enl
