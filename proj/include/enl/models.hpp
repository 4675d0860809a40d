#pragma once

#include <random>
#include <string>
#include <vector>

#include "enl/enlargement.hpp"

namespace enl {

enum class FactorKind { BernoulliWalk, BinomialStock, TrinomialStock };

// One independent source of randomness generating part of F.
struct FactorSpec {
    FactorKind kind = FactorKind::BernoulliWalk;
    Rational p{1, 2};       // walk: arrival probability per flip
    int resolution = 1;     // walk: grid points per flip
    Rational up{2}, down{1, 2}, s0{1};  // binomial stock, moves at q = (1 - down) / (up - down)
    Rational jump{1};       // trinomial stock: s0 +- jump w.p. p_move / 2 each
    Rational p_move{1, 2};
    int active = -1;        // number of leading periods in which the factor moves (-1: all)
};

enum class TauKind {
    Independent,      // law `dist` on 1.., independent of F
    Cox,              // first time the arrival count reaches an independent level with law `dist`
    StoppingTime,     // T_level + delay; predictable when delay >= 1
    ConvexCombo,      // floor(alpha T_1 + (1 - alpha) T_2)
    MinScaled,        // max(1, floor(a T_2)) min T_1
    LastPassage,      // last t with ceil(mu) t - N_t <= a
    MinWithStopping,  // T_level min an independent time with law `dist`
    GridSupported,    // death at t with hazard depending on N_{t-1}
};

struct TauSpec {
    TauKind kind = TauKind::Independent;
    std::vector<Rational> dist;    // P(value = 1), P(value = 2), ...; the rest is INF
    std::vector<Rational> hazard;  // indexed by the arrival count, last entry repeats
    int level = 1;
    int delay = 0;
    Rational alpha{1, 2};
    Rational a{1, 2};
    Rational mu{1};
};

struct ModelSpec {
    int horizon = 3;
    std::vector<FactorSpec> factors;
    TauSpec tau;
    int path_budget = 4096;
    double tol = 1e-10;
};

template <class T>
struct Model {
    Space<T> space;
    std::vector<Process<T>> S;
    std::vector<std::string> asset_names;
    Process<T> arrivals;  // N_t of the first walk factor (zero without one)
    RandomTime tau;
    std::vector<int> marks;
};

const char* tau_kind_name(TauKind k);
const char* factor_kind_name(FactorKind k);

template <class T>
Model<T> build_model(const ModelSpec& spec);

// Product of two spaces; paths are (i, j) in row-major order and atoms are products of atoms.
template <class T>
Space<T> product_space(const Space<T>& a, const Space<T>& b);

struct AvoidanceReport {
    bool avoids = true;
    bool exhaustive = false;
    long rules_checked = 0;
    std::vector<std::pair<int, int>> witness;  // (time, F-atom) nodes of a stopping rule hit by tau
};

// Stopping rules that stop only at branching nodes; exhaustive on <= 16 paths.
template <class T>
AvoidanceReport avoidance_scanner(const Space<T>& space, const RandomTime& tau);

struct PseudoStoppingReport {
    bool m_is_one = false;
    bool optional_stopping = false;  // E[M_tau] = M_0 over the indicator basis
    bool consistent() const { return m_is_one == optional_stopping; }
};

template <class T>
PseudoStoppingReport pseudo_stopping_check(const Bundle<T>& b);

// Random generators for property tests. All draws come from the passed engine.
struct RandomSpaceOptions {
    int max_horizon = 6;
    int max_paths = 64;
    int max_branch = 3;
    bool marks = true;
    int inf_weight = 1;  // relative weight of INF against each grid time
};

template <class T>
Space<T> random_space(std::mt19937_64& rng, const RandomSpaceOptions& o = {});
RandomTime random_tau(std::mt19937_64& rng, int n, int horizon, int inf_weight = 1);
std::vector<int> random_marks(std::mt19937_64& rng, int n);
template <class T>
Process<T> random_adapted(std::mt19937_64& rng, const Filtration& f, int lo = -3, int hi = 3, int max_den = 3);
template <class T>
std::vector<T> random_measurable(std::mt19937_64& rng, const Filtration& f, int t, int lo = 0, int hi = 4);
template <class T>
Bundle<T> random_bundle(std::mt19937_64& rng, const RandomSpaceOptions& o = {});

// Space with one symmetric trinomial stock and coin factors; tau depends on |dS| and the coins
// only, so <S, m> = 0, and no stock move happens at R~.
template <class T>
Model<T> random_hedging_model(std::mt19937_64& rng, int max_horizon = 4, int max_paths = 64);

}  // namespace enl
