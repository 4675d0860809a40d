#include "enl/models.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "enl/representation.hpp"

namespace enl {

const char* tau_kind_name(TauKind k) {
    switch (k) {
        case TauKind::Independent: return "independent";
        case TauKind::Cox: return "cox";
        case TauKind::StoppingTime: return "stopping_time";
        case TauKind::ConvexCombo: return "convex_combo";
        case TauKind::MinScaled: return "min_scaled";
        case TauKind::LastPassage: return "last_passage";
        case TauKind::MinWithStopping: return "min_with_stopping";
        case TauKind::GridSupported: return "grid_supported";
    }
    return "unknown";
}

const char* factor_kind_name(FactorKind k) {
    switch (k) {
        case FactorKind::BernoulliWalk: return "bernoulli_walk";
        case FactorKind::BinomialStock: return "binomial_stock";
        case FactorKind::TrinomialStock: return "trinomial_stock";
    }
    return "unknown";
}

namespace {

template <class T>
T convert(const Rational& x) {
    if constexpr (std::is_same_v<T, Rational>)
        return x;
    else
        return x.get_d();
}

struct Outcome {
    Rational prob;
    Rational value;  // walk: arrivals (0/1); stocks: multiplicative or additive move
};

// Outcomes of factor f at time t (t >= 1).
std::vector<Outcome> factor_outcomes(const FactorSpec& f, int t) {
    bool active = f.active < 0 || t <= f.active;
    switch (f.kind) {
        case FactorKind::BernoulliWalk:
            if (f.resolution < 1) throw Error(ErrorCode::ConfigError, "walk resolution must be >= 1");
            if (sgn(f.p) < 0 || f.p > 1) throw Error(ErrorCode::ConfigError, "walk probability outside [0,1]");
            if (!active || t % f.resolution != 0) return {{Rational(1), Rational(0)}};
            return {{f.p, Rational(1)}, {1 - f.p, Rational(0)}};
        case FactorKind::BinomialStock: {
            if (!(f.down < 1 && 1 < f.up && sgn(f.down) > 0))
                throw Error(ErrorCode::ConfigError, "binomial stock needs 0 < down < 1 < up");
            if (!active) return {{Rational(1), Rational(1)}};
            Rational q = (1 - f.down) / (f.up - f.down);
            return {{q, f.up}, {1 - q, f.down}};
        }
        case FactorKind::TrinomialStock: {
            if (sgn(f.p_move) <= 0 || f.p_move > 1) throw Error(ErrorCode::ConfigError, "trinomial p_move outside (0,1]");
            if (!active) return {{Rational(1), Rational(0)}};
            std::vector<Outcome> o{{f.p_move / 2, f.jump}, {f.p_move / 2, -f.jump}};
            if (f.p_move < 1) o.push_back({1 - f.p_move, Rational(0)});
            return o;
        }
    }
    return {};
}

struct FPath {
    Rational prob;
    std::vector<std::vector<int>> labels;  // labels[t]
    std::vector<std::vector<Rational>> moves;  // moves[t][factor], t >= 1
};

// Enumerates the paths of the product of factors; labels are prefix ids.
std::vector<FPath> enumerate_paths(int horizon, const std::vector<std::vector<std::vector<Outcome>>>& outs, int budget) {
    struct Node {
        int parent;
        Rational prob;
        std::vector<Rational> move;
    };
    std::vector<std::vector<Node>> level(horizon + 1);
    level[0].push_back({-1, Rational(1), {}});
    for (int t = 1; t <= horizon; ++t) {
        for (int i = 0; i < static_cast<int>(level[t - 1].size()); ++i) {
            std::vector<std::pair<Rational, std::vector<Rational>>> combos{{Rational(1), {}}};
            for (const auto& fo : outs[t]) {
                std::vector<std::pair<Rational, std::vector<Rational>>> next;
                for (const auto& c : combos)
                    for (const auto& o : fo) {
                        if (sgn(o.prob) == 0) continue;
                        auto mv = c.second;
                        mv.push_back(o.value);
                        next.emplace_back(c.first * o.prob, std::move(mv));
                    }
                combos = std::move(next);
            }
            for (auto& c : combos) level[t].push_back({i, level[t - 1][i].prob * c.first, std::move(c.second)});
            if (static_cast<int>(level[t].size()) > budget)
                throw Error(ErrorCode::BudgetExceeded, "filtration exceeds the path budget");
        }
    }
    std::vector<FPath> paths;
    for (int leaf = 0; leaf < static_cast<int>(level[horizon].size()); ++leaf) {
        FPath p;
        p.prob = level[horizon][leaf].prob;
        p.labels.assign(horizon + 1, {});
        p.moves.assign(horizon + 1, {});
        int id = leaf;
        for (int t = horizon; t >= 0; --t) {
            p.labels[t] = {id};
            p.moves[t] = level[t][id].move;
            id = level[t][id].parent;
        }
        paths.push_back(std::move(p));
    }
    return paths;
}

int floor_int(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return static_cast<int>(q.get_si());
}

int ceil_int(const Rational& x) { return -floor_int(-x); }

using Law = std::vector<std::pair<int, Rational>>;

Law point(int t) { return {{t, Rational(1)}}; }

Law independent_law(const std::vector<Rational>& dist, int horizon) {
    Law l;
    Rational rest(1);
    for (size_t k = 0; k < dist.size(); ++k) {
        if (sgn(dist[k]) < 0) throw Error(ErrorCode::ConfigError, "negative probability in tau law");
        int v = static_cast<int>(k) + 1;
        if (sgn(dist[k]) == 0) continue;
        l.emplace_back(v <= horizon ? v : INF, dist[k]);
        rest -= dist[k];
    }
    if (sgn(rest) < 0) throw Error(ErrorCode::ConfigError, "tau law sums to more than 1");
    if (sgn(rest) > 0) l.emplace_back(INF, rest);
    // merge equal values
    std::map<int, Rational> m;
    for (auto& [v, p] : l) m[v] += p;
    return Law(m.begin(), m.end());
}

}  // namespace

template <class T>
Model<T> build_model(const ModelSpec& spec) {
    const int H = spec.horizon;
    if (H < 1) throw Error(ErrorCode::ConfigError, "horizon must be >= 1");
    if (spec.factors.empty()) throw Error(ErrorCode::ConfigError, "model needs at least one factor");
    std::vector<std::vector<std::vector<Outcome>>> outs(H + 1);
    for (int t = 1; t <= H; ++t)
        for (const auto& f : spec.factors) outs[t].push_back(factor_outcomes(f, t));
    auto fpaths = enumerate_paths(H, outs, spec.path_budget);

    int walk = -1;
    for (size_t i = 0; i < spec.factors.size(); ++i)
        if (spec.factors[i].kind == FactorKind::BernoulliWalk) {
            walk = static_cast<int>(i);
            break;
        }
    const auto& ts = spec.tau;
    bool needs_walk = ts.kind != TauKind::Independent;
    if (needs_walk && walk < 0) throw Error(ErrorCode::ConfigError, "this tau kind needs a bernoulli_walk factor");

    Model<T> m;
    std::vector<Rational> weights;
    std::vector<std::vector<int>> labels(H + 1);
    std::vector<const FPath*> owner;
    for (const auto& fp : fpaths) {
        std::vector<int> N(H + 1, 0);
        if (walk >= 0)
            for (int t = 1; t <= H; ++t) N[t] = N[t - 1] + fp.moves[t][walk].get_num().get_si();
        auto arrival = [&](int k) {
            for (int t = 1; t <= H; ++t)
                if (N[t] >= k) return t;
            return INF;
        };
        int T1 = arrival(1), T2 = arrival(2);
        Law law;
        switch (ts.kind) {
            case TauKind::Independent: law = independent_law(ts.dist, H); break;
            case TauKind::Cox: {
                for (auto& [lvl, p] : independent_law(ts.dist, H)) law.emplace_back(lvl == INF ? INF : arrival(lvl), p);
                break;
            }
            case TauKind::StoppingTime:
                if (ts.level < 1) throw Error(ErrorCode::ConfigError, "stopping_time level must be >= 1");
                if (ts.delay < 0) throw Error(ErrorCode::ConfigError, "stopping_time delay must be >= 0");
                {
                    int a = arrival(ts.level);
                    law = point(a == INF || a + ts.delay > H ? INF : a + ts.delay);
                }
                break;
            case TauKind::ConvexCombo: {
                if (sgn(ts.alpha) < 0 || ts.alpha > 1) throw Error(ErrorCode::ConfigError, "alpha outside [0,1]");
                int v = T2 == INF ? INF : std::max(1, floor_int(ts.alpha * T1 + (1 - ts.alpha) * T2));
                law = point(v);
                break;
            }
            case TauKind::MinScaled: {
                if (sgn(ts.a) <= 0) throw Error(ErrorCode::ConfigError, "min_scaled needs a > 0");
                int s = T2 == INF ? INF : std::max(1, floor_int(ts.a * T2));
                law = point(std::min(s, T1));
                break;
            }
            case TauKind::LastPassage: {
                int slope = ceil_int(ts.mu);
                if (ts.a < slope) throw Error(ErrorCode::DegenerateModel, "last_passage needs a >= ceil(mu)");
                int last = 0;
                for (int t = 1; t <= H; ++t)
                    if (Rational(slope * t - N[t]) <= ts.a) last = t;
                law = point(Rational(slope * H - N[H]) <= ts.a ? INF : std::max(1, last));
                break;
            }
            case TauKind::MinWithStopping:
                if (ts.level < 1) throw Error(ErrorCode::ConfigError, "min_with_stopping level must be >= 1");
                for (auto& [v, p] : independent_law(ts.dist, H)) law.emplace_back(std::min(v, arrival(ts.level)), p);
                break;
            case TauKind::GridSupported: {
                if (ts.hazard.empty()) throw Error(ErrorCode::ConfigError, "grid_supported needs a hazard table");
                Rational alive(1);
                for (int t = 1; t <= H; ++t) {
                    const Rational& hz = ts.hazard[std::min<size_t>(N[t - 1], ts.hazard.size() - 1)];
                    if (sgn(hz) < 0 || hz > 1) throw Error(ErrorCode::ConfigError, "hazard outside [0,1]");
                    law.emplace_back(t, alive * hz);
                    alive *= 1 - hz;
                }
                law.emplace_back(INF, alive);
                break;
            }
        }
        std::map<int, Rational> merged;
        for (auto& [v, p] : law) merged[v] += p;
        for (auto& [v, p] : merged) {
            if (sgn(p) == 0) continue;
            weights.push_back(fp.prob * p);
            m.tau.push_back(v);
            owner.push_back(&fp);
            for (int t = 0; t <= H; ++t) labels[t].push_back(fp.labels[t][0]);
        }
    }
    const int n = static_cast<int>(weights.size());
    if (n > spec.path_budget) throw Error(ErrorCode::BudgetExceeded, "model exceeds the path budget");
    if (std::all_of(m.tau.begin(), m.tau.end(), [](int v) { return v == INF; }))
        throw Error(ErrorCode::DegenerateModel, "tau is never finite");

    std::vector<T> w(n);
    for (int p = 0; p < n; ++p) w[p] = convert<T>(weights[p]);
    m.space.weights = w;
    m.space.F = Filtration::from_labels(n, H, labels);
    m.space.tol = spec.tol;
    m.marks.assign(n, 0);
    m.arrivals = Process<T>(n, H, Klass::Adapted);
    for (size_t f = 0; f < spec.factors.size(); ++f) {
        const auto& fs = spec.factors[f];
        Process<T> X(n, H, Klass::Adapted);
        for (int p = 0; p < n; ++p) {
            Rational v = fs.kind == FactorKind::BernoulliWalk ? Rational(0) : fs.s0;
            X(p, 0) = convert<T>(v);
            for (int t = 1; t <= H; ++t) {
                const Rational& mv = owner[p]->moves[t][f];
                if (fs.kind == FactorKind::BinomialStock)
                    v *= mv;
                else
                    v += mv;
                X(p, t) = convert<T>(v);
            }
        }
        if (fs.kind == FactorKind::BernoulliWalk) {
            if (static_cast<int>(f) == walk) m.arrivals = X;
        } else {
            m.S.push_back(X);
            m.asset_names.push_back(std::string(factor_kind_name(fs.kind)) + "_" + std::to_string(f));
        }
    }
    return m;
}

template <class T>
Space<T> product_space(const Space<T>& a, const Space<T>& b) {
    if (a.horizon() != b.horizon()) throw Error(ErrorCode::InvalidArgument, "product of spaces with different horizons");
    const int na = a.n_paths(), nb = b.n_paths(), H = a.horizon();
    std::vector<std::vector<int>> labels(H + 1, std::vector<int>(na * nb));
    std::vector<T> w(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            w[i * nb + j] = a.weights[i] * b.weights[j];
            for (int t = 0; t <= H; ++t) labels[t][i * nb + j] = a.F.atom(t, i) * b.F.n_atoms(t) + b.F.atom(t, j);
        }
    Space<T> s;
    s.weights = w;
    s.F = Filtration::from_labels(na * nb, H, labels);
    s.tol = std::max(a.tol, b.tol);
    return s;
}

template <class T>
AvoidanceReport avoidance_scanner(const Space<T>& space, const RandomTime& tau) {
    const auto& F = space.F;
    const int H = F.horizon();
    const double tol = space.tol;
    // mass of {tau = t} on each F_t-atom
    auto hit = [&](int t, int a) {
        T s(0);
        for (int p : F.members(t, a))
            if (tau[p] == t) s += space.weights[p];
        return Field<T>::positive(s, tol);
    };
    AvoidanceReport r;
    if (space.n_paths() <= 16) {
        r.exhaustive = true;
        // A rule either stops at a branching node or defers to every child; its hit set is
        // positive iff some chosen node is hit, so enumeration tracks the first positive rule.
        std::function<std::vector<std::vector<std::pair<int, int>>>(int, int)> rules = [&](int t, int a) {
            std::vector<std::vector<std::pair<int, int>>> out;
            if (t >= 1 && F.branches(t, a)) out.push_back({{t, a}});
            if (t == H) {
                out.push_back({});
                return out;
            }
            std::vector<int> kids;
            for (int c = 0; c < F.n_atoms(t + 1); ++c)
                if (F.parent(t + 1, c) == a) kids.push_back(c);
            std::vector<std::vector<std::pair<int, int>>> acc{{}};
            for (int c : kids) {
                auto sub = rules(t + 1, c);
                std::vector<std::vector<std::pair<int, int>>> next;
                for (const auto& x : acc)
                    for (const auto& y : sub) {
                        auto z = x;
                        z.insert(z.end(), y.begin(), y.end());
                        next.push_back(std::move(z));
                    }
                acc = std::move(next);
                if (acc.size() > 200000) throw Error(ErrorCode::BudgetExceeded, "too many stopping rules");
            }
            out.insert(out.end(), acc.begin(), acc.end());
            return out;
        };
        try {
            for (const auto& rule : rules(0, 0)) {
                ++r.rules_checked;
                bool positive = std::any_of(rule.begin(), rule.end(), [&](auto n) { return hit(n.first, n.second); });
                if (positive) {
                    r.avoids = false;
                    r.witness = rule;
                    return r;
                }
            }
            return r;
        } catch (const Error&) {
            r = AvoidanceReport{};
        }
    }
    for (int t = 1; t <= H; ++t)
        for (int a = 0; a < F.n_atoms(t); ++a) {
            if (!F.branches(t, a)) continue;
            ++r.rules_checked;
            if (hit(t, a)) {
                r.avoids = false;
                r.witness = {{t, a}};
                return r;
            }
        }
    return r;
}

template <class T>
PseudoStoppingReport pseudo_stopping_check(const Bundle<T>& b) {
    PseudoStoppingReport r;
    const double tol = b.tol();
    r.m_is_one = std::all_of(b.m.v.begin(), b.m.v.end(), [&](const T& x) { return Field<T>::is_zero(x - T(1), tol); });
    r.optional_stopping = true;
    for (const auto& wit : indicator_basis(b.space)) {
        T e(0);
        for (int p = 0; p < b.n(); ++p) e += b.w()[p] * wit.M(p, std::min(b.tau[p], b.h()));
        if (!Field<T>::is_zero(e - wit.M(0, 0), tol)) {
            r.optional_stopping = false;
            break;
        }
    }
    return r;
}

template <class T>
Space<T> random_space(std::mt19937_64& rng, const RandomSpaceOptions& o) {
    std::uniform_int_distribution<int> hd(1, o.max_horizon);
    const int H = hd(rng);
    std::vector<std::vector<int>> prefix{{}};
    std::vector<std::vector<int>> labels(H + 1);
    // grow a tree level by level; label = index of the node at that level
    std::vector<std::vector<int>> node_of(1, std::vector<int>{0});
    std::vector<int> parent_node{0};
    for (int t = 1; t <= H; ++t) {
        std::vector<int> next_parent;
        int leaves = static_cast<int>(parent_node.size());
        for (int i = 0; i < leaves; ++i) {
            int room = o.max_paths - (static_cast<int>(next_parent.size()) + (leaves - i - 1));
            int k = 1 + static_cast<int>(rng() % o.max_branch);
            k = std::max(1, std::min(k, room));
            for (int j = 0; j < k; ++j) next_parent.push_back(i);
        }
        node_of.push_back(next_parent);
        parent_node = next_parent;
    }
    const int n = static_cast<int>(parent_node.size());
    labels.assign(H + 1, std::vector<int>(n));
    for (int p = 0; p < n; ++p) {
        int id = p;
        for (int t = H; t >= 0; --t) {
            labels[t][p] = id;
            if (t > 0) id = node_of[t][id];
        }
    }
    std::vector<T> w(n);
    std::vector<long> raw(n);
    long tot = 0;
    for (auto& x : raw) tot += (x = 1 + static_cast<long>(rng() % 9));
    for (int p = 0; p < n; ++p) w[p] = T(static_cast<double>(raw[p])) / T(static_cast<double>(tot));
    if constexpr (std::is_same_v<T, Rational>)
        for (int p = 0; p < n; ++p) w[p] = ratio(raw[p], tot);
    Space<T> s;
    s.weights = w;
    s.F = Filtration::from_labels(n, H, labels);
    return s;
}

RandomTime random_tau(std::mt19937_64& rng, int n, int horizon, int inf_weight) {
    RandomTime tau(n);
    std::uniform_int_distribution<int> d(1, horizon + inf_weight);
    for (auto& v : tau) {
        int x = d(rng);
        v = x > horizon ? INF : x;
    }
    return tau;
}

std::vector<int> random_marks(std::mt19937_64& rng, int n) {
    std::vector<int> m(n);
    for (auto& x : m) x = static_cast<int>(rng() % 2);
    return m;
}

template <class T>
static T random_scalar(std::mt19937_64& rng, int lo, int hi, int max_den) {
    long num = lo + static_cast<long>(rng() % (hi - lo + 1));
    long den = 1 + static_cast<long>(rng() % max_den);
    if constexpr (std::is_same_v<T, Rational>)
        return ratio(num, den);
    else
        return static_cast<double>(num) / static_cast<double>(den);
}

template <class T>
Process<T> random_adapted(std::mt19937_64& rng, const Filtration& f, int lo, int hi, int max_den) {
    Process<T> X(f.n_paths(), f.horizon(), Klass::Adapted);
    for (int t = 0; t <= f.horizon(); ++t) {
        std::vector<T> v(f.n_atoms(t));
        for (auto& x : v) x = random_scalar<T>(rng, lo, hi, max_den);
        for (int p = 0; p < f.n_paths(); ++p) X(p, t) = v[f.atom(t, p)];
    }
    return X;
}

template <class T>
std::vector<T> random_measurable(std::mt19937_64& rng, const Filtration& f, int t, int lo, int hi) {
    std::vector<T> v(f.n_atoms(t)), x(f.n_paths());
    for (auto& y : v) y = random_scalar<T>(rng, lo, hi, 1);
    for (int p = 0; p < f.n_paths(); ++p) x[p] = v[f.atom(t, p)];
    return x;
}

template <class T>
Bundle<T> random_bundle(std::mt19937_64& rng, const RandomSpaceOptions& o) {
    auto s = random_space<T>(rng, o);
    auto tau = random_tau(rng, s.n_paths(), s.horizon(), o.inf_weight);
    std::vector<int> marks = o.marks ? random_marks(rng, s.n_paths()) : std::vector<int>{};
    return enlarge(s, tau, marks);
}

template <class T>
Model<T> random_hedging_model(std::mt19937_64& rng, int max_horizon, int max_paths) {
    static const Rational probs[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3), Rational(1, 4)};
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int H = 2 + static_cast<int>(rng() % std::max(1, max_horizon - 1));
        // per time: 0 = trinomial stock move, 1 = coin, 2 = both
        std::vector<int> kind(H + 1, 0);
        std::vector<Rational> pm(H + 1), pc(H + 1);
        long fpaths = 1;
        for (int t = 1; t <= H; ++t) {
            kind[t] = static_cast<int>(rng() % 3);
            pm[t] = probs[rng() % 4];
            pc[t] = probs[rng() % 4];
            fpaths *= (kind[t] != 1 ? (pm[t] == 1 ? 2 : 3) : 1) * (kind[t] != 0 ? 2 : 1);
        }
        if (fpaths * 2 > max_paths || fpaths < 2) continue;

        std::vector<std::vector<std::vector<Outcome>>> outs(H + 1);
        for (int t = 1; t <= H; ++t) {
            FactorSpec st;
            st.kind = FactorKind::TrinomialStock;
            st.p_move = pm[t];
            outs[t].push_back(kind[t] != 1 ? factor_outcomes(st, t) : std::vector<Outcome>{{Rational(1), Rational(0)}});
            outs[t].push_back(kind[t] != 0 ? std::vector<Outcome>{{pc[t], Rational(1)}, {1 - pc[t], Rational(0)}}
                                           : std::vector<Outcome>{{Rational(1), Rational(0)}});
        }
        auto fp = enumerate_paths(H, outs, max_paths);

        // tau law keyed by the sign-folded history
        std::map<std::vector<int>, Law> laws;
        std::vector<Rational> weights;
        std::vector<std::vector<int>> labels(H + 1);
        RandomTime tau;
        std::vector<const FPath*> owner;
        for (const auto& f : fp) {
            std::vector<int> key;
            for (int t = 1; t <= H; ++t) {
                key.push_back(sgn(f.moves[t][0]) != 0);
                key.push_back(f.moves[t][1].get_num().get_si());
            }
            auto it = laws.find(key);
            if (it == laws.end()) {
                Law l;
                int k = 1 + static_cast<int>(rng() % 2);
                std::vector<int> vals;
                while (static_cast<int>(vals.size()) < k) {
                    int v = 1 + static_cast<int>(rng() % (H + 1));
                    v = v > H ? INF : v;
                    if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
                }
                if (k == 1)
                    l.emplace_back(vals[0], Rational(1));
                else {
                    Rational q = probs[rng() % 4];
                    l.emplace_back(vals[0], q);
                    l.emplace_back(vals[1], 1 - q);
                }
                it = laws.emplace(key, l).first;
            }
            for (auto& [v, p] : it->second) {
                weights.push_back(f.prob * p);
                tau.push_back(v);
                owner.push_back(&f);
                for (int t = 0; t <= H; ++t) labels[t].push_back(f.labels[t][0]);
            }
        }
        const int n = static_cast<int>(weights.size());
        if (n > max_paths) continue;
        if (std::all_of(tau.begin(), tau.end(), [](int v) { return v == INF; })) continue;
        Model<T> m;
        m.space.weights.resize(n);
        for (int p = 0; p < n; ++p) m.space.weights[p] = convert<T>(weights[p]);
        m.space.F = Filtration::from_labels(n, H, labels);
        m.tau = tau;
        m.marks = random_marks(rng, n);
        Process<T> S(n, H, Klass::Adapted), C(n, H, Klass::Adapted);
        for (int p = 0; p < n; ++p) {
            Rational s(2), c(0);
            S(p, 0) = convert<T>(s);
            for (int t = 1; t <= H; ++t) {
                s += owner[p]->moves[t][0];
                c += owner[p]->moves[t][1];
                S(p, t) = convert<T>(s);
                C(p, t) = convert<T>(c);
            }
        }
        m.S = {S};
        m.asset_names = {"stock"};
        m.arrivals = C;
        // no stock move at R~
        auto b = enlarge(m.space, m.tau, m.marks);
        bool ok = true;
        for (int p = 0; p < n && ok; ++p)
            for (int t = 1; t <= H; ++t)
                if (Field<T>::is_zero(b.Gt(p, t), b.tol()) && Field<T>::positive(b.G(p, t - 1), b.tol()) &&
                    !Field<T>::is_zero(S.inc(p, t), b.tol()))
                    ok = false;
        if (ok) return m;
    }
    throw Error(ErrorCode::DegenerateModel, "could not draw a hedging model");
}

#define ENL_INST(T)                                                                          \
    template Model<T> build_model(const ModelSpec&);                                         \
    template Space<T> product_space(const Space<T>&, const Space<T>&);                       \
    template AvoidanceReport avoidance_scanner(const Space<T>&, const RandomTime&);          \
    template PseudoStoppingReport pseudo_stopping_check(const Bundle<T>&);                   \
    template Space<T> random_space(std::mt19937_64&, const RandomSpaceOptions&);             \
    template Process<T> random_adapted(std::mt19937_64&, const Filtration&, int, int, int);  \
    template std::vector<T> random_measurable(std::mt19937_64&, const Filtration&, int, int, int); \
    template Bundle<T> random_bundle(std::mt19937_64&, const RandomSpaceOptions&);           \
    template Model<T> random_hedging_model(std::mt19937_64&, int, int);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
