#include "enl/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace enl {

bool VerifyReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json VerifyReport::to_json() const {
    json j;
    j["seed"] = seed;
    j["count"] = count;
    j["mode"] = mode;
    j["pass"] = pass();
    j["checks"] = json::array();
    for (const auto& c : checks) {
        json x;
        x["name"] = c.name;
        x["pass"] = c.pass;
        x["instances"] = c.instances;
        x["failures"] = c.failures;
        x["max_defect"] = c.max_defect;
        if (c.first_failure >= 0) x["first_failure"] = c.first_failure;
        j["checks"].push_back(x);
    }
    return j;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "ng_martingale",          "ngbar_martingale",         "m_martingale",          "nbar_equivalence",
        "representation_residual", "representation_orthogonality", "jh_crosscheck",    "g_martingale_representation",
        "hat_martingale",         "hat_linearity",            "null_class_hat",        "dual_rn_duality",
        "compensator_formula",    "contract_pricing",         "hedging_residual",      "hedging_orthogonality",
        "hedging_direct_gkw",     "hedging_optimality",       "hedging_value_formula", "drift_identities",
        "split_identities",       "securitization_monotone",
    };
    return names;
}

namespace {

struct Outcome {
    bool ran = false;
    bool pass = true;
    double defect = 0;
};

using Outcomes = std::map<std::string, Outcome>;

template <class T>
double dabs(const T& x) {
    return std::fabs(Field<T>::to_double(x));
}

template <class T>
double max_abs(const Process<T>& x) {
    double m = 0;
    for (const auto& v : x.v) m = std::max(m, dabs(v));
    return m;
}

template <class T>
void record(Outcomes& out, const std::string& name, bool pass, double defect) {
    auto& o = out[name];
    o.ran = true;
    o.pass = o.pass && pass;
    o.defect = std::max(o.defect, defect);
}

template <class T>
void record_zero(Outcomes& out, const std::string& name, const Process<T>& x, double tol) {
    record<T>(out, name, all_zero(x, tol), max_abs(x));
}

template <class T>
void record_mart(Outcomes& out, const std::string& name, const MartingaleReport& r) {
    record<T>(out, name, r.pass, r.max_violation);
}

template <class T>
Process<T> predictable_from(const Process<T>& adapted) {
    Process<T> p(adapted.n, adapted.h, Klass::Predictable);
    for (int q = 0; q < adapted.n; ++q)
        for (int t = 1; t <= adapted.h; ++t) p(q, t) = adapted(q, t - 1);
    return p;
}

// Checks that need only a bundle and random payoffs on it.
template <class T>
void bundle_checks(const Bundle<T>& b0, std::mt19937_64& rng, const VerifyOptions& o, Outcomes& out) {
    Bundle<T> b = b0;
    if (o.flip_ng_sign) b.NG *= T(-1);
    const double tol = b.tol();
    const auto& F = b.space.F;
    const int n = b.n(), h = b.h();

    record_mart<T>(out, "ng_martingale", is_martingale(b.w(), b.gfil, b.NG, tol));
    record_mart<T>(out, "ngbar_martingale", is_martingale(b.w(), b.gfil, b.NGbar, tol));
    record_mart<T>(out, "m_martingale", is_martingale(b.w(), F, b.m, tol));
    record<T>(out, "nbar_equivalence", nbar_report(b).consistent(), 0);

    const int term = 1 + static_cast<int>(rng() % h);
    auto hp = random_adapted<T>(rng, F);
    auto g = random_measurable<T>(rng, F, term);
    auto c = make_claim<T>(b, &hp, &g, term);
    auto r = represent_claim(b, c);
    record_zero<T>(out, "representation_residual", r.residual, tol);
    double od = orthogonality_defect(b, r);
    record<T>(out, "representation_orthogonality", od <= (Field<T>::exact ? 0.0 : tol), od);
    double jd = jh_crosscheck(b, c);
    record<T>(out, "jh_crosscheck", jd <= (Field<T>::exact ? 0.0 : tol), jd);

    auto X = random_measurable<T>(rng, b.gfil, h);
    auto MG = martingale_closure(b.w(), b.gfil, X);
    auto rg = represent_g_martingale(b, MG);
    double gd = orthogonality_defect(b, rg);
    record<T>(out, "g_martingale_representation", all_zero(rg.residual, tol) && gd <= (Field<T>::exact ? 0.0 : tol),
              std::max(max_abs(rg.residual), gd));

    record_mart<T>(out, "hat_martingale", is_martingale(b.w(), b.gfil, r.Mh_hat, tol));

    // linearity of the hat transform with a predictable integrand
    auto Y = martingale_closure(b.w(), F, random_measurable<T>(rng, F, h));
    auto A = predictable_from(random_adapted<T>(rng, F));
    auto combo = integrate(F, A, r.Mh, tol) + Y;
    auto lin = hat_transform(b, combo) - integrate(b.gfil, A, r.Mh_hat, tol, false) - hat_transform(b, Y);
    record_zero<T>(out, "hat_linearity", lin, tol);

    // null class: G_- dM = h G_- dV - E[h G_- dV | F_-] - E[h dV | F_-] 1{G_- > 0} dm with V = 1{R~ <= t}
    {
        auto ho = random_adapted<T>(rng, F);
        Process<T> a(n, h, Klass::Raw), bb(n, h, Klass::Raw);
        for (int p = 0; p < n; ++p)
            for (int t = 1; t <= h; ++t) {
                T dv = b.Rt[p] == t ? T(1) : T(0);
                a(p, t) = ho(p, t) * b.G(p, t - 1) * dv;
                bb(p, t) = ho(p, t) * dv;
            }
        Process<T> M(n, h, Klass::Adapted);
        std::vector<T> ca(n), cb(n);
        for (int t = 1; t <= h; ++t) {
            auto ea = cond_expect(b.w(), F, column(a, t), t - 1);
            auto eb = cond_expect(b.w(), F, column(bb, t), t - 1);
            for (int p = 0; p < n; ++p) {
                T gp = b.G(p, t - 1);
                T d(0);
                if (Field<T>::positive(gp, tol)) d = (a(p, t) - ea[p] - eb[p] * b.m.inc(p, t)) / gp;
                M(p, t) = M(p, t - 1) + d;
            }
        }
        record_zero<T>(out, "null_class_hat", hat_transform(b, M), tol);
    }

    // dual Radon-Nikodym: (phi . D)^p = psi . D^p
    {
        auto phi = random_adapted<T>(rng, F, 0, 1, 2);
        auto psi = dual_rn_derivative(b.w(), F, phi, b.D, tol);
        auto lhs = dual_projection(b.w(), F, integrate(F, phi, b.D, tol, false), ProjKind::Predictable, tol);
        auto rhs = integrate(F, psi, b.Dp, tol);
        record_zero<T>(out, "dual_rn_duality", lhs - rhs, tol);
    }

    {
        auto U = random_adapted<T>(rng, F);
        for (int p = 0; p < n; ++p) U(p, 0) = T(0);
        record_zero<T>(out, "compensator_formula", g_compensator(b, U) - g_compensator_direct(b, U), tol);
    }

    {
        bool ok = true;
        double d = 0;
        for (auto kind : {ContractKind::PureEndowment, ContractKind::TermInsurance, ContractKind::Endowment,
                          ContractKind::LongevityBond}) {
            ContractSpec<T> s;
            s.kind = kind;
            s.term = term;
            s.g = g;
            s.K = random_adapted<T>(rng, F, 0, 4, 1);
            auto pd = price(b, s);
            ok = ok && all_zero(pd.residual, tol) && equal(pd.price, pd.direct, tol);
            d = std::max(d, max_abs(pd.residual));
        }
        record<T>(out, "contract_pricing", ok, d);
    }
}

template <class T>
Process<T> cumulative_sum(const Process<T>& H, const std::vector<Process<T>>& xi, const std::vector<Process<T>>& X,
                          const Process<T>& L, const Filtration& g, double tol) {
    Process<T> r = H;
    for (int p = 0; p < H.n; ++p)
        for (int t = 0; t <= H.h; ++t) r(p, t) -= H(p, 0);
    for (size_t i = 0; i < X.size(); ++i) r -= integrate(g, xi[i], X[i], tol);
    r -= L;
    return r;
}

template <class T>
void hedging_checks(std::mt19937_64& rng, const VerifyOptions& o, Outcomes& out) {
    auto md = random_hedging_model<T>(rng, std::min(o.max_horizon, 4), o.max_paths);
    md.space.tol = o.tol;
    Market<T> mk{enlarge(md.space, md.tau, md.marks), md.S};
    const auto& b = mk.bundle;
    const double tol = b.tol();
    const int term = 1 + static_cast<int>(rng() % b.h());
    auto hp = random_adapted<T>(rng, b.space.F);
    auto g = random_measurable<T>(rng, b.space.F, term);
    auto c = make_claim<T>(b, &hp, &g, term);
    auto r = risk_minimize(mk, c);
    const auto& St = r.prices[0];

    record_zero<T>(out, "hedging_residual", cumulative_sum(r.H, r.xi, r.prices, r.remaining, b.gfil, tol), tol);
    record_zero<T>(out, "hedging_orthogonality", predictable_bracket(b.w(), b.gfil, r.remaining, St), tol);
    auto dg = direct_g_gkw(mk, c, {St});
    Process<T> dd(b.n(), b.h());
    for (int p = 0; p < b.n(); ++p)
        for (int t = 1; t <= b.h(); ++t) dd(p, t) = (dg.theta[0](p, t) - r.xi[0](p, t)) * St.inc(p, t);
    record_zero<T>(out, "hedging_direct_gkw", dd + (dg.residual - r.remaining), tol);
    record_zero<T>(out, "hedging_value_formula", value_formula(b, c) - r.value, tol);

    auto di = drift_identity_defects(mk);
    double dmax = std::max({di.u_hat, di.s_hat, di.l_orth});
    record<T>(out, "drift_identities", dmax <= (Field<T>::exact ? 0.0 : tol), dmax);

    bool opt = true;
    double worst = 0;
    for (int k = 0; k < o.competitors; ++k) {
        auto eps = predictable_from(random_adapted<T>(rng, b.gfil));
        auto dv = random_adapted<T>(rng, b.gfil);
        for (int p = 0; p < b.n(); ++p) dv(p, b.h()) = T(0);
        Strategy<T> s;
        s.xi = {r.xi[0] + eps};
        s.eta = r.value + dv - mul(s.xi[0], St);
        auto rp = risk_process(b.w(), b.gfil, r.prices, s, r.payments, tol);
        for (size_t i = 0; i < rp.risk.v.size(); ++i) {
            double gap = Field<T>::to_double(r.risk.v[i] - rp.risk.v[i]);
            if (Field<T>::positive(T(r.risk.v[i] - rp.risk.v[i]), tol)) opt = false;
            worst = std::max(worst, gap);
        }
    }
    record<T>(out, "hedging_optimality", opt, worst);

    auto sp = endowment_strategy_split(mk, g, term);
    Process<T> C(b.n(), b.h(), Klass::Adapted);
    for (int p = 0; p < b.n(); ++p)
        for (int t = 1; t <= b.h(); ++t) C(p, t) = C(p, t - 1) + T(1) + (md.arrivals.inc(p, t) != T(0) ? T(1) : T(0));
    auto an = annuity_strategy_split(mk, C, term);
    double sd = std::max({sp.xi_defect, sp.L_defect, sp.identity_defect, an.xi_defect, an.L_defect, an.identity_defect});
    record<T>(out, "split_identities", sd <= (Field<T>::exact ? 0.0 : tol), sd);

    auto e0 = r.energy;
    auto s1 = securitized_hedge(mk, c, {Instrument::LongevityBond});
    auto s2 = securitized_hedge(mk, c, {Instrument::LongevityBond, Instrument::PureEndowment1});
    auto s3 = securitized_hedge(mk, c, {Instrument::PureEndowment1});
    bool mono = s1.energy <= e0 + tol && s3.energy <= e0 + tol && s2.energy <= s1.energy + tol &&
                s2.energy <= s3.energy + tol;
    auto res2 = cumulative_sum(s2.H, s2.xi, s2.prices, s2.remaining, b.gfil, tol);
    bool orth = true;
    for (const auto& X : s2.prices) orth = orth && all_zero(predictable_bracket(b.w(), b.gfil, s2.remaining, X), tol);
    record<T>(out, "securitization_monotone", mono && orth && all_zero(res2, tol), max_abs(res2));
}

std::uint64_t instance_seed(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::uint64_t s[2];
    seq.generate(reinterpret_cast<std::uint32_t*>(s), reinterpret_cast<std::uint32_t*>(s) + 4);
    return s[0] ^ (s[1] << 1);
}

template <class F>
std::vector<Outcomes> fan_out(int count, int workers, F&& job) {
    std::vector<Outcomes> res(count);
    int nw = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nw = std::min(nw, std::max(1, count));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) job(i, res[i]);
        });
    for (auto& t : pool) t.join();
    return res;
}

VerifyReport merge(const std::vector<Outcomes>& res, const VerifyOptions& o, const std::string& mode,
                   const std::vector<std::string>& names) {
    VerifyReport rep;
    rep.seed = o.seed;
    rep.count = o.count;
    rep.mode = mode;
    for (const auto& name : names) {
        CheckResult c;
        c.name = name;
        for (int i = 0; i < static_cast<int>(res.size()); ++i) {
            auto it = res[i].find(name);
            if (it == res[i].end() || !it->second.ran) continue;
            ++c.instances;
            c.max_defect = std::max(c.max_defect, it->second.defect);
            if (!it->second.pass) {
                ++c.failures;
                if (c.first_failure < 0) c.first_failure = i;
            }
        }
        c.pass = c.failures == 0;
        if (c.instances > 0) rep.checks.push_back(c);
    }
    return rep;
}

void record_error(Outcomes& out, const std::string& group) {
    out["error:" + group] = Outcome{true, false, 0};
}

}  // namespace

template <class T>
VerifyReport verify_all(const VerifyOptions& o) {
    auto res = fan_out(o.count, o.workers, [&](int i, Outcomes& out) {
        std::mt19937_64 rng(instance_seed(o.seed, i));
        RandomSpaceOptions so;
        so.max_horizon = o.max_horizon;
        so.max_paths = o.max_paths;
        try {
            auto b = random_bundle<T>(rng, so);
            b.space.tol = o.tol;
            bundle_checks(b, rng, o, out);
        } catch (const std::exception&) {
            record_error(out, "bundle");
        }
        if (o.hedging) {
            try {
                hedging_checks<T>(rng, o, out);
            } catch (const std::exception&) {
                record_error(out, "hedging");
            }
        }
    });
    auto names = check_names();
    names.push_back("error:bundle");
    names.push_back("error:hedging");
    return merge(res, o, Field<T>::exact ? "exact" : "float", names);
}

template <class T>
VerifyReport verify_bundle(const Bundle<T>& b, const VerifyOptions& o, const std::vector<std::string>& names) {
    auto res = fan_out(o.count, o.workers, [&](int i, Outcomes& out) {
        std::mt19937_64 rng(instance_seed(o.seed, i));
        try {
            bundle_checks(b, rng, o, out);
        } catch (const std::exception&) {
            record_error(out, "bundle");
        }
    });
    std::vector<std::string> keep;
    bool all = names.empty() || std::find(names.begin(), names.end(), "all") != names.end();
    for (const auto& n : check_names())
        if (all || std::find(names.begin(), names.end(), n) != names.end()) keep.push_back(n);
    for (const auto& n : names)
        if (n != "all" && std::find(check_names().begin(), check_names().end(), n) == check_names().end())
            throw Error(ErrorCode::ConfigError, "unknown check '" + n + "'");
    keep.push_back("error:bundle");
    return merge(res, o, Field<T>::exact ? "exact" : "float", keep);
}

template VerifyReport verify_all<Rational>(const VerifyOptions&);
template VerifyReport verify_all<double>(const VerifyOptions&);
template VerifyReport verify_bundle(const Bundle<Rational>&, const VerifyOptions&, const std::vector<std::string>&);
template VerifyReport verify_bundle(const Bundle<double>&, const VerifyOptions&, const std::vector<std::string>&);

}  // namespace enl
