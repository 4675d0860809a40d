#include "enl/runner.hpp"

#include <filesystem>
#include <random>
#include <sstream>

namespace enl {

namespace {

json csv_to_json(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    json j;
    j["columns"] = json::array();
    j["rows"] = json::array();
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (header)
            j["columns"] = cells;
        else
            j["rows"].push_back(cells);
        header = false;
    }
    return j;
}

struct Writer {
    std::string dir;
    std::string format;
    void table(const std::string& stem, const std::string& csv) const {
        if (dir.empty()) return;
        if (format == "json")
            write_text(dir + "/" + stem + ".json", csv_to_json(csv).dump(1) + "\n");
        else
            write_text(dir + "/" + stem + ".csv", csv);
    }
    void text(const std::string& name, const std::string& body) const {
        if (!dir.empty()) write_text(dir + "/" + name, body);
    }
};

json check(const std::string& name, bool pass, double defect) {
    return json{{"name", name}, {"pass", pass}, {"max_defect", defect}};
}

template <class T>
double max_abs(const Process<T>& x) {
    double m = 0;
    for (const auto& v : x.v) m = std::max(m, std::fabs(Field<T>::to_double(v)));
    return m;
}

template <class T>
Process<T> hedge_residual(const HedgeResult<T>& r, const Filtration& g, double tol) {
    Process<T> x = r.H;
    for (int p = 0; p < x.n; ++p)
        for (int t = 0; t <= x.h; ++t) x(p, t) -= r.H(p, 0);
    for (size_t i = 0; i < r.prices.size(); ++i) x -= integrate(g, r.xi[i], r.prices[i], tol);
    return x - r.remaining;
}

template <class T>
json hedge_contract(const Market<T>& mk, const Claim<T>& c, const Scenario& sc, std::uint64_t seed, int index,
                    const Writer& out, int& failures) {
    const auto& b = mk.bundle;
    const double tol = b.tol();
    json j;
    j["contract"] = index;
    auto r = risk_minimize(mk, c);
    const auto& St = r.prices[0];
    json checks = json::array();
    auto add = [&](const std::string& name, bool pass, double d) {
        checks.push_back(check(name, pass, d));
        if (!pass) ++failures;
    };
    auto res = hedge_residual(r, b.gfil, tol);
    add("residual", all_zero(res, tol), max_abs(res));
    auto orth = predictable_bracket(b.w(), b.gfil, r.remaining, St);
    add("orthogonality", all_zero(orth, tol), max_abs(orth));
    auto dg = direct_g_gkw(mk, c, {St});
    auto dres = dg.residual - r.remaining;
    add("direct_gkw", all_zero(dres, tol), max_abs(dres));
    auto vf = value_formula(b, c) - r.value;
    add("value_formula", all_zero(vf, tol), max_abs(vf));

    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(index));
    bool opt = true;
    for (int k = 0; k < sc.hedging.competitor_count; ++k) {
        auto eps = random_adapted<T>(rng, b.gfil);
        Process<T> pe(b.n(), b.h(), Klass::Predictable);
        for (int p = 0; p < b.n(); ++p)
            for (int t = 1; t <= b.h(); ++t) pe(p, t) = eps(p, t - 1);
        auto dv = random_adapted<T>(rng, b.gfil);
        for (int p = 0; p < b.n(); ++p) dv(p, b.h()) = T(0);
        Strategy<T> s;
        s.xi = {r.xi[0] + pe};
        s.eta = r.value + dv - mul(s.xi[0], St);
        auto rp = risk_process(b.w(), b.gfil, r.prices, s, r.payments, tol);
        for (size_t i = 0; i < rp.risk.v.size(); ++i)
            if (Field<T>::positive(T(r.risk.v[i] - rp.risk.v[i]), tol)) opt = false;
    }
    if (sc.hedging.competitor_count > 0) add("optimality", opt, 0);

    j["R_0"] = Field<T>::to_double(expectation(b.w(), column(r.risk, 0)));
    j["energy"] = r.energy;
    out.table("hedge_" + std::to_string(index), strategy_csv(b.gfil, r, sc.output.precision));

    json sets = json::array();
    sets.push_back(json{{"instruments", json::array()}, {"energy", r.energy}});
    double prev = r.energy;
    bool mono = true;
    std::vector<Instrument> chosen;
    for (auto ins : sc.hedging.instruments) {
        chosen.push_back(ins);
        auto s = securitized_hedge(mk, c, chosen);
        json names = json::array();
        for (auto x : chosen) names.push_back(instrument_name(x));
        sets.push_back(json{{"instruments", names}, {"energy", s.energy}, {"degenerate_atoms", s.degenerate_atoms}});
        mono = mono && s.energy <= prev + tol;
        prev = s.energy;
        auto sres = hedge_residual(s, b.gfil, tol);
        add("securitized_residual_" + std::to_string(chosen.size()), all_zero(sres, tol), max_abs(sres));
        out.table("hedge_" + std::to_string(index) + "_" + std::to_string(chosen.size()) + "_instruments",
                  strategy_csv(b.gfil, s, sc.output.precision));
    }
    if (!sc.hedging.instruments.empty()) add("securitization_monotone", mono, 0);
    j["instrument_sets"] = sets;
    j["checks"] = checks;
    j["pass"] = std::all_of(checks.begin(), checks.end(), [](const json& x) { return x["pass"].get<bool>(); });
    return j;
}

template <class T>
RunResult run_typed(const Scenario& sc, const RunOptions& o) {
    RunResult rr;
    json& rep = rr.report;
    Scenario s = sc;
    if (o.tol) s.tol = *o.tol;
    const std::uint64_t seed = o.seed ? *o.seed : s.seed;
    Writer out{o.out_dir.empty() ? s.output.path : o.out_dir, s.output.format};
    if (!out.dir.empty()) std::filesystem::create_directories(out.dir);
    rep["scenario"] = s.name;
    rep["mode"] = Field<T>::exact ? "exact" : "float";
    rep["seed"] = seed;
    rep["errors"] = json::array();
    auto error = [&](const std::string& stage, const std::exception& e) {
        rep["errors"].push_back(json{{"stage", stage}, {"message", e.what()}});
        ++rr.failures;
    };

    Model<T> model;
    Bundle<T> b;
    try {
        model = scenario_model<T>(s);
        b = enlarge(model.space, model.tau, model.marks);
    } catch (const std::exception& e) {
        error("build", e);
        rep["pass"] = false;
        out.text("summary.json", rep.dump(1) + "\n");
        return rr;
    }
    auto nb = nbar_report(b);
    auto ps = pseudo_stopping_check(b);
    rep["model"] = json{{"paths", b.n()},
                        {"horizon", b.h()},
                        {"assets", model.asset_names},
                        {"pseudo_stopping", ps.m_is_one},
                        {"nbar_is_pure", nb.nbar_is_pure},
                        {"nbar_equals_ng", nb.nbar_equals_ng},
                        {"condition_c", nb.condition_c},
                        {"ng_vanishes", all_zero(b.NG, b.tol())}};

    if (o.stages & kStageVerify) {
        try {
            VerifyOptions vo;
            vo.seed = seed;
            vo.count = o.count ? *o.count : (s.verify_count > 0 ? s.verify_count : 20);
            vo.tol = s.tol;
            vo.flip_ng_sign = o.flip_ng_sign;
            auto vr = verify_bundle(b, vo, s.verify);
            rep["verify"] = vr.to_json();
            for (const auto& c : vr.checks)
                if (!c.pass) ++rr.failures;
        } catch (const std::exception& e) {
            error("verify", e);
        }
    }

    if (o.stages & kStagePrice) {
        rep["contracts"] = json::array();
        for (size_t i = 0; i < s.contracts.size(); ++i) {
            try {
                auto spec = contract_spec<T>(s.contracts[i], model);
                auto pd = price(b, spec);
                bool ok = all_zero(pd.residual, b.tol()) && equal(pd.price, pd.direct, b.tol());
                if (!ok) ++rr.failures;
                rep["contracts"].push_back(json{{"index", i},
                                                {"kind", contract_name(spec.kind)},
                                                {"term", spec.term},
                                                {"price_0", scalar_str(pd.price(0, 0), s.output.precision)},
                                                {"residual_max", max_abs(pd.residual)},
                                                {"pass", ok}});
                std::vector<std::string> names{"price", "direct"};
                std::vector<const Process<T>*> cols{&pd.price, &pd.direct};
                for (const auto& [name, proc] : pd.parts) {
                    names.push_back(name);
                    cols.push_back(&proc);
                }
                names.push_back("residual");
                cols.push_back(&pd.residual);
                out.table("price_" + std::to_string(i) + "_" + contract_name(spec.kind),
                          process_table_csv(names, cols, s.output.precision));
            } catch (const std::exception& e) {
                error("price", e);
            }
        }
    }

    if ((o.stages & kStageHedge) && s.hedging.enabled) {
        rep["hedges"] = json::array();
        std::vector<int> which = s.hedging.contracts;
        if (which.empty())
            for (size_t i = 0; i < s.contracts.size(); ++i) which.push_back(static_cast<int>(i));
        Market<T> mk{b, model.S};
        auto ar = check_market_assumptions(model.S, b);
        rep["market_assumptions"] = json{{"martingale", ar.martingale},
                                         {"orthogonal_to_m", ar.orthogonal_to_m},
                                         {"no_jump_at_Rtilde", ar.no_jump_at_Rtilde}};
        for (int i : which) {
            try {
                auto spec = contract_spec<T>(s.contracts[i], model);
                auto c = contract_claim(b, spec);
                auto hj = hedge_contract(mk, c, s, seed, i, out, rr.failures);
                hj["kind"] = contract_name(spec.kind);
                rep["hedges"].push_back(hj);
            } catch (const std::exception& e) {
                error("hedge", e);
            }
        }
    }

    if (o.stages & kStageReport) {
        out.table("bundle", export_bundle_csv(b, s.output.precision));
        out.text("space.json", space_to_json(b.space, b.tau, b.marks).dump(1) + "\n");
    }
    rep["failures"] = rr.failures;
    rep["pass"] = rr.failures == 0;
    out.text("summary.json", rep.dump(1) + "\n");
    return rr;
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& o) {
    return o.exact ? run_typed<Rational>(sc, o) : run_typed<double>(sc, o);
}

RunResult run_random_verify(const RunOptions& o) {
    VerifyOptions vo;
    vo.seed = o.seed ? *o.seed : 0;
    vo.count = o.count ? *o.count : 50;
    if (o.tol) vo.tol = *o.tol;
    vo.flip_ng_sign = o.flip_ng_sign;
    auto vr = o.exact ? verify_all<Rational>(vo) : verify_all<double>(vo);
    RunResult rr;
    rr.report = vr.to_json();
    for (const auto& c : vr.checks)
        if (!c.pass) ++rr.failures;
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        write_text(o.out_dir + "/verify.json", rr.report.dump(1) + "\n");
    }
    return rr;
}

}  // namespace enl
