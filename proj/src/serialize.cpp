#include "enl/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace enl {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ConfigError, (where.empty() ? "/" : where) + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) fail(where + "/" + it.key(), "unknown key");
}

int json_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

std::string json_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

std::vector<Rational> rational_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<Rational> v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(json_rational(j[i], where + "/" + std::to_string(i)));
    return v;
}

int json_time(const json& j, const std::string& where) {
    if (j.is_null() || (j.is_string() && (j == "inf" || j == "INF"))) return INF;
    return json_int(j, where);
}

ValueSpec parse_value(const json& j, const std::string& where) {
    ValueSpec v;
    if (j.is_object()) {
        allow_keys(j, where, {"asset"});
        if (!j.contains("asset")) fail(where, "expected {\"asset\": index}");
        v.kind = ValueSpec::Kind::Asset;
        v.asset = json_int(j["asset"], where + "/asset");
    } else if (j.is_array()) {
        if (!j.empty() && j[0].is_array()) {
            v.kind = ValueSpec::Kind::Series;
            for (size_t i = 0; i < j.size(); ++i) v.series.push_back(rational_list(j[i], where + "/" + std::to_string(i)));
        } else {
            v.kind = ValueSpec::Kind::PerPath;
            v.per_path = rational_list(j, where);
        }
    } else {
        v.kind = ValueSpec::Kind::Constant;
        v.constant = json_rational(j, where);
    }
    return v;
}

FactorKind parse_factor_kind(const std::string& s, const std::string& where) {
    for (auto k : {FactorKind::BernoulliWalk, FactorKind::BinomialStock, FactorKind::TrinomialStock})
        if (s == factor_kind_name(k)) return k;
    fail(where, "unknown factor kind '" + s + "'");
}

TauKind parse_tau_kind(const std::string& s, const std::string& where) {
    for (auto k : {TauKind::Independent, TauKind::Cox, TauKind::StoppingTime, TauKind::ConvexCombo, TauKind::MinScaled,
                   TauKind::LastPassage, TauKind::MinWithStopping, TauKind::GridSupported})
        if (s == tau_kind_name(k)) return k;
    fail(where, "unknown tau kind '" + s + "'");
}

ExplicitSpace parse_space(const json& j, const std::string& where) {
    allow_keys(j, where, {"horizon", "weights", "partitions", "labels", "tau", "marks", "assets"});
    ExplicitSpace s;
    if (!j.contains("horizon")) fail(where, "missing horizon");
    s.horizon = json_int(j["horizon"], where + "/horizon");
    if (!j.contains("weights")) fail(where, "missing weights");
    s.weights = rational_list(j["weights"], where + "/weights");
    const int n = static_cast<int>(s.weights.size());
    if (j.contains("partitions")) {
        try {
            s.partitions = j["partitions"].get<std::vector<std::vector<std::vector<int>>>>();
        } catch (const json::exception&) {
            fail(where + "/partitions", "expected an array of partitions");
        }
    } else if (j.contains("labels")) {
        std::vector<std::vector<int>> labels;
        try {
            labels = j["labels"].get<std::vector<std::vector<int>>>();
        } catch (const json::exception&) {
            fail(where + "/labels", "expected an array of label rows");
        }
        if (static_cast<int>(labels.size()) != s.horizon + 1) fail(where + "/labels", "need horizon + 1 rows");
        for (const auto& row : labels)
            if (static_cast<int>(row.size()) != n) fail(where + "/labels", "row length differs from weights");
        auto f = Filtration::from_labels(n, s.horizon, labels);
        for (int t = 0; t <= s.horizon; ++t) s.partitions.push_back(f.partition(t));
    } else {
        fail(where, "missing partitions or labels");
    }
    if (!j.contains("tau")) fail(where, "missing tau");
    const auto& jt = j["tau"];
    if (!jt.is_array() || static_cast<int>(jt.size()) != n) fail(where + "/tau", "expected one time per path");
    for (size_t i = 0; i < jt.size(); ++i) s.tau.push_back(json_time(jt[i], where + "/tau/" + std::to_string(i)));
    if (j.contains("marks")) {
        const auto& jm = j["marks"];
        if (!jm.is_array() || static_cast<int>(jm.size()) != n) fail(where + "/marks", "expected one mark per path");
        for (size_t i = 0; i < jm.size(); ++i) s.marks.push_back(json_int(jm[i], where + "/marks/" + std::to_string(i)));
    }
    if (j.contains("assets")) {
        const auto& ja = j["assets"];
        if (!ja.is_array()) fail(where + "/assets", "expected an array");
        for (size_t i = 0; i < ja.size(); ++i) {
            std::string wi = where + "/assets/" + std::to_string(i);
            if (!ja[i].is_array() || static_cast<int>(ja[i].size()) != n) fail(wi, "expected one row per path");
            std::vector<std::vector<Rational>> rows;
            for (size_t p = 0; p < ja[i].size(); ++p) {
                auto row = rational_list(ja[i][p], wi + "/" + std::to_string(p));
                if (static_cast<int>(row.size()) != s.horizon + 1) fail(wi + "/" + std::to_string(p), "need horizon + 1 values");
                rows.push_back(row);
            }
            s.assets.push_back(rows);
        }
    }
    return s;
}

}  // namespace

Rational json_rational(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number()) return parse_rational(j.dump());
    } catch (const std::exception&) {
        fail(where, "not a number: " + j.dump());
    }
    fail(where, "expected a number or a \"p/q\" string");
}

ContractKind parse_contract_kind(const std::string& s, const std::string& where) {
    for (auto k : {ContractKind::PureEndowment, ContractKind::TermInsurance, ContractKind::Endowment,
                   ContractKind::LongevityBond})
        if (s == contract_name(k)) return k;
    fail(where, "unknown contract kind '" + s + "'");
}

Instrument parse_instrument(const std::string& s, const std::string& where) {
    for (auto i : {Instrument::LongevityBond, Instrument::PureEndowment1})
        if (s == instrument_name(i)) return i;
    fail(where, "unknown instrument '" + s + "'");
}

ModelSpec parse_model_spec(const json& j, const std::string& where) {
    allow_keys(j, where, {"horizon", "factors", "tau", "path_budget"});
    ModelSpec m;
    if (!j.contains("horizon")) fail(where, "missing horizon");
    m.horizon = json_int(j["horizon"], where + "/horizon");
    if (j.contains("path_budget")) m.path_budget = json_int(j["path_budget"], where + "/path_budget");
    if (!j.contains("factors") || !j["factors"].is_array()) fail(where + "/factors", "expected an array of factors");
    for (size_t i = 0; i < j["factors"].size(); ++i) {
        const auto& jf = j["factors"][i];
        std::string wf = where + "/factors/" + std::to_string(i);
        allow_keys(jf, wf, {"kind", "p", "resolution", "up", "down", "s0", "jump", "p_move", "active"});
        FactorSpec f;
        if (!jf.contains("kind")) fail(wf, "missing kind");
        f.kind = parse_factor_kind(json_string(jf["kind"], wf + "/kind"), wf + "/kind");
        if (jf.contains("p")) f.p = json_rational(jf["p"], wf + "/p");
        if (jf.contains("resolution")) f.resolution = json_int(jf["resolution"], wf + "/resolution");
        if (jf.contains("up")) f.up = json_rational(jf["up"], wf + "/up");
        if (jf.contains("down")) f.down = json_rational(jf["down"], wf + "/down");
        if (jf.contains("s0")) f.s0 = json_rational(jf["s0"], wf + "/s0");
        if (jf.contains("jump")) f.jump = json_rational(jf["jump"], wf + "/jump");
        if (jf.contains("p_move")) f.p_move = json_rational(jf["p_move"], wf + "/p_move");
        if (jf.contains("active")) f.active = json_int(jf["active"], wf + "/active");
        m.factors.push_back(f);
    }
    if (!j.contains("tau")) fail(where, "missing tau");
    const auto& jt = j["tau"];
    std::string wt = where + "/tau";
    allow_keys(jt, wt, {"kind", "dist", "hazard", "level", "delay", "alpha", "a", "mu"});
    if (!jt.contains("kind")) fail(wt, "missing kind");
    m.tau.kind = parse_tau_kind(json_string(jt["kind"], wt + "/kind"), wt + "/kind");
    if (jt.contains("dist")) m.tau.dist = rational_list(jt["dist"], wt + "/dist");
    if (jt.contains("hazard")) m.tau.hazard = rational_list(jt["hazard"], wt + "/hazard");
    if (jt.contains("level")) m.tau.level = json_int(jt["level"], wt + "/level");
    if (jt.contains("delay")) m.tau.delay = json_int(jt["delay"], wt + "/delay");
    if (jt.contains("alpha")) m.tau.alpha = json_rational(jt["alpha"], wt + "/alpha");
    if (jt.contains("a")) m.tau.a = json_rational(jt["a"], wt + "/a");
    if (jt.contains("mu")) m.tau.mu = json_rational(jt["mu"], wt + "/mu");
    return m;
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, "byte " + std::to_string(e.byte) + ": malformed JSON");
    }
    allow_keys(j, "", {"name", "seed", "tol", "model", "space", "contracts", "hedging", "verify", "verify_count", "output"});
    Scenario s;
    if (j.contains("name")) s.name = json_string(j["name"], "/name");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("/seed", "expected a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tol")) s.tol = json_rational(j["tol"], "/tol").get_d();
    if (j.contains("model") == j.contains("space")) fail("", "exactly one of model or space is required");
    int horizon = 0;
    if (j.contains("model")) {
        s.model = parse_model_spec(j["model"], "/model");
        horizon = s.model->horizon;
    } else {
        s.space = parse_space(j["space"], "/space");
        horizon = s.space->horizon;
    }
    if (j.contains("contracts")) {
        const auto& jc = j["contracts"];
        if (!jc.is_array()) fail("/contracts", "expected an array");
        for (size_t i = 0; i < jc.size(); ++i) {
            std::string w = "/contracts/" + std::to_string(i);
            allow_keys(jc[i], w, {"kind", "term", "g", "K"});
            ContractEntry e;
            if (!jc[i].contains("kind")) fail(w, "missing kind");
            e.kind = parse_contract_kind(json_string(jc[i]["kind"], w + "/kind"), w + "/kind");
            if (!jc[i].contains("term")) fail(w, "missing term");
            e.term = json_int(jc[i]["term"], w + "/term");
            if (e.term < 1 || e.term > horizon) fail(w + "/term", "term outside 1..horizon");
            if (jc[i].contains("g")) e.g = parse_value(jc[i]["g"], w + "/g");
            if (jc[i].contains("K")) e.K = parse_value(jc[i]["K"], w + "/K");
            bool needs_g = e.kind == ContractKind::PureEndowment || e.kind == ContractKind::Endowment;
            bool needs_k = e.kind == ContractKind::TermInsurance || e.kind == ContractKind::Endowment;
            if (needs_g && e.g.kind == ValueSpec::Kind::None) fail(w, "missing g");
            if (needs_k && e.K.kind == ValueSpec::Kind::None) fail(w, "missing K");
            s.contracts.push_back(e);
        }
    }
    if (j.contains("hedging")) {
        const auto& jh = j["hedging"];
        allow_keys(jh, "/hedging", {"enabled", "instruments", "competitor_count", "contracts"});
        if (jh.contains("enabled")) {
            if (!jh["enabled"].is_boolean()) fail("/hedging/enabled", "expected a boolean");
            s.hedging.enabled = jh["enabled"].get<bool>();
        }
        if (jh.contains("instruments")) {
            if (!jh["instruments"].is_array() || jh["instruments"].size() > 2)
                fail("/hedging/instruments", "expected at most two instruments");
            for (size_t i = 0; i < jh["instruments"].size(); ++i) {
                std::string w = "/hedging/instruments/" + std::to_string(i);
                s.hedging.instruments.push_back(parse_instrument(json_string(jh["instruments"][i], w), w));
            }
        }
        if (jh.contains("competitor_count"))
            s.hedging.competitor_count = json_int(jh["competitor_count"], "/hedging/competitor_count");
        if (jh.contains("contracts")) {
            if (!jh["contracts"].is_array()) fail("/hedging/contracts", "expected an array");
            for (size_t i = 0; i < jh["contracts"].size(); ++i) {
                std::string w = "/hedging/contracts/" + std::to_string(i);
                int k = json_int(jh["contracts"][i], w);
                if (k < 0 || k >= static_cast<int>(s.contracts.size())) fail(w, "no such contract");
                s.hedging.contracts.push_back(k);
            }
        }
    }
    if (j.contains("verify")) {
        if (!j["verify"].is_array()) fail("/verify", "expected an array of check names");
        for (size_t i = 0; i < j["verify"].size(); ++i)
            s.verify.push_back(json_string(j["verify"][i], "/verify/" + std::to_string(i)));
    }
    if (j.contains("verify_count")) s.verify_count = json_int(j["verify_count"], "/verify_count");
    if (j.contains("output")) {
        const auto& jo = j["output"];
        allow_keys(jo, "/output", {"format", "path", "precision"});
        if (jo.contains("format")) {
            s.output.format = json_string(jo["format"], "/output/format");
            if (s.output.format != "csv" && s.output.format != "json") fail("/output/format", "expected csv or json");
        }
        if (jo.contains("path")) s.output.path = json_string(jo["path"], "/output/path");
        if (jo.contains("precision")) s.output.precision = json_int(jo["precision"], "/output/precision");
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + std::string(e.what()).substr(std::string("ConfigError: ").size()));
    }
}

template <class T>
static T to_scalar(const Rational& x) {
    if constexpr (std::is_same_v<T, Rational>)
        return x;
    else
        return x.get_d();
}

template <class T>
Model<T> scenario_model(const Scenario& sc) {
    if (sc.model) {
        ModelSpec spec = *sc.model;
        spec.tol = sc.tol;
        return build_model<T>(spec);
    }
    const auto& e = *sc.space;
    std::vector<T> w;
    for (const auto& x : e.weights) w.push_back(to_scalar<T>(x));
    Model<T> m;
    m.space = build_space<T>(w, e.partitions, e.horizon, sc.tol);
    m.tau = e.tau;
    m.marks = e.marks.empty() ? std::vector<int>(w.size(), 0) : e.marks;
    m.arrivals = Process<T>(m.space.n_paths(), e.horizon, Klass::Adapted);
    for (size_t i = 0; i < e.assets.size(); ++i) {
        Process<T> X(m.space.n_paths(), e.horizon, Klass::Adapted);
        for (int p = 0; p < X.n; ++p)
            for (int t = 0; t <= e.horizon; ++t) X(p, t) = to_scalar<T>(e.assets[i][p][t]);
        m.S.push_back(X);
        m.asset_names.push_back("asset_" + std::to_string(i));
    }
    return m;
}

template <class T>
ContractSpec<T> contract_spec(const ContractEntry& e, const Model<T>& m) {
    const int n = m.space.n_paths(), h = m.space.horizon();
    ContractSpec<T> s;
    s.kind = e.kind;
    s.term = e.term;
    auto asset = [&](int i) -> const Process<T>& {
        if (i < 0 || i >= static_cast<int>(m.S.size())) throw Error(ErrorCode::ConfigError, "no asset " + std::to_string(i));
        return m.S[i];
    };
    switch (e.g.kind) {
        case ValueSpec::Kind::None: break;
        case ValueSpec::Kind::Constant: s.g.assign(n, to_scalar<T>(e.g.constant)); break;
        case ValueSpec::Kind::PerPath:
            if (static_cast<int>(e.g.per_path.size()) != n) throw Error(ErrorCode::ConfigError, "g needs one value per path");
            for (const auto& x : e.g.per_path) s.g.push_back(to_scalar<T>(x));
            break;
        case ValueSpec::Kind::Asset: s.g = column(asset(e.g.asset), e.term); break;
        case ValueSpec::Kind::Series: throw Error(ErrorCode::ConfigError, "g must be a constant, per-path values or an asset");
    }
    switch (e.K.kind) {
        case ValueSpec::Kind::None: break;
        case ValueSpec::Kind::Constant:
            s.K = constant_process<T>(n, h, std::vector<T>(n, to_scalar<T>(e.K.constant)));
            s.K.klass = Klass::Adapted;
            break;
        case ValueSpec::Kind::Series:
            if (static_cast<int>(e.K.series.size()) != n) throw Error(ErrorCode::ConfigError, "K needs one row per path");
            s.K = Process<T>(n, h, Klass::Adapted);
            for (int p = 0; p < n; ++p) {
                if (static_cast<int>(e.K.series[p].size()) != h + 1)
                    throw Error(ErrorCode::ConfigError, "K rows need horizon + 1 values");
                for (int t = 0; t <= h; ++t) s.K(p, t) = to_scalar<T>(e.K.series[p][t]);
            }
            break;
        case ValueSpec::Kind::Asset: s.K = asset(e.K.asset); break;
        case ValueSpec::Kind::PerPath: throw Error(ErrorCode::ConfigError, "K must be a constant, a series or an asset");
    }
    return s;
}

template <class T>
json space_to_json(const Space<T>& s, const RandomTime& tau, const std::vector<int>& marks) {
    json j;
    j["horizon"] = s.horizon();
    j["weights"] = json::array();
    for (const auto& w : s.weights) j["weights"].push_back(scalar_str(w, -1));
    j["partitions"] = json::array();
    for (int t = 0; t <= s.horizon(); ++t) j["partitions"].push_back(s.F.partition(t));
    j["tau"] = json::array();
    for (int v : tau) v == INF ? j["tau"].push_back("inf") : j["tau"].push_back(v);
    if (!marks.empty()) j["marks"] = marks;
    return j;
}

template <class T>
std::string scalar_str(const T& x, int precision) {
    if (precision < 0) return Field<T>::str(x);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, Field<T>::to_double(x));
    return buf;
}

template <class T>
std::string process_table_csv(const std::vector<std::string>& names, const std::vector<const Process<T>*>& cols,
                              int precision) {
    std::ostringstream os;
    os << "path,time";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    if (cols.empty()) return os.str();
    for (int p = 0; p < cols[0]->n; ++p)
        for (int t = 0; t <= cols[0]->h; ++t) {
            os << p << ',' << t;
            for (const auto* c : cols) os << ',' << scalar_str((*c)(p, t), precision);
            os << '\n';
        }
    return os.str();
}

template <class T>
std::string strategy_csv(const Filtration& g, const HedgeResult<T>& r, int precision) {
    std::ostringstream os;
    os << "time,atom,asset,xi\n";
    for (int t = 1; t <= g.horizon(); ++t)
        for (int a = 0; a < g.n_atoms(t - 1); ++a) {
            int p = g.members(t - 1, a).front();
            for (size_t i = 0; i < r.xi.size(); ++i)
                os << t << ',' << a << ',' << r.assets[i] << ',' << scalar_str(r.xi[i](p, t), precision) << '\n';
        }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, path + ": cannot write");
    out << text;
}

#define ENL_INST(T)                                                                                        \
    template Model<T> scenario_model(const Scenario&);                                                     \
    template ContractSpec<T> contract_spec(const ContractEntry&, const Model<T>&);                         \
    template json space_to_json(const Space<T>&, const RandomTime&, const std::vector<int>&);              \
    template std::string scalar_str(const T&, int);                                                        \
    template std::string process_table_csv(const std::vector<std::string>&, const std::vector<const Process<T>*>&, \
                                           int);                                                           \
    template std::string strategy_csv(const Filtration&, const HedgeResult<T>&, int);

ENL_INST(Rational)
ENL_INST(double)

}  // namespace enl
