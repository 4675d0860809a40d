#include "enl/capi.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <variant>

#include "enl/runner.hpp"

using namespace enl;

struct enl_scenario {
    Scenario sc;
};

template <class T>
struct TypedModel {
    Model<T> model;
    Bundle<T> bundle;
};

struct enl_model {
    Scenario sc;
    std::variant<TypedModel<Rational>, TypedModel<double>> m;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class F>
int guard(F&& f) {
    try {
        last_error.clear();
        f();
        return ENL_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        last_error = e.what();
        return ENL_E_INTERNAL;
    }
}

RunOptions convert(const enl_run_options* o) {
    RunOptions r;
    if (!o) return r;
    r.exact = o->exact != 0;
    if (o->tol >= 0) r.tol = o->tol;
    if (o->has_seed) r.seed = o->seed;
    if (o->count > 0) r.count = o->count;
    if (o->out_dir) r.out_dir = o->out_dir;
    r.stages = o->stages;
    r.flip_ng_sign = o->flip_ng_sign != 0;
    return r;
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

void enl_run_options_init(enl_run_options* o) {
    if (!o) return;
    o->exact = 1;
    o->tol = -1;
    o->has_seed = 0;
    o->seed = 0;
    o->count = 0;
    o->out_dir = nullptr;
    o->stages = ENL_STAGE_ALL;
    o->flip_ng_sign = 0;
}

const char* enl_last_error(void) { return last_error.c_str(); }

const char* enl_status_name(int status) {
    if (status == ENL_OK) return "Ok";
    if (status == ENL_E_INTERNAL) return "Internal";
    if (status < 0 || status > ENL_E_INVALID_ARGUMENT) return "Unknown";
    return error_name(static_cast<ErrorCode>(status));
}

void enl_string_free(char* s) { std::free(s); }

int enl_scenario_parse(const char* text, enl_scenario** out) {
    return guard([&] {
        require(text && out, "null argument");
        *out = new enl_scenario{parse_scenario(text)};
    });
}

int enl_scenario_load(const char* path, enl_scenario** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = new enl_scenario{load_scenario(path)};
    });
}

void enl_scenario_free(enl_scenario* s) { delete s; }

int enl_scenario_run(const enl_scenario* s, const enl_run_options* o, char** report, int* failures) {
    return guard([&] {
        require(s && report && failures, "null argument");
        auto r = run_scenario(s->sc, convert(o));
        *report = dup(r.report.dump(1));
        *failures = r.failures;
    });
}

int enl_verify_random(const enl_run_options* o, char** report, int* failures) {
    return guard([&] {
        require(report && failures, "null argument");
        auto r = run_random_verify(convert(o));
        *report = dup(r.report.dump(1));
        *failures = r.failures;
    });
}

int enl_model_build(const enl_scenario* s, int exact, enl_model** out) {
    return guard([&] {
        require(s && out, "null argument");
        auto build = [&](auto tag) {
            using T = decltype(tag);
            TypedModel<T> tm;
            tm.model = scenario_model<T>(s->sc);
            tm.bundle = enlarge(tm.model.space, tm.model.tau, tm.model.marks);
            return tm;
        };
        if (exact)
            *out = new enl_model{s->sc, build(Rational())};
        else
            *out = new enl_model{s->sc, build(0.0)};
    });
}

void enl_model_free(enl_model* m) { delete m; }

int enl_model_shape(const enl_model* m, int* paths, int* horizon, int* assets) {
    return guard([&] {
        require(m && paths && horizon && assets, "null argument");
        std::visit(
            [&](const auto& tm) {
                *paths = tm.bundle.n();
                *horizon = tm.bundle.h();
                *assets = static_cast<int>(tm.model.S.size());
            },
            m->m);
    });
}

int enl_model_bundle_csv(const enl_model* m, int precision, char** csv) {
    return guard([&] {
        require(m && csv, "null argument");
        std::visit([&](const auto& tm) { *csv = dup(export_bundle_csv(tm.bundle, precision)); }, m->m);
    });
}

int enl_model_survival(const enl_model* m, int path, int t, double* value) {
    return guard([&] {
        require(m && value, "null argument");
        std::visit(
            [&](const auto& tm) {
                if (path < 0 || path >= tm.bundle.n()) throw Error(ErrorCode::InvalidArgument, "path out of range");
                if (t < 0 || t > tm.bundle.h()) throw Error(ErrorCode::TimeOutOfRange, "time out of range");
                *value = Field<std::decay_t<decltype(tm.bundle.G(0, 0))>>::to_double(tm.bundle.G(path, t));
            },
            m->m);
    });
}

int enl_model_price(const enl_model* m, int index, int precision, char** out) {
    return guard([&] {
        require(m && out, "null argument");
        if (index < 0 || index >= static_cast<int>(m->sc.contracts.size()))
            throw Error(ErrorCode::InvalidArgument, "no such contract");
        std::visit(
            [&](const auto& tm) {
                auto spec = contract_spec(m->sc.contracts[index], tm.model);
                auto pd = price(tm.bundle, spec);
                json j;
                j["kind"] = contract_name(pd.kind);
                j["term"] = pd.term;
                j["price_0"] = scalar_str(pd.price(0, 0), precision);
                j["residual_zero"] = all_zero(pd.residual, tm.bundle.tol());
                std::vector<std::string> names{"price"};
                std::vector<const std::decay_t<decltype(pd.price)>*> cols{&pd.price};
                for (const auto& [name, proc] : pd.parts) {
                    names.push_back(name);
                    cols.push_back(&proc);
                }
                j["table"] = process_table_csv(names, cols, precision);
                *out = dup(j.dump(1));
            },
            m->m);
    });
}

}  // extern "C"
