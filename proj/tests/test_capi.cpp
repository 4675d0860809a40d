// Exercises the shared library through its C interface only.
#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <string>

#include "enl/capi.h"

namespace {

const char* kW4 = R"({
  "name": "w4",
  "space": {
    "horizon": 2,
    "weights": ["1/4", "1/4", "1/4", "1/4"],
    "partitions": [[[0, 1, 2, 3]], [[0, 1], [2, 3]], [[0], [1], [2], [3]]],
    "tau": [1, 2, 2, "inf"]
  },
  "contracts": [{"kind": "term_insurance", "term": 2, "K": 1}],
  "verify": ["ng_martingale", "representation_residual"],
  "verify_count": 4
})";

struct Owned {
    char* s = nullptr;
    ~Owned() { enl_string_free(s); }
};

struct ScenarioHandle {
    enl_scenario* p = nullptr;
    ~ScenarioHandle() { enl_scenario_free(p); }
};

struct ModelHandle {
    enl_model* p = nullptr;
    ~ModelHandle() { enl_model_free(p); }
};

}  // namespace

TEST_CASE("status names and defaults") {
    CHECK(std::string(enl_status_name(ENL_OK)) == "Ok");
    CHECK(std::string(enl_status_name(ENL_E_CONFIG)) == "ConfigError");
    CHECK(std::string(enl_status_name(ENL_E_ASSUMPTION_VIOLATED)) == "AssumptionViolated");
    CHECK(std::string(enl_status_name(12345)) == "Unknown");
    enl_run_options o;
    enl_run_options_init(&o);
    CHECK(o.exact == 1);
    CHECK(o.stages == ENL_STAGE_ALL);
    CHECK(o.tol < 0);
}

TEST_CASE("parse errors carry a location") {
    ScenarioHandle s;
    CHECK(enl_scenario_parse("{\"space\": {", &s.p) == ENL_E_CONFIG);
    CHECK(s.p == nullptr);
    CHECK(std::string(enl_last_error()).find("byte") != std::string::npos);
    CHECK(enl_scenario_parse(R"({"space": {"horizon": 1, "weights": [1], "partitions": [[[0]], [[0]]], "tau": [1]},
                                 "contracts": [{"kind": "annuity", "term": 1}]})",
                             &s.p) == ENL_E_CONFIG);
    CHECK(std::string(enl_last_error()).find("/contracts/0/kind") != std::string::npos);
    CHECK(enl_scenario_load("/nonexistent/scenario.json", &s.p) == ENL_E_CONFIG);
    CHECK(enl_scenario_parse(nullptr, &s.p) == ENL_E_INVALID_ARGUMENT);
}

TEST_CASE("model handle in both arithmetics") {
    ScenarioHandle s;
    REQUIRE(enl_scenario_parse(kW4, &s.p) == ENL_OK);
    for (int exact : {1, 0}) {
        ModelHandle m;
        REQUIRE(enl_model_build(s.p, exact, &m.p) == ENL_OK);
        int paths = 0, horizon = 0, assets = -1;
        REQUIRE(enl_model_shape(m.p, &paths, &horizon, &assets) == ENL_OK);
        CHECK(paths == 4);
        CHECK(horizon == 2);
        CHECK(assets == 0);
        double g = 0;
        REQUIRE(enl_model_survival(m.p, 0, 1, &g) == ENL_OK);
        CHECK(g == 0.5);
        CHECK(enl_model_survival(m.p, 0, 3, &g) == ENL_E_TIME_OUT_OF_RANGE);
        CHECK(enl_model_survival(m.p, 9, 1, &g) == ENL_E_INVALID_ARGUMENT);
        Owned csv;
        REQUIRE(enl_model_bundle_csv(m.p, -1, &csv.s) == ENL_OK);
        CHECK(std::string(csv.s).rfind("path,time,G,Gtilde,m,dNG,dNGbar", 0) == 0);
        Owned pj;
        REQUIRE(enl_model_price(m.p, 0, -1, &pj.s) == ENL_OK);
        auto j = nlohmann::json::parse(pj.s);
        CHECK(j["kind"] == "term_insurance");
        CHECK(j["residual_zero"] == true);
        if (exact) CHECK(j["price_0"] == "3/4");
        CHECK(enl_model_price(m.p, 1, -1, &pj.s) == ENL_E_INVALID_ARGUMENT);
    }
}

TEST_CASE("scenario run reports checks and failures") {
    ScenarioHandle s;
    REQUIRE(enl_scenario_parse(kW4, &s.p) == ENL_OK);
    enl_run_options o;
    enl_run_options_init(&o);
    o.stages = ENL_STAGE_VERIFY | ENL_STAGE_PRICE;
    Owned report;
    int failures = -1;
    REQUIRE(enl_scenario_run(s.p, &o, &report.s, &failures) == ENL_OK);
    CHECK(failures == 0);
    auto j = nlohmann::json::parse(report.s);
    CHECK(j["pass"] == true);
    CHECK(j["verify"]["checks"].size() == 2);
    CHECK(j["contracts"][0]["price_0"] == "3/4");
}

TEST_CASE("hedging with S = m is reported as a failure") {
    const char* text = R"({
      "space": {
        "horizon": 2,
        "weights": ["1/4", "1/4", "1/4", "1/4"],
        "partitions": [[[0, 1, 2, 3]], [[0, 1], [2, 3]], [[0], [1], [2], [3]]],
        "tau": [1, 2, 2, "inf"],
        "assets": [[[1, 1, "1/2"], [1, 1, "3/2"], [1, 1, 1], [1, 1, 1]]]
      },
      "contracts": [{"kind": "term_insurance", "term": 2, "K": 1}],
      "hedging": {"enabled": true}
    })";
    ScenarioHandle s;
    REQUIRE(enl_scenario_parse(text, &s.p) == ENL_OK);
    enl_run_options o;
    enl_run_options_init(&o);
    o.stages = ENL_STAGE_HEDGE;
    Owned report;
    int failures = 0;
    REQUIRE(enl_scenario_run(s.p, &o, &report.s, &failures) == ENL_OK);
    CHECK(failures > 0);
    CHECK(std::string(report.s).find("AssumptionViolated") != std::string::npos);
}

TEST_CASE("random verification is reproducible") {
    enl_run_options o;
    enl_run_options_init(&o);
    o.has_seed = 1;
    o.seed = 17;
    o.count = 6;
    Owned a, b;
    int fa = -1, fb = -1;
    REQUIRE(enl_verify_random(&o, &a.s, &fa) == ENL_OK);
    REQUIRE(enl_verify_random(&o, &b.s, &fb) == ENL_OK);
    CHECK(fa == 0);
    CHECK(std::string(a.s) == std::string(b.s));
    o.flip_ng_sign = 1;
    Owned c;
    int fc = 0;
    REQUIRE(enl_verify_random(&o, &c.s, &fc) == ENL_OK);
    CHECK(fc > 0);
}
