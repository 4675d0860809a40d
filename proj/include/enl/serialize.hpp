#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "enl/contracts.hpp"
#include "enl/hedging.hpp"
#include "enl/models.hpp"

namespace enl {

using json = nlohmann::json;

// Numbers may be JSON numbers or strings ("p/q", "0.125", "1e-3"); decimals are read exactly.
Rational json_rational(const json& j, const std::string& where);

struct ExplicitSpace {
    int horizon = 0;
    std::vector<Rational> weights;
    std::vector<std::vector<std::vector<int>>> partitions;
    RandomTime tau;
    std::vector<int> marks;
    std::vector<std::vector<std::vector<Rational>>> assets;  // assets[i][path][t]
};

// A payoff ingredient: a constant, one value per path, a per-path time series, or an asset price.
struct ValueSpec {
    enum class Kind { None, Constant, PerPath, Series, Asset } kind = Kind::None;
    Rational constant;
    std::vector<Rational> per_path;
    std::vector<std::vector<Rational>> series;  // [path][t]
    int asset = -1;
};

struct ContractEntry {
    ContractKind kind = ContractKind::PureEndowment;
    int term = 1;
    ValueSpec g, K;
};

struct HedgingSpec {
    bool enabled = false;
    std::vector<Instrument> instruments;  // nested sets {}, {first}, {first, second} are all reported
    int competitor_count = 0;
    std::vector<int> contracts;           // indices into the contract list; empty means all
};

struct OutputSpec {
    std::string format = "csv";
    std::string path;
    int precision = -1;  // digits after the point; -1 prints exact values
};

struct Scenario {
    std::string name = "scenario";
    std::optional<ModelSpec> model;
    std::optional<ExplicitSpace> space;
    std::vector<ContractEntry> contracts;
    HedgingSpec hedging;
    std::vector<std::string> verify;
    int verify_count = 0;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    OutputSpec output;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

ModelSpec parse_model_spec(const json& j, const std::string& where);
ContractKind parse_contract_kind(const std::string& s, const std::string& where);
Instrument parse_instrument(const std::string& s, const std::string& where);

// Builds the model of a scenario in the requested scalar.
template <class T>
Model<T> scenario_model(const Scenario& sc);

template <class T>
ContractSpec<T> contract_spec(const ContractEntry& e, const Model<T>& m);

template <class T>
json space_to_json(const Space<T>& s, const RandomTime& tau, const std::vector<int>& marks);

template <class T>
std::string scalar_str(const T& x, int precision);

// path,time,<names...>
template <class T>
std::string process_table_csv(const std::vector<std::string>& names, const std::vector<const Process<T>*>& cols,
                              int precision);

// time,atom,asset,xi with atoms of the enlarged filtration at time - 1
template <class T>
std::string strategy_csv(const Filtration& g, const HedgeResult<T>& r, int precision);

void write_text(const std::string& path, const std::string& text);

}  // namespace enl
