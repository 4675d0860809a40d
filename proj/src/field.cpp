#include "enl/field.hpp"

#include <cstdio>
#include <sstream>

namespace enl {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::NonRefiningFiltration: return "NonRefiningFiltration";
        case ErrorCode::BadWeights: return "BadWeights";
        case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
        case ErrorCode::MeasurabilityError: return "MeasurabilityError";
        case ErrorCode::NotMartingale: return "NotMartingale";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::TermOutOfRange: return "TermOutOfRange";
        case ErrorCode::AssumptionViolated: return "AssumptionViolated";
        case ErrorCode::NotAdmissible: return "NotAdmissible";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::DegenerateModel: return "DegenerateModel";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '_') s.push_back(c);
    if (s.empty()) throw Error(ErrorCode::ConfigError, "empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        try {
            mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) throw Error(ErrorCode::ConfigError, "zero denominator in '" + raw + "'");
            Rational q(num, den);
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::ConfigError, "bad rational '" + raw + "'");
        }
    }
    // decimal with optional exponent, converted exactly
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    std::string digits;
    long frac = 0;
    bool dot = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.') {
            if (dot) throw Error(ErrorCode::ConfigError, "bad number '" + raw + "'");
            dot = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            digits.push_back(s[i]);
            if (dot) ++frac;
        } else {
            throw Error(ErrorCode::ConfigError, "bad number '" + raw + "'");
        }
    }
    if (digits.empty()) throw Error(ErrorCode::ConfigError, "bad number '" + raw + "'");
    long ex = 0;
    if (i < s.size()) {
        try {
            ex = std::stol(s.substr(i + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "bad exponent in '" + raw + "'");
        }
    }
    ex -= frac;
    mpz_class num(digits), scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(ex < 0 ? -ex : ex));
    Rational q = ex < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

Rational Field<Rational>::parse(const std::string& s) { return parse_rational(s); }

double Field<double>::parse(const std::string& s) { return parse_rational(s).get_d(); }

std::string Field<double>::str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace enl
