#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace enl {

using Rational = mpq_class;

enum class ErrorCode {
    Ok = 0,
    NonRefiningFiltration,
    BadWeights,
    TimeOutOfRange,
    MeasurabilityError,
    NotMartingale,
    DomainError,
    TermOutOfRange,
    AssumptionViolated,
    NotAdmissible,
    BudgetExceeded,
    DegenerateModel,
    ConfigError,
    InvalidArgument,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Scalar traits. Rationals compare exactly; doubles within a tolerance.
template <class T>
struct Field;

template <>
struct Field<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& x, double) { return sgn(x) == 0; }
    static bool positive(const Rational& x, double) { return sgn(x) > 0; }
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational from_int(long v) { return Rational(v); }
    static Rational parse(const std::string& s);
    static std::string str(const Rational& x) { return x.get_str(); }
    static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct Field<double> {
    static constexpr bool exact = false;
    static bool is_zero(double x, double tol) { return std::fabs(x) <= tol; }
    static bool positive(double x, double tol) { return x > tol; }
    static double to_double(double x) { return x; }
    static double from_int(long v) { return static_cast<double>(v); }
    static double parse(const std::string& s);
    static std::string str(double x);
    static double abs(double x) { return std::fabs(x); }
};

// num/den in canonical form; mpq_class(num, den) alone does not reduce.
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "p/q", integers and decimals ("0.125", "-3e-2") are all accepted.
Rational parse_rational(const std::string& s);

// a/b with the 0/0 := 0 convention; x/0 for x != 0 is also mapped to 0.
template <class T>
T safe_div(const T& a, const T& b, double tol) {
    if (Field<T>::is_zero(b, tol)) return T(0);
    return a / b;
}

}  // namespace enl
