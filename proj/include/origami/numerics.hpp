#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace origami::numerics {

namespace mp = boost::multiprecision;

// Exact rationals (GMP) and arbitrary-precision floats (MPFR). Expression
// templates are switched off so `auto`, std::min/max and ternaries behave
// like they do for built-in arithmetic types.
using Integer  = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Real     = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

namespace detail {

inline unsigned& digits_ref() {
    static unsigned digits = 0;
    return digits;
}

inline void apply_precision(unsigned digits) {
    digits_ref() = digits;
    Real::default_precision(digits);
}

// Make sure MPFR runs at the library default before the first Real is built.
inline bool bootstrap() {
    if (detail::digits_ref() == 0) apply_precision(50);
    return true;
}
inline const bool bootstrapped = bootstrap();

} // namespace detail

// Global working precision in decimal digits. Every Real constructed after a
// set_precision() call carries the new precision; existing values keep theirs.
inline unsigned precision() {
    detail::bootstrap();
    return detail::digits_ref();
}

inline void set_precision(unsigned digits) {
    if (digits < 30)
        throw std::invalid_argument("precision must be at least 30 decimal digits, got " +
                                    std::to_string(digits));
    detail::apply_precision(digits);
}

// Honors ORIGAMI_PRECISION when set; malformed or out-of-range values are
// reported by throwing, callers decide how loud to be.
inline void set_precision_from_env() {
    const char* env = std::getenv("ORIGAMI_PRECISION");
    if (!env || !*env) return;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || v < 30 || v > 1000000)
        throw std::invalid_argument(std::string("ORIGAMI_PRECISION must be an integer >= 30, got '") +
                                    env + "'");
    set_precision(static_cast<unsigned>(v));
}

inline Real to_real(const Rational& q) {
    detail::bootstrap();
    return Real(q); // single correctly-rounded conversion at current precision
}

inline Real pow10(long e) {
    return mp::pow(Real(10), static_cast<int>(e));
}

// Mixed absolute/relative comparison band. Both knobs default to
// 10^(10 - precision): ten guard digits below the working precision.
struct Tolerance {
    Real eps_abs;
    Real eps_rel;
};

inline Tolerance default_tolerance() {
    static std::map<unsigned, Tolerance> cache;
    unsigned d = precision();
    auto it = cache.find(d);
    if (it == cache.end()) {
        Real eps = pow10(10 - static_cast<long>(d));
        it = cache.emplace(d, Tolerance{eps, eps}).first;
    }
    return it->second;
}

inline bool real_near(const Real& a, const Real& b, const Tolerance& tol = default_tolerance()) {
    Real scale = (std::max)(mp::abs(a), mp::abs(b));
    return mp::abs(a - b) <= tol.eps_abs + tol.eps_rel * scale;
}

inline Real pi() {
    static std::map<unsigned, Real> cache;
    unsigned d = precision();
    auto it = cache.find(d);
    if (it == cache.end()) {
        Real v;
        mpfr_const_pi(v.backend().data(), MPFR_RNDN);
        it = cache.emplace(d, v).first;
    }
    return it->second;
}

// asin clamped against arguments that drift past +-1 by rounding.
inline Real asin_clamped(const Real& x) {
    if (x >= 1) return pi() / 2;
    if (x <= -1) return -pi() / 2;
    return mp::asin(x);
}

// Parses "3", "-12", "2.75", ".5" or "23/8" into an exact Rational.
// Used by the script lexer and the CLI so both agree on number syntax.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&] { return std::invalid_argument("malformed number '" + text + "'"); };
    if (text.empty()) throw bad();

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den[0] == '-') throw bad();
        try {
            Integer n(num), d(den);
            if (d == 0) throw bad();
            return Rational(n) / Rational(d);
        } catch (const std::runtime_error&) {
            throw bad();
        }
    }

    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    std::size_t i = 0;
    if (text[i] == '-' || text[i] == '+') {
        if (text[i] == '-') digits += '-';
        ++i;
    }
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) throw bad();
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw bad();
        }
    }
    if (!seen_digit) throw bad();
    Integer n(digits);
    Integer den = 1;
    for (long k = 0; k < frac_digits; ++k) den *= 10;
    return Rational(n) / Rational(den);
}

// Fixed report formatting: 12 significant digits, locale-independent.
inline std::string format_real(const Real& x, unsigned digits = 12) {
    return x.str(digits);
}

} // namespace origami::numerics
