#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellit {

// Exact rational scalar used throughout the classical pipeline.
// Canonical form: reduced, positive denominator (maintained by GMP).
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p", "-p", "p/q". Whitespace is not accepted.
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational string");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Rational q(mpz_class(s), 1);
            return q;
        }
        mpz_class num(s.substr(0, slash));
        mpz_class den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational string: " + s);
    }
}

// Renders "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double rat_double(const Rational& q) { return q.get_d(); }

}  // namespace bellit
