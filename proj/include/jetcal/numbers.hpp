#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace jetcal {

// Exact arithmetic everywhere: coefficients are arbitrary-precision rationals,
// so no invariant computation ever sees rounding.
using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational(long long num, long long den = 1) {
    return Rational(Integer(num), Integer(den));
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Integer powers of rationals. The caller guards base == 0 with n < 0.
inline Rational rational_pow(const Rational& base, long long n) {
    using boost::multiprecision::pow;
    if (n == 0) return Rational(1);
    const unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
    Integer num = pow(numerator(base), k);
    Integer den = pow(denominator(base), k);
    return n > 0 ? Rational(num, den) : Rational(den, num);
}

}  // namespace jetcal
