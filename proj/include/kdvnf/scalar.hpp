#pragma once
// Scalar support shared by exact (rational) and floating evaluation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "kdvnf/errors.hpp"

namespace kdvnf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class S>
S abs_value(const S& x) {
    return x < 0 ? S(-x) : x;
}

template <class S>
S cube(const S& x) {
    return x * x * x;
}

// Exact binary value of a finite double.
inline Rational exact_rational(double d) {
    if (!std::isfinite(d)) throw DomainError("cannot convert a non-finite value to a rational");
    if (d == 0.0) return Rational(0);
    int e = 0;
    const double m = std::frexp(d, &e);
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    const int shift = e - 53;
    BigInt num(mant);
    if (shift >= 0) return Rational(num << shift);
    return Rational(num, BigInt(1) << (-shift));
}

template <class S>
S scalar_from_double(double d) {
    if constexpr (std::is_same_v<S, Rational>)
        return exact_rational(d);
    else
        return static_cast<S>(d);
}

inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

}  // namespace kdvnf
