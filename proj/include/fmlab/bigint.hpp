#pragma once
// Arbitrary precision number types shared by all modules.
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>

namespace fmlab {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// ~60 decimal digits; used for eigenvector refinement and Bessel series.
using HighFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>,
                                                boost::multiprecision::et_off>;

/// Exact rational value of a finite double (doubles are dyadic rationals).
Rational exact_rational(double x);

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(const HighFloat& v) { return v.convert_to<double>(); }

HighFloat to_high(const BigInt& v);
HighFloat to_high(const Rational& v);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

}  // namespace fmlab
