#include "fmlab/bigint.hpp"

#include <cmath>
#include <stdexcept>
#include <gmp.h>
#include <mpfr.h>

namespace fmlab {

Rational exact_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("exact_rational: non-finite input");
    Rational r;
    mpq_set_d(r.backend().data(), x);
    return r;
}

HighFloat to_high(const BigInt& v) {
    HighFloat r;
    mpfr_set_z(r.backend().data(), v.backend().data(), MPFR_RNDN);
    return r;
}

HighFloat to_high(const Rational& v) {
    HighFloat r;
    mpfr_set_q(r.backend().data(), v.backend().data(), MPFR_RNDN);
    return r;
}

BigInt factorial(unsigned n) {
    BigInt r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

BigInt binomial(unsigned n, unsigned k) {
    BigInt r;
    if (k > n) return r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return r;
}

}  // namespace fmlab
