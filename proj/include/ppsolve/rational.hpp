#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ppsolve {

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Number of bits of |m|, i.e. ceil(log2(|m| + 1)); zero for zero.
std::size_t bits(const Integer& m);

/// bits(numerator) + bits(denominator).
std::size_t bit_size(const Rational& r);

/// Parses "3", "0.75", "3/4" (optionally signed) exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "a/b", or "a" for integers.
std::string to_string(const Rational& r);

/// Decimal expansion truncated toward zero after `digits` fractional digits.
std::string to_decimal(const Rational& r, int digits);

Integer floor(const Rational& r);

/// 2^k for any integer k.
Rational pow2(long k);

double to_double(const Rational& r);

}  // namespace ppsolve
