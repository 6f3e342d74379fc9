#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hclab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "3", "-2/7", "0.125", "1e-3". Decimal forms are converted exactly.
// num/den in lowest terms; mpq_class(num, den) alone does not canonicalize.
Rational ratio(const BigInt& num, const BigInt& den);

Rational parse_rational(std::string_view text);
double to_double(const Rational& q);
std::string to_string(const Rational& q);
// Natural log of a positive rational without overflowing doubles.
double log_rational(const Rational& q);
double log_bigint(const BigInt& z);
Rational pow_rational(const Rational& base, unsigned long exp);

}  // namespace hclab
