#include "hclab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace hclab {

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return q;
  }
  // Decimal with optional exponent: mantissa digits / 10^k * 10^e.
  std::size_t epos = s.find_first_of("eE");
  long exp10 = 0;
  std::string mant = s.substr(0, epos);
  if (epos != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(epos + 1), &used);
      if (used != s.size() - epos - 1) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + s + "'");
    }
  }
  bool neg = !mant.empty() && (mant[0] == '-' || mant[0] == '+');
  if (neg && mant[0] == '+') neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant.erase(0, 1);
  std::size_t dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad number '" + s + "'");
  BigInt num(digits, 10);
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational q = exp10 >= 0 ? Rational(num * ten_pow) : ratio(num, ten_pow);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_string(const Rational& q) { return q.get_str(); }

double log_bigint(const BigInt& z) {
  if (z <= 0) throw std::domain_error("log of non-positive integer");
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

double log_rational(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  return log_bigint(q.get_num()) - log_bigint(q.get_den());
}

Rational pow_rational(const Rational& base, unsigned long exp) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), exp);
  Rational q = ratio(n, d);
  q.canonicalize();
  return q;
}

}  // namespace hclab
