#include "altkit/rational.h"

#include <cctype>
#include <cmath>
#include <string>

#include "altkit/errors.h"

namespace altkit {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!is_digits(s)) {
    throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
  }
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    Integer ez = parse_integer(exp_text, whole);
    if (!ez.fits_slong_p() || abs(ez) > 4096) {
      throw InvalidArgument("exponent out of range: '" + std::string(whole) + "'");
    }
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !is_digits(int_part)) ||
        (!frac_part.empty() && !is_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    frac_digits = static_cast<long>(frac_part.size());
  } else {
    if (!is_digits(s)) {
      throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
    }
    digits = std::string(s);
  }
  Rational value(Integer(digits, 10));
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0) {
    value *= ten_pow;
  } else {
    value /= ten_pow;
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InvalidArgument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash), text);
    Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) {
      throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (s.find_first_of(".eE") != std::string_view::npos) return parse_decimal(s, text);
  return Rational(parse_integer(s, text));
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value has no rational form");
  Rational q(x);
  q.canonicalize();
  return q;
}

Integer factorial(unsigned k) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), k);
  return out;
}

}  // namespace altkit
