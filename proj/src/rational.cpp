#include "lrswap/rational.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace lrswap {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text)) throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{}) throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("empty number");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());

  mpz_class value(digits.empty() ? std::string("0") : digits, 10);
  Rational r(value);
  if (exponent != 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0)
      r /= Rational(scale);
    else
      r *= Rational(scale);
  }
  if (negative) r = -r;
  r.canonicalize();
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::invalid_argument("cannot format double");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace lrswap
