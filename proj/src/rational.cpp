#include "cachegap/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace cachegap {

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigFloat to_bigfloat(const Rational& q) {
  return BigFloat(numerator(q)) / BigFloat(denominator(q));
}

Rational pow_rational(const Rational& q, unsigned long e) {
  using boost::multiprecision::pow;
  if (e == 0) return Rational(1);
  BigInt num = pow(numerator(q), static_cast<unsigned>(e));
  BigInt den = pow(denominator(q), static_cast<unsigned>(e));
  return Rational(num, den);
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = (s.front() == '-');
    s.erase(s.begin());
  }

  Rational value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("bad rational literal: " + text);
    BigInt d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    value = Rational(BigInt(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    if (!all_digits(whole) || !all_digits(frac))
      throw std::invalid_argument("bad decimal literal: " + text);
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(BigInt(whole) * scale + BigInt(frac), scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("bad integer literal: " + text);
    value = Rational(BigInt(s));
  }
  return negative ? -value : value;
}

std::string to_string_exact(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string_decimal(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double(q));
  return buf;
}

}  // namespace cachegap
