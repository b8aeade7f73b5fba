#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tropicorr {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int abs_value(const Int& a) { return a < 0 ? Int(-a) : a; }

// Always non-negative; gcd(0, 0) = 0.
inline Int gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

inline Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs_value(a) / gcd(a, b) * abs_value(b);
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return den < 0 ? Rat(Int(-num), Int(-den)) : Rat(num, den);
}

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

// Canonical text form: "p" for integers, "p/q" with q > 1 otherwise.
inline std::string to_string(const Rat& r) {
  if (is_integral(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const Int& a) { return a.str(); }

inline Int parse_int(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  Int v(std::string(s.substr(i)));
  return s[0] == '-' ? Int(-v) : v;
}

// Accepts "p" or "p/q" with q != 0.
inline Rat parse_rational(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  const Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  return make_rat(parse_int(s.substr(0, slash)), den);
}

// gcd of the entries, i.e. the integral length of v.
inline Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline bool is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_integral(const RatVec& v) {
  for (const auto& x : v)
    if (!is_integral(x)) return false;
  return true;
}

inline RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

// pre: is_integral(v)
inline IntVec to_int(const RatVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!is_integral(x)) throw std::invalid_argument("non-integral entry " + to_string(x));
    out.push_back(numerator(x));
  }
  return out;
}

inline Int common_denominator(const RatVec& v) {
  Int d = 1;
  for (const auto& x : v) d = lcm(d, denominator(x));
  return d;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RatVec operator*(const Rat& s, const RatVec& a) {
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline IntVec operator-(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline IntVec operator*(const Int& s, const IntVec& a) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

}  // namespace tropicorr
