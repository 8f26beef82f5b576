#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include <gmpxx.h>

namespace cartan {

using BigInt = mpz_class;

/// Arbitrary-precision rational with plain value semantics. Wraps mpq_class
/// so that arithmetic always yields evaluated values (gmpxx expression
/// templates otherwise leak through template argument deduction).
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}                // NOLINT: implicit by design
  Rat(long n) : v_(n) {}               // NOLINT
  Rat(long long n) : v_(static_cast<long>(n)) {}  // NOLINT
  Rat(const BigInt& n) : v_(n) {}      // NOLINT
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    v_.canonicalize();
  }
  Rat(const BigInt& num, const BigInt& den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& v) : v_(v) {}

  /// Parses "p/q" or "p", base 10.
  static Rat parse(const std::string& text) {
    mpq_class v;
    if (v.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
    if (v.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    v.canonicalize();
    return Rat(v);
  }

  const mpq_class& raw() const { return v_; }
  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  double to_double() const { return v_.get_d(); }
  /// Canonical "p" or "p/q" form.
  std::string str() const { return v_.get_str(); }
  int sign() const { return sgn(v_); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.v_ == 0) throw std::domain_error("division by zero");
    return Rat(mpq_class(a.v_ / b.v_));
  }
  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rat>;

inline Rat rat(const std::string& text) { return Rat::parse(text); }
inline std::string rat_str(const Rat& r) { return r.str(); }

inline double to_double(const Rat& r) { return r.to_double(); }
inline double to_double(double x) { return x; }

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }
inline double rat_abs(double x) { return std::fabs(x); }

/// Floor of a rational as a big integer.
inline BigInt rat_floor(const Rat& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return q;
}

/// Fixed-point decimal expansion with `digits` fractional digits, truncated
/// toward zero. Deterministic; used for CSV sampling output.
inline std::string decimal_string(const Rat& r, int digits = 30) {
  BigInt num = r.num();
  const BigInt den = r.den();
  const bool neg = num < 0;
  if (neg) num = -num;
  const BigInt ip = num / den;
  const BigInt rem = num % den;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const BigInt frac = rem * scale / den;
  std::string fs = frac.get_str();
  fs.insert(fs.begin(), static_cast<size_t>(digits) - fs.size(), '0');
  std::string out = (neg ? "-" : "") + ip.get_str();
  if (digits > 0) out += "." + fs;
  return out;
}

inline std::string decimal_string(double x, int digits = 30) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

}  // namespace cartan
