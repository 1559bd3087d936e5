#pragma once

// Exact scalar kernel: rationals, angles as rational multiples of pi, and
// quadratic surds c*sqrt(r).  Everything downstream that feeds a certificate
// or an acceptance bound goes through these types; no floating-point
// comparisons are load-bearing anywhere in the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace forge {

using i64 = std::int64_t;
using i128 = __int128;

struct overflow_error : std::runtime_error {
  overflow_error() : std::runtime_error("exact arithmetic overflow") {}
};

namespace detail {
inline i64 narrow(i128 v) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) throw overflow_error{};
  return static_cast<i64>(v);
}
}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(i64 n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(i64 n, i64 d) : num_(n), den_(d) { normalize(); }

  i64 num() const { return num_; }
  i64 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  Rational operator-() const { return Rational(raw{}, -num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  double to_double() const { return double(num_) / double(den_); }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "a", "a/b", with optional whitespace around '/'.
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    i64 n = std::stoll(s.substr(0, slash));
    i64 d = std::stoll(s.substr(slash + 1));
    return Rational(n, d);
  }

 private:
  struct raw {};
  Rational(raw, i64 n, i64 d) : num_(n), den_(d) {}

  static Rational make(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 a = n < 0 ? -n : n;
    i128 g = gcd128(a, d);
    if (g > 1) { n /= g; d /= g; }
    return Rational(raw{}, detail::narrow(n), detail::narrow(d));
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b) { i128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() { *this = make(num_, den_); }

  i64 num_ = 0;
  i64 den_ = 1;
};

class Surd;

// An angle that is an exact rational multiple of pi.  Serialized as
// "k/m pi" everywhere (the wire format for offsets and certificate angles).
class Angle {
 public:
  Angle() = default;
  explicit Angle(Rational multiple_of_pi) : coeff_(multiple_of_pi) {}

  static Angle zero() { return Angle(Rational(0)); }
  static Angle pi() { return Angle(Rational(1)); }
  static Angle pi_over(i64 n) { return Angle(Rational(1, n)); }
  static Angle pi_times(i64 k, i64 m) { return Angle(Rational(k, m)); }

  Rational over_pi() const { return coeff_; }
  bool is_zero() const { return coeff_.is_zero(); }

  friend Angle operator+(const Angle& a, const Angle& b) { return Angle(a.coeff_ + b.coeff_); }
  friend Angle operator-(const Angle& a, const Angle& b) { return Angle(a.coeff_ - b.coeff_); }
  Angle operator-() const { return Angle(-coeff_); }
  friend Angle operator*(const Rational& r, const Angle& a) { return Angle(r * a.coeff_); }
  friend Angle operator*(i64 k, const Angle& a) { return Angle(Rational(k) * a.coeff_); }

  friend bool operator==(const Angle& a, const Angle& b) { return a.coeff_ == b.coeff_; }
  friend bool operator!=(const Angle& a, const Angle& b) { return !(a == b); }
  friend bool operator<(const Angle& a, const Angle& b) { return a.coeff_ < b.coeff_; }
  friend bool operator>(const Angle& a, const Angle& b) { return b < a; }
  friend bool operator<=(const Angle& a, const Angle& b) { return !(b < a); }
  friend bool operator>=(const Angle& a, const Angle& b) { return !(a < b); }

  Angle abs() const { return Angle(coeff_.abs()); }

  double radians() const { return coeff_.to_double() * M_PI; }

  std::string to_string() const {
    return coeff_.to_string() + (coeff_.den() == 1 ? "/1 pi" : " pi");
  }

  // Accepts the canonical "k/m pi" plus the lenient forms "0", "pi",
  // "pi/3", "2pi/3".
  static Angle parse(std::string s);

  // Exact cosine, defined for the angles whose cosine is a single surd:
  // multiples of pi/6 and pi/4 within [0, pi].  Everything the acceptance
  // bounds compare against (pi/2, 2pi/3, 7pi/8 never needs a cosine) stays
  // inside this table.
  std::optional<Surd> exact_cos() const;

 private:
  Rational coeff_;  // angle = coeff_ * pi
};

// c * sqrt(r) with c rational and r a squarefree nonnegative integer.
// Closed under multiplication and division; addition requires matching
// radicands (the geometry only ever adds commensurable lengths).
class Surd {
 public:
  Surd() = default;
  Surd(Rational c) : coeff_(c), rad_(1) { if (coeff_.is_zero()) rad_ = 1; }  // NOLINT
  Surd(i64 c) : Surd(Rational(c)) {}                                        // NOLINT

  static Surd sqrt_of(const Rational& r) {
    if (r.is_negative()) throw std::domain_error("sqrt of negative rational");
    if (r.is_zero()) return Surd(Rational(0));
    // sqrt(n/d) = sqrt(n*d)/d
    i128 nd = i128(r.num()) * r.den();
    return make(Rational(1, r.den()), detail::narrow(nd));
  }

  Rational coeff() const { return coeff_; }
  i64 radicand() const { return rad_; }

  bool is_zero() const { return coeff_.is_zero(); }
  bool is_rational() const { return rad_ == 1 || coeff_.is_zero(); }
  Rational rational_value() const {
    if (!is_rational()) throw std::domain_error("surd is irrational");
    return coeff_;
  }
  int sign() const { return coeff_.sign(); }
  // value^2, always rational.
  Rational square() const { return coeff_ * coeff_ * Rational(rad_); }

  Surd operator-() const { return Surd(raw{}, -coeff_, rad_); }

  friend Surd operator*(const Surd& a, const Surd& b) {
    return make(a.coeff_ * b.coeff_, detail::narrow(i128(a.rad_) * b.rad_));
  }
  friend Surd operator*(const Rational& r, const Surd& a) {
    return Surd(raw{}, r * a.coeff_, a.coeff_.is_zero() || r.is_zero() ? 1 : a.rad_).renorm_zero();
  }
  friend Surd operator/(const Surd& a, const Surd& b) {
    if (b.is_zero()) throw std::domain_error("surd division by zero");
    // 1/(c sqrt(r)) = (1/(c r)) sqrt(r)
    return a * Surd(raw{}, Rational(1) / (b.coeff_ * Rational(b.rad_)), b.rad_);
  }
  friend Surd operator+(const Surd& a, const Surd& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.rad_ != b.rad_) throw std::domain_error("surd addition with mismatched radicands");
    return Surd(raw{}, a.coeff_ + b.coeff_, a.rad_).renorm_zero();
  }
  friend Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }

  friend bool operator==(const Surd& a, const Surd& b) {
    return a.coeff_ == b.coeff_ && a.rad_ == b.rad_;
  }
  friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }
  friend bool operator<(const Surd& a, const Surd& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb;
    if (sa == 0) return false;
    bool lt = a.square() < b.square();
    bool gt = b.square() < a.square();
    return sa > 0 ? lt : gt;
  }
  friend bool operator>(const Surd& a, const Surd& b) { return b < a; }
  friend bool operator<=(const Surd& a, const Surd& b) { return !(b < a); }
  friend bool operator>=(const Surd& a, const Surd& b) { return !(a < b); }

  Surd abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const { return coeff_.to_double() * std::sqrt(double(rad_)); }

  std::string to_string() const {
    if (rad_ == 1) return coeff_.to_string();
    return coeff_.to_string() + " sqrt " + std::to_string(rad_);
  }
  // "c", or "c sqrt r".
  static Surd parse(const std::string& s) {
    auto pos = s.find(" sqrt ");
    if (pos == std::string::npos) return Surd(Rational::parse(s));
    Rational c = Rational::parse(s.substr(0, pos));
    i64 r = std::stoll(s.substr(pos + 6));
    return make(c, r);
  }

 private:
  struct raw {};
  Surd(raw, Rational c, i64 r) : coeff_(c), rad_(r) {}
  Surd renorm_zero() const { return coeff_.is_zero() ? Surd(Rational(0)) : *this; }

  static Surd make(Rational c, i64 r) {
    if (r < 0) throw std::domain_error("negative radicand");
    if (r == 0 || c.is_zero()) return Surd(Rational(0));
    // pull square factors out of r (desk-scale radicands; trial division)
    for (i64 f = 2; f * f <= r; ++f) {
      while (r % (f * f) == 0) { r /= f * f; c *= Rational(f); }
    }
    return Surd(raw{}, c, r);
  }

  Rational coeff_ = Rational(0);
  i64 rad_ = 1;
};

// An angle in [0, pi] represented by its exact cosine.  This is how angle
// comparisons stay exact when the angle itself is not a rational multiple of
// pi: cos is monotone decreasing on [0, pi], so every >=/<= test against a
// table angle is a surd comparison.
class CosAngle {
 public:
  CosAngle() : cos_(Rational(1)) {}
  explicit CosAngle(Surd cosine) : cos_(std::move(cosine)) {
    if (cos_ < Surd(Rational(-1)) || Surd(Rational(1)) < cos_)
      throw std::domain_error("cosine outside [-1, 1]");
  }
  static CosAngle of(const Angle& a) {
    auto c = a.exact_cos();
    if (!c) throw std::domain_error("angle has no exact surd cosine: " + a.to_string());
    return CosAngle(*c);
  }

  const Surd& cosine() const { return cos_; }

  // matches against the table of angles with surd cosines
  std::optional<Angle> as_rational_pi() const {
    static const int twelfths[] = {0, 2, 3, 4, 6, 8, 9, 10, 12};
    for (int k : twelfths) {
      Angle a(Rational(k, 12));
      if (*a.exact_cos() == cos_) return a;
    }
    return std::nullopt;
  }

  friend bool operator==(const CosAngle& a, const CosAngle& b) { return a.cos_ == b.cos_; }
  friend bool operator!=(const CosAngle& a, const CosAngle& b) { return !(a == b); }
  // larger angle <=> smaller cosine
  friend bool operator<(const CosAngle& a, const CosAngle& b) { return b.cos_ < a.cos_; }
  friend bool operator>(const CosAngle& a, const CosAngle& b) { return b < a; }
  friend bool operator<=(const CosAngle& a, const CosAngle& b) { return !(b < a); }
  friend bool operator>=(const CosAngle& a, const CosAngle& b) { return !(a < b); }

  bool at_least(const Angle& bound) const { return *this >= CosAngle::of(bound); }
  bool at_most(const Angle& bound) const { return *this <= CosAngle::of(bound); }

  double radians() const { return std::acos(std::clamp(cos_.to_double(), -1.0, 1.0)); }

 private:
  Surd cos_;
};

// x <= y + z for nonnegative surds with arbitrary radicands (the exact
// triangle-inequality test: squaring twice removes the radicals).
inline bool surd_triangle_le(const Surd& x, const Surd& y, const Surd& z) {
  if (x.sign() < 0 || y.sign() < 0 || z.sign() < 0)
    throw std::domain_error("surd_triangle_le wants nonnegative lengths");
  Rational lhs = x.square() - y.square() - z.square();
  if (lhs.sign() <= 0) return true;
  return lhs * lhs <= Rational(4) * y.square() * z.square();
}

inline Angle Angle::parse(std::string s) {
  // strip whitespace
  std::string t;
  for (char ch : s)
    if (ch != ' ' && ch != '\t') t += ch;
  if (t == "0") return Angle::zero();
  auto pi_pos = t.find("pi");
  if (pi_pos == std::string::npos)
    throw std::invalid_argument("angle must be a rational multiple of pi: " + s);
  std::string before = t.substr(0, pi_pos);
  std::string after = t.substr(pi_pos + 2);
  i64 k = 1, m = 1;
  if (!before.empty()) {
    auto slash = before.find('/');
    if (slash != std::string::npos) {
      k = std::stoll(before.substr(0, slash));
      m = std::stoll(before.substr(slash + 1));
    } else {
      k = std::stoll(before);
    }
  }
  if (!after.empty()) {
    if (after[0] != '/') throw std::invalid_argument("bad angle: " + s);
    m = detail::narrow(i128(m) * std::stoll(after.substr(1)));
  }
  return Angle(Rational(k, m));
}

inline std::optional<Surd> Angle::exact_cos() const {
  Rational c = coeff_;
  if (c.is_negative() || c > Rational(1)) return std::nullopt;  // angles in [0, pi]
  // cos(k pi/12) for k in {0,2,3,4,6,8,9,10,12}
  Rational twelfths = c * Rational(12);
  if (twelfths.den() != 1) return std::nullopt;
  switch (twelfths.num()) {
    case 0: return Surd(Rational(1));
    case 2: return Rational(1, 2) * Surd::sqrt_of(Rational(3));
    case 3: return Rational(1, 2) * Surd::sqrt_of(Rational(2));
    case 4: return Surd(Rational(1, 2));
    case 6: return Surd(Rational(0));
    case 8: return Surd(Rational(-1, 2));
    case 9: return Rational(-1, 2) * Surd::sqrt_of(Rational(2));
    case 10: return Rational(-1, 2) * Surd::sqrt_of(Rational(3));
    case 12: return Surd(Rational(-1));
    default: return std::nullopt;
  }
}

}  // namespace forge
