#pragma once

// Exact rational scalars and vectors. Everything certificate-bearing in the
// library is computed with these; doubles only appear in plot output and in
// conservative bounding-box prefilters.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fnb/errors.hpp"

namespace fnb {

/// Arbitrary precision rational; GMP keeps it canonical after every
/// arithmetic operation.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q" or "p", base 10, lowest terms.
inline std::string to_string(const Rat& r) { return r.get_str(10); }

inline Rat parse_rat(std::string_view text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) throw InputError("malformed rational '" + std::string(text) + "'");
  if (std::all_of(den.begin(), den.end(), [](char c) { return c == '0'; }))
    throw InputError("rational with zero denominator '" + std::string(text) + "'");
  std::string clean(text.front() == '+' ? text.substr(1) : text);
  Rat r(clean, 10);
  r.canonicalize();
  return r;
}

inline int sign(const Rat& r) { return sgn(r); }

/// Point or vector with exact coordinates; dimension fixed at construction.
class QVec {
 public:
  QVec() = default;
  explicit QVec(std::size_t dim) : c_(dim) {}
  QVec(std::initializer_list<Rat> xs) : c_(xs) {}
  explicit QVec(std::vector<Rat> xs) : c_(std::move(xs)) {}

  std::size_t dim() const noexcept { return c_.size(); }
  Rat& operator[](std::size_t i) { return c_[i]; }
  const Rat& operator[](std::size_t i) const { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  auto begin() { return c_.begin(); }
  auto end() { return c_.end(); }
  const std::vector<Rat>& coords() const noexcept { return c_; }

  QVec& operator+=(const QVec& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  QVec& operator-=(const QVec& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  QVec& operator*=(const Rat& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend QVec operator+(QVec a, const QVec& b) { return a += b; }
  friend QVec operator-(QVec a, const QVec& b) { return a -= b; }
  friend QVec operator*(QVec a, const Rat& s) { return a *= s; }
  friend QVec operator*(const Rat& s, QVec a) { return a *= s; }
  friend QVec operator-(QVec a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend bool operator==(const QVec& a, const QVec& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QVec& a, const QVec& b) { return !(a == b); }
  /// Lexicographic order; used for every deterministic tie-break.
  friend bool operator<(const QVec& a, const QVec& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

 private:
  void check(const QVec& o) const {
    if (o.c_.size() != c_.size()) throw InputError("vector dimension mismatch");
  }
  std::vector<Rat> c_;
};

inline Rat dot(const QVec& a, const QVec& b) {
  if (a.dim() != b.dim()) throw InputError("vector dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat norm2(const QVec& a) { return dot(a, a); }

inline std::string to_string(const QVec& v, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += sep;
    out += to_string(v[i]);
  }
  return out;
}

inline std::string to_decimal_string(const QVec& v, std::string_view sep = " ") {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += sep;
    std::snprintf(buf, sizeof buf, "%.12g", v[i].get_d());
    out += buf;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const QVec& v) { return os << '(' << to_string(v, ", ") << ')'; }

/// x ↦ linear·x + offset, with `linear` stored row-major (rows = output dim).
struct AffineMap {
  std::vector<QVec> linear;
  QVec offset;

  std::size_t in_dim() const { return linear.empty() ? 0 : linear.front().dim(); }
  std::size_t out_dim() const { return offset.dim(); }

  QVec operator()(const QVec& x) const {
    QVec y = offset;
    for (std::size_t i = 0; i < linear.size(); ++i) y[i] += dot(linear[i], x);
    return y;
  }

  friend AffineMap operator+(const AffineMap& f, const AffineMap& g) {
    AffineMap h = f;
    for (std::size_t i = 0; i < h.linear.size(); ++i) h.linear[i] += g.linear[i];
    h.offset += g.offset;
    return h;
  }
  friend AffineMap operator-(const AffineMap& f, const AffineMap& g) {
    AffineMap h = f;
    for (std::size_t i = 0; i < h.linear.size(); ++i) h.linear[i] -= g.linear[i];
    h.offset -= g.offset;
    return h;
  }
};

}  // namespace fnb
