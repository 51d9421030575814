#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace smtitp {

using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);
bool is_integer(const Rational& q);
Rational floor_q(const Rational& q);
Rational ceil_q(const Rational& q);
int sgn(const Rational& q);

// q + k*eps with eps a positive infinitesimal
struct Delta {
  Rational r;
  Rational e;

  Delta() = default;
  Delta(Rational real, Rational eps = 0) : r(std::move(real)), e(std::move(eps)) {}

  Delta operator+(const Delta& o) const { return Delta(r + o.r, e + o.e); }
  Delta operator-(const Delta& o) const { return Delta(r - o.r, e - o.e); }
  Delta operator-() const { return Delta(-r, -e); }
  Delta operator*(const Rational& k) const { return Delta(r * k, e * k); }
  Delta& operator+=(const Delta& o) {
    r += o.r;
    e += o.e;
    return *this;
  }
  bool operator==(const Delta& o) const { return r == o.r && e == o.e; }
  bool operator!=(const Delta& o) const { return !(*this == o); }
  bool operator<(const Delta& o) const { return r < o.r || (r == o.r && e < o.e); }
  bool operator<=(const Delta& o) const { return !(o < *this); }
  bool operator>(const Delta& o) const { return o < *this; }
  bool operator>=(const Delta& o) const { return !(*this < o); }
  bool is_zero() const { return r == 0 && e == 0; }
};

std::string to_string(const Delta& d);

}  // namespace smtitp
