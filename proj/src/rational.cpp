#include "smtitp/rational.hpp"

namespace smtitp {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  std::string s = text;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw Error("bad decimal '" + text + "'");
    mpz_class den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(mpz_class((whole.empty() || whole == "-" ? whole + "0" : whole) + frac), den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw Error("bad number '" + text + "'");
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational floor_q(const Rational& q) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(z);
}

Rational ceil_q(const Rational& q) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(z);
}

int sgn(const Rational& q) { return ::sgn(q); }

std::string to_string(const Delta& d) {
  if (d.e == 0) return to_string(d.r);
  return to_string(d.r) + (d.e > 0 ? "+" : "") + to_string(d.e) + "e";
}

}  // namespace smtitp
