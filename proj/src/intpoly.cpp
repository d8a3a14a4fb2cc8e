#include "hmfd/intpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hmfd {

namespace {

void strip_zeros(std::vector<Int>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Dense rational polynomial, little-endian; only used for gcd and Sturm work.
using QPoly = std::vector<Rat>;

void qstrip(QPoly& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

QPoly to_qpoly(const IntPoly& p) {
  QPoly q(p.c.size());
  for (size_t i = 0; i < p.c.size(); ++i) q[i] = Rat(p.c[i]);
  return q;
}

// a mod b, b nonzero.
QPoly qrem(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    qstrip(a);
  }
  return a;
}

QPoly qgcd(QPoly a, QPoly b) {
  qstrip(a);
  qstrip(b);
  while (!b.empty()) {
    QPoly r = qrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

IntPoly q_to_primitive_int(const QPoly& q) {
  if (q.empty()) return IntPoly{};
  Int den = 1;
  for (const Rat& r : q) {
    Int d = r.get_den();
    Int g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    den = den / g * d;
  }
  std::vector<Int> c(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    Rat scaled = q[i] * Rat(den);
    c[i] = scaled.get_num();
  }
  IntPoly p(std::move(c));
  p = p.primitive_part();
  if (!p.is_zero() && p.lc() < 0)
    for (Int& v : p.c) v = -v;
  return p;
}

int sign_of(const Rat& r) { return sgn(r); }

}  // namespace

IntPoly::IntPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { strip_zeros(c); }

IntPoly IntPoly::constant(const Int& v) { return IntPoly{{v}}; }

IntPoly IntPoly::x() { return IntPoly{{Int(0), Int(1)}}; }

const Int& IntPoly::coeff(int i) const {
  static const Int zero(0);
  if (i < 0 || i >= static_cast<int>(c.size())) return zero;
  return c[i];
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  std::vector<Int> r(std::max(c.size(), o.c.size()), Int(0));
  for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
  for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
  return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
  std::vector<Int> r(std::max(c.size(), o.c.size()), Int(0));
  for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
  for (size_t i = 0; i < o.c.size(); ++i) r[i] -= o.c[i];
  return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  if (is_zero() || o.is_zero()) return IntPoly{};
  std::vector<Int> r(c.size() + o.c.size() - 1, Int(0));
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
  return IntPoly(std::move(r));
}

IntPoly IntPoly::derivative() const {
  if (c.size() <= 1) return IntPoly{};
  std::vector<Int> r(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * Int(static_cast<long>(i));
  return IntPoly(std::move(r));
}

Rat IntPoly::eval(const Rat& x) const {
  Rat acc(0);
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + Rat(c[i]);
  return acc;
}

Int IntPoly::eval_int(const Int& x) const {
  Int acc(0);
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Int IntPoly::content() const {
  Int g(0);
  for (const Int& v : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

IntPoly IntPoly::primitive_part() const {
  Int g = content();
  if (g == 0 || g == 1) return *this;
  std::vector<Int> r(c.size());
  for (size_t i = 0; i < c.size(); ++i) r[i] = c[i] / g;
  return IntPoly(std::move(r));
}

std::string IntPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Int& a = coeff(i);
    if (a == 0) continue;
    Int mag = abs(a);
    if (first) {
      if (a < 0) out << '-';
      first = false;
    } else {
      out << (a < 0 ? '-' : '+');
    }
    if (i == 0) {
      out << mag.get_str();
    } else {
      if (mag != 1) out << mag.get_str();
      out << 'x';
      if (i > 1) out << '^' << i;
    }
  }
  return out.str();
}

IntPoly parse_poly(const std::string& s) {
  std::vector<Int> coeffs;
  size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("bad polynomial \"" + s + "\": " + why);
  };
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i == s.size()) fail("empty input");
  bool any = false;
  while (true) {
    skip_ws();
    if (i == s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
      skip_ws();
    } else if (any) {
      fail("expected '+' or '-' between terms");
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    skip_ws();
    Int coeff = digits.empty() ? Int(1) : Int(digits);
    int exp = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      exp = 1;
      skip_ws();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip_ws();
        std::string ed;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ed += s[i++];
        if (ed.empty()) fail("missing exponent after '^'");
        exp = std::stoi(ed);
        if (exp > 64) fail("exponent too large");
      }
    } else if (digits.empty()) {
      fail("expected coefficient or 'x'");
    }
    if (static_cast<size_t>(exp) + 1 > coeffs.size()) coeffs.resize(exp + 1, Int(0));
    coeffs[exp] += sign * coeff;
    any = true;
  }
  if (!any) fail("no terms");
  return IntPoly(std::move(coeffs));
}

IntPoly gcd_over_q(const IntPoly& a, const IntPoly& b) {
  return q_to_primitive_int(qgcd(to_qpoly(a), to_qpoly(b)));
}

bool is_squarefree_q(const IntPoly& m) {
  if (m.is_zero()) return false;
  if (m.degree() == 0) return true;
  return gcd_over_q(m, m.derivative()).degree() == 0;
}

int real_root_count(const IntPoly& m) {
  if (m.is_zero()) throw std::invalid_argument("real_root_count: zero polynomial");
  // Sturm chain; roots counted without multiplicity, so start squarefree.
  QPoly p0 = to_qpoly(m);
  {
    IntPoly g = gcd_over_q(m, m.derivative());
    if (g.degree() > 0) {
      // divide out repeated part exactly
      QPoly q = to_qpoly(m), d = to_qpoly(g), quot(q.size() - d.size() + 1, Rat(0));
      while (q.size() >= d.size() && !q.empty()) {
        Rat f = q.back() / d.back();
        size_t shift = q.size() - d.size();
        quot[shift] = f;
        for (size_t i = 0; i < d.size(); ++i) q[i + shift] -= f * d[i];
        q.pop_back();
        qstrip(q);
      }
      p0 = quot;
      qstrip(p0);
    }
  }
  if (p0.size() <= 1) return 0;
  std::vector<QPoly> chain;
  chain.push_back(p0);
  QPoly d(p0.size() - 1);
  for (size_t i = 1; i < p0.size(); ++i) d[i - 1] = p0[i] * Rat(static_cast<long>(i));
  chain.push_back(d);
  while (chain.back().size() > 1) {
    QPoly r = qrem(chain[chain.size() - 2], chain.back());
    for (Rat& v : r) v = -v;
    qstrip(r);
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  auto variations_at_inf = [&](int dir) {
    int count = 0, prev = 0;
    for (const QPoly& q : chain) {
      if (q.empty()) continue;
      int sg = sign_of(q.back());
      if (dir < 0 && (q.size() - 1) % 2 == 1) sg = -sg;
      if (sg == 0) continue;
      if (prev != 0 && sg != prev) ++count;
      prev = sg;
    }
    return count;
  };
  return variations_at_inf(-1) - variations_at_inf(+1);
}

}  // namespace hmfd
