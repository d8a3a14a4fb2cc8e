#include "hmfd/ffcore.hpp"

#include <sstream>
#include <stdexcept>

namespace hmfd {

namespace {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

PrimeField::PrimeField(uint64_t q_) {
  if (q_ >= (1ull << 31) || !is_prime_u64(q_))
    throw std::invalid_argument("PrimeField: " + std::to_string(q_) + " is not a prime < 2^31");
  q = static_cast<uint32_t>(q_);
}

uint64_t PrimeField::pow(uint64_t a, uint64_t e) const {
  uint64_t r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = r * a % q;
    a = a * a % q;
    e >>= 1;
  }
  return r;
}

uint64_t PrimeField::inv(uint64_t a) const {
  a %= q;
  if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
  return pow(a, q - 2);
}

ModPoly::ModPoly(PrimeField f, std::vector<uint64_t> coeffs) : fp(f), c(std::move(coeffs)) {
  for (uint64_t& v : c) v %= fp.q;
  while (!c.empty() && c.back() == 0) c.pop_back();
}

ModPoly ModPoly::from_int_poly(const IntPoly& p, PrimeField f) {
  std::vector<uint64_t> c(p.c.size());
  Int q(static_cast<unsigned long>(f.q));
  for (size_t i = 0; i < p.c.size(); ++i) {
    Int r = p.c[i] % q;
    if (r < 0) r += q;
    c[i] = r.get_ui();
  }
  return ModPoly(f, std::move(c));
}

ModPoly ModPoly::operator+(const ModPoly& o) const {
  std::vector<uint64_t> r(std::max(c.size(), o.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) r[i] = c[i];
  for (size_t i = 0; i < o.c.size(); ++i) r[i] = fp.add(r[i], o.c[i]);
  return ModPoly(fp, std::move(r));
}

ModPoly ModPoly::operator-(const ModPoly& o) const {
  std::vector<uint64_t> r(std::max(c.size(), o.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) r[i] = c[i];
  for (size_t i = 0; i < o.c.size(); ++i) r[i] = fp.sub(r[i], o.c[i]);
  return ModPoly(fp, std::move(r));
}

ModPoly ModPoly::operator*(const ModPoly& o) const {
  if (is_zero() || o.is_zero()) return ModPoly(fp);
  std::vector<uint64_t> r(c.size() + o.c.size() - 1, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i]) continue;
    for (size_t j = 0; j < o.c.size(); ++j) r[i + j] = (r[i + j] + c[i] * o.c[j]) % fp.q;
  }
  return ModPoly(fp, std::move(r));
}

ModPoly ModPoly::rem(const ModPoly& mod) const {
  if (mod.is_zero()) throw std::domain_error("ModPoly: division by zero polynomial");
  std::vector<uint64_t> r = c;
  uint64_t lcinv = fp.inv(mod.c.back());
  while (r.size() >= mod.c.size() && !r.empty()) {
    uint64_t f = fp.mul(r.back(), lcinv);
    if (f) {
      size_t shift = r.size() - mod.c.size();
      for (size_t i = 0; i < mod.c.size(); ++i)
        r[i + shift] = fp.sub(r[i + shift], fp.mul(f, mod.c[i]));
    }
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return ModPoly(fp, std::move(r));
}

ModPoly ModPoly::monic() const {
  if (is_zero() || c.back() == 1) return *this;
  uint64_t f = fp.inv(c.back());
  std::vector<uint64_t> r(c.size());
  for (size_t i = 0; i < c.size(); ++i) r[i] = fp.mul(c[i], f);
  return ModPoly(fp, std::move(r));
}

uint64_t ModPoly::eval(uint64_t x) const {
  uint64_t acc = 0;
  x %= fp.q;
  for (size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % fp.q;
  return acc;
}

ModPoly gcd(ModPoly a, ModPoly b) {
  while (!b.is_zero()) {
    ModPoly r = a.rem(b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

ModPoly powmod(const ModPoly& base, const Int& e, const ModPoly& m) {
  ModPoly r(base.fp, {1});
  ModPoly b = base.rem(m);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r.rem(m);
  for (size_t i = bits; i-- > 0;) {
    r = (r * r).rem(m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b).rem(m);
  }
  return r;
}

ModPoly divexact(const ModPoly& a, const ModPoly& b) {
  if (b.is_zero()) throw std::domain_error("ModPoly: division by zero polynomial");
  std::vector<uint64_t> r = a.c;
  std::vector<uint64_t> q(a.c.size() >= b.c.size() ? a.c.size() - b.c.size() + 1 : 0, 0);
  const PrimeField& fp = a.fp;
  uint64_t lcinv = fp.inv(b.c.back());
  while (r.size() >= b.c.size() && !r.empty()) {
    uint64_t f = fp.mul(r.back(), lcinv);
    size_t shift = r.size() - b.c.size();
    q[shift] = f;
    if (f)
      for (size_t i = 0; i < b.c.size(); ++i) r[i + shift] = fp.sub(r[i + shift], fp.mul(f, b.c[i]));
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  if (!r.empty()) throw std::domain_error("ModPoly: division not exact");
  return ModPoly(fp, std::move(q));
}

ModPoly invmod(const ModPoly& a, const ModPoly& m) {
  // extended Euclid over F_q[x]
  ModPoly r0 = m, r1 = a.rem(m);
  ModPoly t0(m.fp), t1(m.fp, {1});
  while (!r1.is_zero()) {
    // quotient of r0 by r1
    std::vector<uint64_t> rr = r0.c;
    std::vector<uint64_t> q(rr.size() >= r1.c.size() ? rr.size() - r1.c.size() + 1 : 0, 0);
    uint64_t lcinv = m.fp.inv(r1.c.back());
    while (rr.size() >= r1.c.size() && !rr.empty()) {
      uint64_t f = m.fp.mul(rr.back(), lcinv);
      size_t shift = rr.size() - r1.c.size();
      q[shift] = f;
      if (f)
        for (size_t i = 0; i < r1.c.size(); ++i)
          rr[i + shift] = m.fp.sub(rr[i + shift], m.fp.mul(f, r1.c[i]));
      rr.pop_back();
      while (!rr.empty() && rr.back() == 0) rr.pop_back();
    }
    ModPoly qq(m.fp, std::move(q));
    ModPoly r2(m.fp, std::move(rr));
    ModPoly t2 = t0 - qq * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0) throw std::domain_error("ModPoly: element not invertible");
  uint64_t s = m.fp.inv(r0.c[0]);
  std::vector<uint64_t> out(t0.c.size());
  for (size_t i = 0; i < t0.c.size(); ++i) out[i] = m.fp.mul(t0.c[i], s);
  return ModPoly(m.fp, std::move(out)).rem(m);
}

bool is_irreducible(const ModPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("is_irreducible: zero polynomial");
  int n = p.degree();
  if (n == 0) return false;
  if (n == 1) return true;
  const PrimeField fp = p.fp;
  ModPoly m = p.monic();
  ModPoly x = ModPoly::x(fp);
  Int q(static_cast<unsigned long>(fp.q));
  // Rabin: x^{q^n} == x mod m, and gcd(x^{q^{n/l}} - x, m) == 1 for primes l | n.
  Int qn;
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
  if (!(powmod(x, qn, m) == x.rem(m))) return false;
  for (int l = 2; l <= n; ++l) {
    if (n % l != 0 || !is_prime_u64(l)) continue;
    Int qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), n / l);
    ModPoly h = powmod(x, qe, m) - x.rem(m);
    if (gcd(h, m).degree() != 0) return false;
  }
  return true;
}

BadPrimeError::BadPrimeError(uint32_t p_)
    : std::runtime_error("bad prime " + std::to_string(p_) +
                         ": defining polynomial is not squarefree mod p"),
      p(p_) {}

std::vector<std::pair<int, int>> ddf_degrees(const IntPoly& m, uint32_t p) {
  if (m.is_zero() || m.degree() < 1)
    throw std::invalid_argument("ddf_degrees: need a nonconstant polynomial");
  PrimeField fp(p);
  ModPoly f = ModPoly::from_int_poly(m, fp);
  if (f.degree() != m.degree()) throw BadPrimeError(p);  // leading coeff vanished
  f = f.monic();
  // squarefreeness mod p
  std::vector<uint64_t> dc(f.c.size() > 1 ? f.c.size() - 1 : 0);
  for (size_t i = 1; i < f.c.size(); ++i) dc[i - 1] = f.c[i] * (i % p) % p;
  ModPoly df(fp, std::move(dc));
  if (df.is_zero() || gcd(f, df).degree() != 0) throw BadPrimeError(p);

  std::vector<std::pair<int, int>> out;
  ModPoly x = ModPoly::x(fp);
  ModPoly h = x.rem(f);  // x^{p^i} mod f, advanced each round
  Int q(static_cast<unsigned long>(p));
  int r = 0;
  while (f.degree() > 0) {
    ++r;
    if (2 * r > f.degree()) {
      out.emplace_back(f.degree(), 1);
      break;
    }
    h = powmod(h, q, f);
    ModPoly g = gcd(h - x.rem(f), f);
    if (g.degree() > 0) {
      out.emplace_back(r, g.degree() / r);
      f = divexact(f, g).monic();
      h = h.rem(f);
    }
  }
  return out;
}

ExtFieldElem ExtField::zero() const { return ExtFieldElem(*this, {}); }

ExtFieldElem ExtField::one() const { return from_base(1); }

ExtFieldElem ExtField::from_base(uint64_t v) const {
  std::vector<uint64_t> c(data_->degree, 0);
  c[0] = v % data_->base.q;
  return ExtFieldElem(*this, std::move(c));
}

ExtFieldElem ExtField::element(uint64_t index) const {
  if (index >= data_->card) throw std::out_of_range("ExtField::element: index out of range");
  std::vector<uint64_t> c(data_->degree, 0);
  for (int i = 0; i < data_->degree; ++i) {
    c[i] = index % data_->base.q;
    index /= data_->base.q;
  }
  return ExtFieldElem(*this, std::move(c));
}

uint64_t ExtField::index_of(const ExtFieldElem& e) const {
  uint64_t idx = 0;
  const auto& c = e.coords();
  for (size_t i = c.size(); i-- > 0;) idx = idx * data_->base.q + c[i];
  return idx;
}

ExtFieldElem ExtField::unit_generator() const {
  uint64_t target = cardinality() - 1;
  for (uint64_t i = 1; i < cardinality(); ++i) {
    ExtFieldElem e = element(i);
    if (e.order() == target) return e;
  }
  throw std::logic_error("ExtField: no unit generator found");
}

ExtFieldElem::ExtFieldElem(ExtField f, std::vector<uint64_t> coords)
    : field_(std::move(f)), coords_(std::move(coords)) {
  coords_.resize(field_.degree(), 0);
  for (uint64_t& v : coords_) v %= field_.base().q;
}

bool ExtFieldElem::is_zero() const {
  for (uint64_t v : coords_)
    if (v) return false;
  return true;
}

ExtFieldElem ExtFieldElem::operator+(const ExtFieldElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("ExtFieldElem: field mismatch");
  std::vector<uint64_t> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = field_.base().add(coords_[i], o.coords_[i]);
  return ExtFieldElem(field_, std::move(c));
}

ExtFieldElem ExtFieldElem::operator-(const ExtFieldElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("ExtFieldElem: field mismatch");
  std::vector<uint64_t> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = field_.base().sub(coords_[i], o.coords_[i]);
  return ExtFieldElem(field_, std::move(c));
}

ExtFieldElem ExtFieldElem::operator-() const {
  std::vector<uint64_t> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = field_.base().neg(coords_[i]);
  return ExtFieldElem(field_, std::move(c));
}

ExtFieldElem ExtFieldElem::operator*(const ExtFieldElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("ExtFieldElem: field mismatch");
  const PrimeField fp = field_.base();
  ModPoly a(fp, coords_), b(fp, o.coords_), m(fp, field_.modulus());
  ModPoly r = (a * b).rem(m);
  std::vector<uint64_t> c = r.c;
  c.resize(field_.degree(), 0);
  return ExtFieldElem(field_, std::move(c));
}

bool ExtFieldElem::operator==(const ExtFieldElem& o) const {
  return field_.same_field(o.field_) && coords_ == o.coords_;
}

ExtFieldElem ExtFieldElem::inverse() const {
  if (is_zero()) throw std::domain_error("ExtFieldElem: inverse of zero");
  const PrimeField fp = field_.base();
  ModPoly a(fp, coords_), m(fp, field_.modulus());
  ModPoly r = invmod(a, m);
  std::vector<uint64_t> c = r.c;
  c.resize(field_.degree(), 0);
  return ExtFieldElem(field_, std::move(c));
}

ExtFieldElem ExtFieldElem::pow(uint64_t e) const {
  ExtFieldElem r = field_.one();
  ExtFieldElem b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

uint64_t ExtFieldElem::order() const {
  if (is_zero()) throw std::domain_error("ExtFieldElem: order of zero");
  uint64_t n = field_.cardinality() - 1;
  std::vector<uint64_t> primes;
  uint64_t t = n;
  for (uint64_t d = 2; d * d <= t; ++d)
    if (t % d == 0) {
      primes.push_back(d);
      while (t % d == 0) t /= d;
    }
  if (t > 1) primes.push_back(t);
  uint64_t ord = n;
  for (uint64_t pf : primes)
    while (ord % pf == 0 && pow(ord / pf) == field_.one()) ord /= pf;
  return ord;
}

bool ExtFieldElem::in_subfield(int r) const {
  int d = field_.degree();
  if (r < 1 || d % r != 0) throw std::invalid_argument("in_subfield: r must divide the degree");
  return frobenius_power(*this, r) == *this;
}

std::string ExtFieldElem::to_string() const {
  std::ostringstream out;
  out << '(';
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) out << ',';
    out << coords_[i];
  }
  out << ')';
  return out.str();
}

ExtField make_ext_field(uint64_t q, int d) {
  PrimeField fp(q);  // validates primality
  if (d < 1) throw std::invalid_argument("make_ext_field: degree must be >= 1");
  long double size = 1;
  for (int i = 0; i < d; ++i) size *= q;
  if (size > (1 << 20))
    throw std::invalid_argument("make_ext_field: q^d exceeds the 2^20 enumeration limit");
  uint64_t card = 1;
  for (int i = 0; i < d; ++i) card *= q;

  // least monic irreducible of degree d: scan lower-coefficient vectors in
  // ascending base-q counter order
  std::vector<uint64_t> modulus;
  for (uint64_t k = 0;; ++k) {
    if (k >= card) throw std::logic_error("make_ext_field: no irreducible polynomial found");
    std::vector<uint64_t> c(d + 1, 0);
    uint64_t t = k;
    for (int i = 0; i < d; ++i) {
      c[i] = t % q;
      t /= q;
    }
    c[d] = 1;
    ModPoly cand(fp, c);
    if (is_irreducible(cand)) {
      modulus = std::move(c);
      break;
    }
  }

  ExtField f;
  auto data = std::make_shared<ExtField::Data>(
      ExtField::Data{fp, d, card, std::move(modulus)});
  f.data_ = std::move(data);
  return f;
}

ExtFieldElem frobenius_power(const ExtFieldElem& e, int i) {
  int d = e.field().degree();
  int steps = ((i % d) + d) % d;
  ExtFieldElem r = e;
  uint64_t q = e.field().base().q;
  for (int s = 0; s < steps; ++s) r = r.pow(q);
  return r;
}

}  // namespace hmfd
