#include "hmfd/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hmfd/ffcore.hpp"

namespace hmfd {

namespace {

// ---------------------------------------------------------------------------
// Exact rational linear algebra (desk-sized dense systems).
// ---------------------------------------------------------------------------

// Solves A x = b by Gaussian elimination; A is rows x cols, column-major
// access via A[r][c]. Returns nullopt when inconsistent; free variables are
// set to zero.
std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> a,
                                             std::vector<Rat> b) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col_of_row(rows, -1);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    Rat inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col_of_row[r] = static_cast<int>(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rat> x(cols, Rat(0));
  for (size_t i = 0; i < r; ++i) x[pivot_col_of_row[i]] = b[i];
  return x;
}

// ---------------------------------------------------------------------------
// p-adic root machinery for automorphism discovery.
// ---------------------------------------------------------------------------

// Element of Z[x]/(m, p^K): n coefficients reduced into [0, mod).
struct PadicRing {
  const IntPoly& m;
  int n;
  Int mod;

  std::vector<Int> reduce(std::vector<Int> v) const {
    for (size_t j = v.size(); j-- > static_cast<size_t>(n);) {
      if (v[j] == 0) continue;
      Int f = v[j];
      v[j] = 0;
      for (int i = 0; i < n; ++i) v[j - n + i] -= f * m.c[i];
    }
    v.resize(n, Int(0));
    for (Int& x : v) {
      x %= mod;
      if (x < 0) x += mod;
    }
    return v;
  }

  std::vector<Int> mul(const std::vector<Int>& a, const std::vector<Int>& b) const {
    std::vector<Int> r(2 * n - 1, Int(0));
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < n; ++j) r[i + j] += a[i] * b[j];
    }
    return reduce(std::move(r));
  }

  std::vector<Int> sub(std::vector<Int> a, const std::vector<Int>& b) const {
    for (int i = 0; i < n; ++i) {
      a[i] -= b[i];
      a[i] %= mod;
      if (a[i] < 0) a[i] += mod;
    }
    return a;
  }

  // poly(c) for an integer-coefficient polynomial evaluated at ring element c
  std::vector<Int> eval_poly(const IntPoly& poly, const std::vector<Int>& c) const {
    std::vector<Int> acc(n, Int(0));
    for (int i = poly.degree(); i >= 0; --i) {
      acc = mul(acc, c);
      acc[0] += poly.coeff(i);
      acc[0] %= mod;
      if (acc[0] < 0) acc[0] += mod;
    }
    return acc;
  }
};

// a/b from residue r mod M with |a|, b <= M^(1/4). The quarter-size bound
// leaves a ~M^(1/2) safety margin, so a residue that is not actually a small
// rational is rejected here instead of surviving to the exact verification.
std::optional<Rat> rational_reconstruct(const Int& r, const Int& modulus) {
  Int bound;
  mpz_root(bound.get_mpz_t(), modulus.get_mpz_t(), 4);
  Int s0 = modulus, s1 = r % modulus;
  if (s1 < 0) s1 += modulus;
  Int t0 = 0, t1 = 1;
  while (s1 > bound) {
    Int q = s0 / s1;
    Int s2 = s0 - q * s1;
    Int t2 = t0 - q * t1;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  Int a = s1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b == 0 || b > bound) return std::nullopt;
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1 && !(a == 0 && b == 1)) return std::nullopt;
  // confirm a == r b (mod M)
  Int chk = (a - r * b) % modulus;
  if (chk != 0) return std::nullopt;
  return Rat(a, b);
}

// Cantor–Zassenhaus over F_p (p odd), deterministic via fixed seeding; the
// factor list is sorted by coefficient vector for stable output.
std::vector<ModPoly> factor_mod_p(const ModPoly& input, uint32_t p) {
  ModPoly f = input.monic();
  PrimeField fp(p);
  ModPoly x = ModPoly::x(fp);
  std::vector<std::pair<ModPoly, int>> parts;  // (product of degree-d factors, d)
  ModPoly h = x.rem(f);
  int d = 0;
  ModPoly work = f;
  while (work.degree() > 0) {
    ++d;
    if (2 * d > work.degree()) {
      parts.emplace_back(work, work.degree());
      break;
    }
    h = powmod(h, Int(static_cast<unsigned long>(p)), work);
    ModPoly g = gcd(h - x.rem(work), work);
    if (g.degree() > 0) {
      parts.emplace_back(g, d);
      work = divexact(work, g).monic();
      h = h.rem(work);
    }
  }
  std::vector<ModPoly> factors;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (static_cast<uint64_t>(p) << 8) ^
                      static_cast<uint64_t>(input.degree()));
  // equal-degree splitting
  std::vector<std::pair<ModPoly, int>> stack = parts;
  while (!stack.empty()) {
    auto [g, deg] = stack.back();
    stack.pop_back();
    if (g.degree() == deg) {
      factors.push_back(g.monic());
      continue;
    }
    Int e;
    mpz_ui_pow_ui(e.get_mpz_t(), p, deg);
    e = (e - 1) / 2;
    while (true) {
      std::vector<uint64_t> tc(g.degree());
      for (auto& v : tc) v = rng() % p;
      ModPoly t(fp, std::move(tc));
      if (t.is_zero()) continue;
      ModPoly s = powmod(t, e, g) - ModPoly(fp, {1});
      ModPoly w = gcd(s, g);
      if (w.degree() > 0 && w.degree() < g.degree()) {
        stack.emplace_back(w, deg);
        stack.emplace_back(divexact(g, w).monic(), deg);
        break;
      }
    }
  }
  std::sort(factors.begin(), factors.end(),
            [](const ModPoly& a, const ModPoly& b) { return a.c < b.c; });
  return factors;
}

struct RootSearchPlan {
  uint32_t p = 0;
  uint64_t candidate_count = 0;
};

// Picks an odd prime with m squarefree mod p, component fields small enough
// to scan, and the fewest candidate roots in the etale algebra F_p[x]/(m).
std::optional<RootSearchPlan> pick_root_prime(const IntPoly& m) {
  std::optional<RootSearchPlan> best;
  int feasible_seen = 0;
  for (uint32_t p = 3; p < 20000 && feasible_seen < 12; p += 2) {
    bool prime = true;
    for (uint32_t q = 3; q * q <= p; q += 2)
      if (p % q == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    std::vector<std::pair<int, int>> pattern;
    try {
      pattern = ddf_degrees(m, p);
    } catch (const BadPrimeError&) {
      continue;
    }
    long double scan = 0;
    uint64_t candidates = 1;
    bool feasible = true;
    for (auto [r, mult] : pattern) {
      long double comp = 1;
      for (int i = 0; i < r; ++i) comp *= p;
      if (comp > (1 << 20)) feasible = false;
      scan += mult * comp;
      // roots of m in F_{p^r}: sum over r' | r of r' * mult_{r'}
      uint64_t roots_here = 0;
      for (auto [r2, mult2] : pattern)
        if (r % r2 == 0) roots_here += static_cast<uint64_t>(r2) * mult2;
      for (int i = 0; i < mult; ++i) {
        if (candidates > (1ull << 40) / std::max<uint64_t>(roots_here, 1)) feasible = false;
        if (feasible) candidates *= roots_here;
      }
    }
    if (!feasible || scan > (1 << 21) || candidates > 65536) continue;
    ++feasible_seen;
    if (!best || candidates < best->candidate_count)
      best = RootSearchPlan{p, candidates};
    if (best->candidate_count <= static_cast<uint64_t>(m.degree())) break;
  }
  return best;
}

// All roots of m inside Q[x]/(m), each as a rational coordinate vector.
// Strategy: candidate roots in the etale algebra mod p, Hensel lift, rational
// reconstruction, exact verification.
std::vector<std::vector<Rat>> roots_in_field(const IntPoly& m) {
  const int n = m.degree();
  auto plan = pick_root_prime(m);
  if (!plan)
    throw std::runtime_error("automorphisms: no workable prime for root search on " +
                             m.to_string());
  const uint32_t p = plan->p;
  PrimeField fp(p);
  ModPoly mbar = ModPoly::from_int_poly(m, fp).monic();
  std::vector<ModPoly> comps = factor_mod_p(mbar, p);

  // roots of m in each component field F_p[x]/(m_i), by full scan
  std::vector<std::vector<ModPoly>> comp_roots;
  for (const ModPoly& mi : comps) {
    int di = mi.degree();
    uint64_t size = 1;
    for (int i = 0; i < di; ++i) size *= p;
    std::vector<ModPoly> roots;
    for (uint64_t idx = 0; idx < size; ++idx) {
      std::vector<uint64_t> ec(di);
      uint64_t t = idx;
      for (int i = 0; i < di; ++i) {
        ec[i] = t % p;
        t /= p;
      }
      ModPoly e(fp, std::move(ec));
      // Horner: mbar(e) mod (p, mi)
      ModPoly acc(fp);
      for (int i = mbar.degree(); i >= 0; --i) {
        acc = (acc * e).rem(mi);
        acc = acc + ModPoly(fp, {mbar.coeff(i)});
      }
      if (acc.is_zero()) roots.push_back(e);
    }
    comp_roots.push_back(std::move(roots));
  }

  // CRT basis: B_i = 1 mod m_i, 0 mod m_j
  std::vector<ModPoly> crt_basis;
  for (size_t i = 0; i < comps.size(); ++i) {
    ModPoly rest(fp, {1});
    for (size_t j = 0; j < comps.size(); ++j)
      if (j != i) rest = (rest * comps[j]).rem(mbar);
    ModPoly u = invmod(rest.rem(comps[i]), comps[i]);
    crt_basis.push_back((rest * u).rem(mbar));
  }

  // enumerate candidate tuples
  std::vector<ModPoly> candidates;
  std::vector<size_t> pick(comps.size(), 0);
  while (true) {
    ModPoly c(fp);
    for (size_t i = 0; i < comps.size(); ++i)
      c = c + (comp_roots[i][pick[i]] * crt_basis[i]).rem(mbar);
    c = c.rem(mbar);
    candidates.push_back(c);
    size_t k = 0;
    while (k < pick.size()) {
      if (++pick[k] < comp_roots[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) break;
  }

  const IntPoly md = m.derivative();
  std::vector<std::vector<Rat>> verified;
  std::vector<ModPoly> pending = candidates;
  for (int pass = 0; pass < 2 && !pending.empty(); ++pass) {
    const int target_bits = pass == 0 ? 1024 : 4096;
    std::vector<ModPoly> still;
    for (const ModPoly& cand : pending) {
      // initial inverse of m'(cand) mod (p, m)
      ModPoly mdbar = ModPoly::from_int_poly(md, fp);
      ModPoly dval(fp);
      for (int i = mdbar.degree(); i >= 0; --i) {
        dval = (dval * cand).rem(mbar);
        dval = dval + ModPoly(fp, {mdbar.coeff(i)});
      }
      ModPoly vbar = invmod(dval, mbar);

      std::vector<Int> c(n, Int(0)), v(n, Int(0));
      for (int i = 0; i <= cand.degree(); ++i) c[i] = Int(static_cast<unsigned long>(cand.coeff(i)));
      for (int i = 0; i <= vbar.degree(); ++i) v[i] = Int(static_cast<unsigned long>(vbar.coeff(i)));

      int e = 1;
      Int mod(static_cast<unsigned long>(p));
      const int target_e =
          static_cast<int>(target_bits / (std::log2(static_cast<double>(p)))) + 2;
      while (e < target_e) {
        e = std::min(2 * e, target_e);
        mpz_ui_pow_ui(mod.get_mpz_t(), p, e);
        PadicRing ring{m, n, mod};
        std::vector<Int> delta = ring.mul(ring.eval_poly(m, c), v);
        c = ring.sub(std::move(c), delta);
        std::vector<Int> two(n, Int(0));
        two[0] = 2;
        std::vector<Int> corr = ring.sub(std::move(two), ring.mul(ring.eval_poly(md, c), v));
        v = ring.mul(v, corr);
      }
      // reconstruct and verify exactly
      std::vector<Rat> coords(n);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        auto r = rational_reconstruct(c[i], mod);
        if (!r)
          ok = false;
        else
          coords[i] = *r;
      }
      if (!ok) {
        still.push_back(cand);
        continue;
      }
      // exact check: m(candidate) == 0 in Q[x]/(m)
      // Horner with rational coords
      auto mul_mod_m = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        std::vector<Rat> r(2 * n - 1, Rat(0));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) r[i + j] += a[i] * b[j];
        for (int j = 2 * n - 2; j >= n; --j) {
          if (r[j] == 0) continue;
          Rat f = r[j];
          r[j] = 0;
          for (int i = 0; i < n; ++i) r[j - n + i] -= f * Rat(m.c[i]);
        }
        r.resize(n);
        return r;
      };
      std::vector<Rat> acc(n, Rat(0));
      for (int i = m.degree(); i >= 0; --i) {
        acc = mul_mod_m(acc, coords);
        acc[0] += Rat(m.c[i]);
      }
      bool is_root = std::all_of(acc.begin(), acc.end(), [](const Rat& r) { return r == 0; });
      if (is_root)
        verified.push_back(std::move(coords));
      else if (pass == 1)
        throw std::runtime_error(
            "automorphisms: p-adic precision exhausted while verifying a root of " +
            m.to_string() + " (escalated to 4096 bits)");
      else
        still.push_back(cand);
    }
    pending = std::move(still);
  }
  return verified;
}

std::vector<uint32_t> small_primes_below(uint32_t bound) {
  std::vector<uint32_t> out;
  for (uint32_t p = 2; p < bound; ++p) {
    bool prime = true;
    for (uint32_t q = 2; q * q <= p; ++q)
      if (p % q == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(p);
  }
  return out;
}

}  // namespace

struct NumberField::Data {
  IntPoly minpoly;
  int degree = 0;
  int real_roots = 0;
  bool certified = false;
  mutable std::once_flag aut_once;
  mutable std::vector<FieldAutomorphism> auts;
};

const IntPoly& NumberField::minpoly() const { return data_->minpoly; }
int NumberField::degree() const { return data_->degree; }
int NumberField::real_root_count() const { return data_->real_roots; }
bool NumberField::certified_irreducible() const { return data_->certified; }

NFElem NumberField::zero() const { return NFElem(*this, std::vector<Rat>(degree(), Rat(0))); }

NFElem NumberField::one() const { return from_rational(Rat(1)); }

NFElem NumberField::from_rational(const Rat& r) const {
  std::vector<Rat> c(degree(), Rat(0));
  c[0] = r;
  return NFElem(*this, std::move(c));
}

NFElem NumberField::generator() const {
  std::vector<Rat> c(degree(), Rat(0));
  if (degree() == 1) {
    // alpha is the rational root of the degree-1 minpoly x + c0
    c[0] = Rat(-minpoly().coeff(0));
  } else {
    c[1] = 1;
  }
  return NFElem(*this, std::move(c));
}

NFElem NumberField::element(std::vector<Rat> coords) const {
  if (static_cast<int>(coords.size()) != degree())
    throw std::invalid_argument("NumberField::element: coordinate vector of wrong dimension");
  return NFElem(*this, std::move(coords));
}

bool NumberField::is_galois() const {
  return static_cast<int>(automorphisms().size()) == degree();
}

const std::vector<FieldAutomorphism>& NumberField::automorphisms() const {
  std::call_once(data_->aut_once, [this] {
    if (degree() > 8)
      throw std::invalid_argument("automorphisms: supported only for degree <= 8");
    std::vector<FieldAutomorphism> out;
    if (degree() == 1) {
      out.emplace_back(*this, generator());
    } else {
      auto roots = roots_in_field(minpoly());
      std::vector<NFElem> images;
      for (auto& coords : roots) images.emplace_back(*this, std::move(coords));
      std::sort(images.begin(), images.end(), [](const NFElem& a, const NFElem& b) {
        return a.to_string() < b.to_string();
      });
      NFElem alpha = generator();
      out.emplace_back(*this, alpha);  // identity first
      bool found_identity = false;
      for (const NFElem& img : images) {
        if (img == alpha) {
          found_identity = true;
          continue;
        }
        out.emplace_back(*this, img);
      }
      if (!found_identity)
        throw std::logic_error("automorphisms: identity root not recovered");
    }
    data_->auts = std::move(out);
  });
  return data_->auts;
}

NFElem::NFElem(NumberField k, std::vector<Rat> coords)
    : field_(std::move(k)), coords_(std::move(coords)) {
  coords_.resize(field_.degree(), Rat(0));
  for (Rat& r : coords_) r.canonicalize();
}

bool NFElem::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rat& r) { return r == 0; });
}

bool NFElem::is_rational() const {
  for (size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Rat NFElem::rational_value() const {
  if (!is_rational()) throw std::domain_error("NFElem: not a rational element");
  return coords_[0];
}

NFElem NFElem::operator+(const NFElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("NFElem: field mismatch");
  std::vector<Rat> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] + o.coords_[i];
  return NFElem(field_, std::move(c));
}

NFElem NFElem::operator-(const NFElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("NFElem: field mismatch");
  std::vector<Rat> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] - o.coords_[i];
  return NFElem(field_, std::move(c));
}

NFElem NFElem::operator-() const {
  std::vector<Rat> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
  return NFElem(field_, std::move(c));
}

NFElem NFElem::operator*(const NFElem& o) const {
  if (!field_.same_field(o.field_)) throw std::invalid_argument("NFElem: field mismatch");
  const int n = field_.degree();
  const IntPoly& m = field_.minpoly();
  std::vector<Rat> r(2 * n - 1, Rat(0));
  for (int i = 0; i < n; ++i) {
    if (coords_[i] == 0) continue;
    for (int j = 0; j < n; ++j) r[i + j] += coords_[i] * o.coords_[j];
  }
  for (int j = 2 * n - 2; j >= n; --j) {
    if (r[j] == 0) continue;
    Rat f = r[j];
    r[j] = 0;
    for (int i = 0; i < n; ++i) r[j - n + i] -= f * Rat(m.c[i]);
  }
  r.resize(n);
  return NFElem(field_, std::move(r));
}

bool NFElem::operator==(const NFElem& o) const {
  return field_.same_field(o.field_) && coords_ == o.coords_;
}

NFElem NFElem::scaled(const Rat& s) const {
  std::vector<Rat> c(coords_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] * s;
  return NFElem(field_, std::move(c));
}

NFElem NFElem::inverse() const {
  if (is_zero()) throw std::domain_error("NFElem: inverse of zero");
  const int n = field_.degree();
  // solve (multiplication-by-this matrix) y = 1
  std::vector<std::vector<Rat>> mat(n, std::vector<Rat>(n));
  NFElem pw = field_.one();
  for (int j = 0; j < n; ++j) {
    NFElem col = *this * pw;
    for (int i = 0; i < n; ++i) mat[i][j] = col.coords()[i];
    pw = pw * field_.generator();
  }
  std::vector<Rat> rhs(n, Rat(0));
  rhs[0] = 1;
  auto sol = solve_linear(std::move(mat), std::move(rhs));
  if (!sol) throw std::domain_error("NFElem: not invertible (minpoly not irreducible?)");
  // sol gives coordinates w.r.t. powers of the generator
  NFElem y = field_.zero();
  NFElem gp = field_.one();
  for (int j = 0; j < n; ++j) {
    y = y + gp.scaled((*sol)[j]);
    gp = gp * field_.generator();
  }
  return y;
}

NFElem NFElem::pow(unsigned e) const {
  NFElem r = field_.one();
  NFElem b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::string NFElem::to_string() const {
  std::ostringstream out;
  out << '[';
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) out << ", ";
    out << coords_[i];
  }
  out << ']';
  return out.str();
}

FieldAutomorphism::FieldAutomorphism(NumberField k, NFElem generator_image)
    : field_(std::move(k)), image_(std::move(generator_image)) {}

bool FieldAutomorphism::is_identity() const { return image_ == field_.generator(); }

NFElem FieldAutomorphism::apply(const NFElem& e) const {
  if (!field_.same_field(e.parent())) throw std::invalid_argument("automorphism: field mismatch");
  NFElem acc = field_.zero();
  for (size_t i = e.coords().size(); i-- > 0;) {
    acc = acc * image_;
    acc = acc + field_.from_rational(e.coords()[i]);
  }
  return acc;
}

FieldAutomorphism FieldAutomorphism::compose(const FieldAutomorphism& inner) const {
  return FieldAutomorphism(field_, apply(inner.image_));
}

FieldAutomorphism FieldAutomorphism::inverse() const {
  FieldAutomorphism r(field_, field_.generator());
  FieldAutomorphism acc = *this;
  while (!acc.is_identity()) {
    r = acc;
    acc = acc.compose(*this);
    // r holds this^(k), acc = this^(k+1); when acc is identity, r is inverse
  }
  return r;
}

int FieldAutomorphism::order() const {
  FieldAutomorphism acc = *this;
  int k = 1;
  while (!acc.is_identity()) {
    acc = acc.compose(*this);
    ++k;
    if (k > 64) throw std::logic_error("automorphism order runaway");
  }
  return k;
}

bool FieldAutomorphism::operator==(const FieldAutomorphism& o) const {
  return field_.same_field(o.field_) && image_ == o.image_;
}

NumberField make_number_field(const IntPoly& m) {
  if (m.is_zero() || m.degree() < 1)
    throw std::invalid_argument("make_number_field: need a nonconstant polynomial");
  if (!m.is_monic())
    throw std::invalid_argument("make_number_field: polynomial is not monic: " + m.to_string());
  if (!is_squarefree_q(m))
    throw std::invalid_argument("make_number_field: polynomial is not squarefree: " +
                                m.to_string() + " (repeated factor " +
                                gcd_over_q(m, m.derivative()).to_string() + ")");
  if (m.degree() > 1) {
    // integer roots of a monic integer polynomial divide the constant term
    // and obey the Cauchy bound 1 + max |c_i|
    Int c0 = m.coeff(0);
    if (c0 == 0)
      throw std::invalid_argument("make_number_field: rational root 0 (constant term vanishes)");
    Int cauchy(1);
    for (const Int& c : m.c)
      if (abs(c) > cauchy) cauchy = abs(c);
    cauchy += 1;
    if (cauchy > Int(4000000))
      throw std::invalid_argument(
          "make_number_field: coefficients too large for rational-root screening");
    for (Int r(1); r <= cauchy; ++r) {
      if (c0 % r != 0) continue;
      if (m.eval_int(r) == 0)
        throw std::invalid_argument("make_number_field: rational root " + r.get_str() +
                                    " of " + m.to_string());
      if (m.eval_int(-r) == 0)
        throw std::invalid_argument("make_number_field: rational root -" + r.get_str() +
                                    " of " + m.to_string());
    }
  }
  bool certified = m.degree() == 1;
  if (!certified) {
    for (uint32_t p : small_primes_below(100)) {
      try {
        PrimeField fp(p);
        ModPoly mp = ModPoly::from_int_poly(m, fp);
        if (mp.degree() != m.degree()) continue;
        ModPoly dm = mp.monic();
        // skip primes with repeated factors
        std::vector<uint64_t> dc(dm.c.size() > 1 ? dm.c.size() - 1 : 0);
        for (size_t i = 1; i < dm.c.size(); ++i) dc[i - 1] = dm.c[i] * (i % p) % p;
        if (gcd(dm, ModPoly(fp, std::move(dc))).degree() != 0) continue;
        if (is_irreducible(dm)) {
          certified = true;
          break;
        }
      } catch (const std::exception&) {
        continue;
      }
    }
  }
  NumberField k;
  auto data = std::make_shared<NumberField::Data>();
  data->minpoly = m;
  data->degree = m.degree();
  data->real_roots = real_root_count(m);
  data->certified = certified;
  k.data_ = std::move(data);
  return k;
}

IntPoly minimal_polynomial(const NFElem& e) {
  const NumberField& k = e.parent();
  const int n = k.degree();
  std::vector<NFElem> powers;
  powers.push_back(k.one());
  for (int i = 1; i <= n; ++i) powers.push_back(powers.back() * e);
  for (int deg = 1; deg <= n; ++deg) {
    // is powers[deg] a combination of powers[0..deg-1]?
    std::vector<std::vector<Rat>> mat(n, std::vector<Rat>(deg));
    std::vector<Rat> rhs(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < deg; ++j) mat[i][j] = powers[j].coords()[i];
      rhs[i] = powers[deg].coords()[i];
    }
    auto sol = solve_linear(std::move(mat), std::move(rhs));
    if (!sol) continue;
    // x^deg - sum sol_j x^j, cleared to a primitive integer polynomial
    Int den(1);
    for (const Rat& r : *sol) {
      Int d = r.get_den(), g;
      mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
      den = den / g * d;
    }
    std::vector<Int> c(deg + 1);
    for (int j = 0; j < deg; ++j) {
      Rat scaled = -(*sol)[j] * Rat(den);
      c[j] = scaled.get_num();
    }
    c[deg] = den;
    IntPoly p{c};
    p = p.primitive_part();
    if (p.lc() < 0)
      for (Int& v : p.c) v = -v;
    return p;
  }
  throw std::logic_error("minimal_polynomial: no relation found (broken field)");
}

std::vector<FieldAutomorphism> automorphisms(const NumberField& k) {
  return k.automorphisms();
}

std::optional<std::vector<Rat>> subfield_membership(const NFElem& e, const Subfield& s) {
  if (!s.ambient.same_field(e.parent()))
    throw std::invalid_argument("subfield_membership: ambient field mismatch");
  const int n = s.ambient.degree();
  std::vector<NFElem> powers;
  powers.push_back(s.ambient.one());
  for (int i = 1; i < s.degree; ++i) powers.push_back(powers.back() * s.generator);
  std::vector<std::vector<Rat>> mat(n, std::vector<Rat>(s.degree));
  std::vector<Rat> rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < s.degree; ++j) mat[i][j] = powers[j].coords()[i];
    rhs[i] = e.coords()[i];
  }
  return solve_linear(std::move(mat), std::move(rhs));
}

namespace {

// closure of a generating set of automorphisms
std::vector<FieldAutomorphism> subgroup_closure(const NumberField& k,
                                                std::vector<FieldAutomorphism> gens) {
  std::vector<FieldAutomorphism> group;
  group.emplace_back(k, k.generator());  // identity
  auto contains = [&](const FieldAutomorphism& g) {
    return std::any_of(group.begin(), group.end(),
                       [&](const FieldAutomorphism& h) { return h == g; });
  };
  for (const auto& g : gens)
    if (!contains(g)) group.push_back(g);
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < group.size(); ++i)
      for (size_t j = 0; j < group.size(); ++j) {
        FieldAutomorphism c = group[i].compose(group[j]);
        if (!contains(c)) {
          group.push_back(c);
          grew = true;
        }
      }
  }
  return group;
}

}  // namespace

Subfield fixed_field(const NumberField& k, const std::vector<FieldAutomorphism>& gamma_set) {
  std::vector<FieldAutomorphism> h = subgroup_closure(k, gamma_set);
  const int n = k.degree();
  if (n % static_cast<int>(h.size()) != 0)
    throw std::invalid_argument("fixed_field: subgroup order does not divide the degree");
  const int target = n / static_cast<int>(h.size());
  NFElem alpha = k.generator();
  // deterministic trial elements: alpha^e + t*alpha^{e-1}, e = 1..3, t = 0..7
  constexpr int kBudget = 24;
  for (int trial = 0; trial < kBudget; ++trial) {
    int e = 1 + trial / 8;
    int t = trial % 8;
    NFElem theta = alpha.pow(e) + alpha.pow(e - 1).scaled(Rat(t));
    NFElem s = k.zero();
    for (const auto& g : h) s = s + g.apply(theta);
    if (minimal_polynomial(s).degree() == target) return Subfield{k, s, target};
  }
  throw std::runtime_error("fixed_field: no primitive orbit sum within the trial budget of " +
                           std::to_string(kBudget));
}

bool is_totally_real(const NumberField& k) { return k.real_root_count() == k.degree(); }

namespace {

std::optional<FieldAutomorphism> find_cm_conjugation(const NumberField& k) {
  if (k.degree() % 2 != 0 || is_totally_real(k)) return std::nullopt;
  if (k.real_root_count() != 0) return std::nullopt;  // CM fields are totally imaginary
  const auto& auts = k.automorphisms();
  for (const auto& c : auts) {
    if (c.is_identity() || c.order() != 2) continue;
    bool central = std::all_of(auts.begin(), auts.end(), [&](const FieldAutomorphism& g) {
      return c.compose(g) == g.compose(c);
    });
    if (!central) continue;
    Subfield fix = fixed_field(k, {c});
    if (fix.degree * 2 != k.degree()) continue;
    NumberField real_sub = make_number_field(minimal_polynomial(fix.generator));
    if (is_totally_real(real_sub)) return c;
  }
  return std::nullopt;
}

}  // namespace

bool is_cm_field(const NumberField& k) { return find_cm_conjugation(k).has_value(); }

FieldAutomorphism cm_conjugation(const NumberField& k) {
  auto c = find_cm_conjugation(k);
  if (!c) throw std::invalid_argument("cm_conjugation: not a CM field: " + k.minpoly().to_string());
  return *c;
}

std::vector<Subfield> subfield_lattice(const NumberField& k) {
  if (k.degree() > 8)
    throw std::invalid_argument("subfield_lattice: supported only for degree <= 8");
  if (!k.is_galois())
    throw std::invalid_argument(
        "subfield_lattice: field is not Galois (" +
        std::to_string(k.automorphisms().size()) + " automorphisms, degree " +
        std::to_string(k.degree()) + "); only degree-based analysis is available");
  const auto& auts = k.automorphisms();
  const int n = static_cast<int>(auts.size());
  // exhaustive subset scan; n <= 8 keeps this at 256 subsets
  std::vector<std::vector<FieldAutomorphism>> subgroups;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & 1)) continue;  // must contain the identity (index 0)
    std::vector<FieldAutomorphism> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(auts[i]);
    bool closed = true;
    for (size_t i = 0; i < subset.size() && closed; ++i)
      for (size_t j = 0; j < subset.size() && closed; ++j) {
        FieldAutomorphism c = subset[i].compose(subset[j]);
        closed = std::any_of(subset.begin(), subset.end(),
                             [&](const FieldAutomorphism& h) { return h == c; });
      }
    if (closed) subgroups.push_back(std::move(subset));
  }
  std::vector<Subfield> out;
  for (const auto& h : subgroups) out.push_back(fixed_field(k, h));
  std::sort(out.begin(), out.end(), [](const Subfield& a, const Subfield& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.generator.to_string() < b.generator.to_string();
  });
  return out;
}

bool subfield_equal(const Subfield& a, const Subfield& b) {
  if (!a.ambient.same_field(b.ambient) || a.degree != b.degree) return false;
  return subfield_membership(a.generator, b).has_value() &&
         subfield_membership(b.generator, a).has_value();
}

}  // namespace hmfd
