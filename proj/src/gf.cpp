#include "factorlab/gf.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace factorlab {

namespace {

using Poly = std::vector<int>;  // low degree first, coefficients mod p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  int r = 1, e = p - 2, b = a % p;
  while (e) {
    if (e & 1) r = static_cast<int>(1LL * r * b % p);
    b = static_cast<int>(1LL * b * b % p);
    e >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  int dm = static_cast<int>(m.size()) - 1;
  int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm) {
    int shift = static_cast<int>(a.size()) - 1 - dm;
    int c = static_cast<int>(1LL * a.back() * lead_inv % p);
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

bool has_factor_of_degree(const Poly& m, int p, int d) {
  // all monic polynomials of degree d
  long long count = 1;
  for (int i = 0; i < d; ++i) count *= p;
  for (long long idx = 0; idx < count; ++idx) {
    Poly g(d + 1, 0);
    long long v = idx;
    for (int i = 0; i < d; ++i) {
      g[i] = static_cast<int>(v % p);
      v /= p;
    }
    g[d] = 1;
    if (poly_mod(m, g, p).empty()) return true;
  }
  return false;
}

bool irreducible(const Poly& m, int p) {
  int f = static_cast<int>(m.size()) - 1;
  if (f == 1) return true;
  if (m[0] == 0) return false;
  for (int d = 1; 2 * d <= f; ++d)
    if (has_factor_of_degree(m, p, d)) return false;
  return true;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  Poly r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(r, m, p);
}

std::uint32_t ipow(std::uint32_t b, int e) {
  std::uint32_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::mutex g_registry_mutex;
std::map<std::string, FieldPtr>& field_registry() {
  static std::map<std::string, FieldPtr> r;
  return r;
}
std::map<std::pair<int, int>, FieldPtr>& canonical_registry() {
  static std::map<std::pair<int, int>, FieldPtr> r;
  return r;
}
std::map<std::pair<std::string, std::string>, TowerPtr>& tower_registry() {
  static std::map<std::pair<std::string, std::string>, TowerPtr> r;
  return r;
}

std::string make_key(int p, int f, const std::vector<int>& m) {
  std::ostringstream os;
  os << p << "^" << f << ":";
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  return os.str();
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool prime_power(long long q, int* p, int* f) {
  if (q < 2) return false;
  long long d = 2;
  while (q % d) ++d;
  int e = 0;
  long long r = q;
  while (r % d == 0) {
    r /= d;
    ++e;
  }
  if (r != 1) return false;
  if (p) *p = static_cast<int>(d);
  if (f) *f = e;
  return true;
}

Field::Field(int p, int f, std::vector<int> modulus)
    : p_(p), f_(f), q_(ipow(p, f)), modulus_(std::move(modulus)) {
  key_ = make_key(p, f, modulus_);
  build_tables();
}

void Field::build_tables() {
  exp_.assign(2 * q_, 0);
  log_.assign(q_, 0);
  zech_.assign(q_, -1);
  if (q_ == 2) {
    exp_[0] = exp_[1] = exp_[2] = exp_[3] = 1;
    log_[1] = 0;
    zech_[0] = -1;
    return;
  }
  auto to_poly = [&](elem a) {
    Poly c(f_, 0);
    for (int i = 0; i < f_; ++i) {
      c[i] = static_cast<int>(a % p_);
      a /= p_;
    }
    return c;
  };
  auto from_poly = [&](const Poly& c) {
    elem v = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * p_ + c[i];
    return v;
  };
  // find a generator of the multiplicative group in packed order
  for (elem g = 1; g < q_; ++g) {
    Poly gp = to_poly(g);
    Poly cur{1};
    std::uint32_t order = 0;
    bool ok = true;
    std::vector<char> seen(q_, 0);
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      elem v = from_poly(cur);
      if (v == 0 || seen[v]) {
        ok = false;
        break;
      }
      seen[v] = 1;
      exp_[k] = v;
      cur = mulmod(cur, gp, modulus_, p_);
      cur.resize(f_, 0);
      ++order;
    }
    if (ok && from_poly(cur) == 1 && order == q_ - 1) break;
    if (g == q_ - 1) throw InvalidField("no primitive element; modulus not irreducible");
  }
  for (std::uint32_t k = 0; k < q_ - 1; ++k) {
    log_[exp_[k]] = k;
    exp_[k + q_ - 1] = exp_[k];
  }
  if (p_ != 2) {
    for (std::uint32_t n = 0; n < q_ - 1; ++n) {
      // 1 + g^n, computed on coefficients: only c_0 changes
      elem a = exp_[n];
      elem c0 = a % p_;
      elem s = a - c0 + (c0 + 1) % p_;
      zech_[n] = s == 0 ? -1 : static_cast<std::int32_t>(log_[s]);
    }
  }
}

FieldPtr Field::get(int p, int f) {
  if (!is_prime(p) || f < 1) throw InvalidField("p must be prime and f >= 1");
  if (ipow(p, f) > kMaxOrder || (f > 16)) throw InvalidField("field order exceeds 2^16");
  {
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto it = canonical_registry().find({p, f});
    if (it != canonical_registry().end()) return it->second;
  }
  std::uint32_t q = ipow(p, f);
  std::vector<int> mod;
  for (std::uint32_t idx = 0; idx < q; ++idx) {
    Poly m(f + 1, 0);
    std::uint32_t v = idx;
    for (int i = 0; i < f; ++i) {
      m[i] = static_cast<int>(v % p);
      v /= p;
    }
    m[f] = 1;
    if (m[0] == 0 && f > 1) continue;
    if (f == 1) {
      // x - g for the smallest generator g of GF(p)^*
      int g0 = (p - m[0]) % p;
      if (p == 2) {
        if (g0 != 1) continue;
      } else {
        if (g0 == 0) continue;
        int order = 1;
        long long acc = g0;
        while (acc != 1) {
          acc = acc * g0 % p;
          ++order;
        }
        if (order != p - 1) continue;
      }
      mod = m;
      break;
    }
    if (!irreducible(m, p)) continue;
    // primitive iff x has multiplicative order q-1
    Poly cur{1};
    Poly x{0, 1};
    std::uint32_t order = 0;
    do {
      cur = mulmod(cur, x, m, p);
      ++order;
      trim(cur);
    } while (!(cur.size() == 1 && cur[0] == 1) && order < q);
    if (order == q - 1) {
      mod = m;
      break;
    }
  }
  auto fld = get(p, f, mod);
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  canonical_registry()[{p, f}] = fld;
  return fld;
}

FieldPtr Field::get(int p, int f, const std::vector<int>& modulus) {
  if (!is_prime(p) || f < 1) throw InvalidField("p must be prime and f >= 1");
  if (ipow(p, f) > kMaxOrder) throw InvalidField("field order exceeds 2^16");
  if (static_cast<int>(modulus.size()) != f + 1) throw InvalidField("modulus must have f+1 coefficients");
  Poly m(modulus);
  for (int& c : m) c = ((c % p) + p) % p;
  if (m[f] != 1) throw InvalidField("modulus must be monic");
  if (!irreducible(m, p)) throw InvalidField("modulus is reducible");
  std::string key = make_key(p, f, m);
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  auto it = field_registry().find(key);
  if (it != field_registry().end()) return it->second;
  auto fld = std::make_shared<const Field>(p, f, m);
  field_registry()[key] = fld;
  return fld;
}

elem Field::pow(elem a, std::int64_t e) const {
  if (e == 0) return 1;
  if (a == 0) {
    if (e < 0) throw DivisionByZero("negative power of zero");
    return 0;
  }
  std::int64_t m = static_cast<std::int64_t>(q_) - 1;
  std::int64_t k = (static_cast<std::int64_t>(log_[a]) * (((e % m) + m) % m)) % m;
  return exp_[k];
}

elem Field::frob(elem a, int j) const {
  if (a == 0 || f_ == 1) return a;
  int jj = ((j % f_) + f_) % f_;
  std::int64_t e = 1;
  for (int i = 0; i < jj; ++i) e *= p_;
  return pow(a, e);
}

elem Field::gexp(std::int64_t k) const {
  std::int64_t m = static_cast<std::int64_t>(q_) - 1;
  return exp_[((k % m) + m) % m];
}

elem Field::from_int(long long v) const { return static_cast<elem>(((v % p_) + p_) % p_); }

std::vector<int> Field::coeffs(elem a) const {
  std::vector<int> c(f_, 0);
  for (int i = 0; i < f_; ++i) {
    c[i] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

elem Field::from_coeffs(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) > f_) throw InvalidField("too many coefficients");
  elem v = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * p_ + static_cast<elem>(((c[i] % p_) + p_) % p_);
  return v;
}

bool Field::is_square(elem a) const {
  if (a == 0 || p_ == 2) return true;
  return log_[a] % 2 == 0;
}

std::string Field::to_string(elem a) const {
  if (f_ == 1) return std::to_string(a);
  auto c = coeffs(a);
  std::ostringstream os;
  bool first = true;
  for (int i = f_ - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c[i];
    } else {
      if (c[i] != 1) os << c[i] << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

void Fq::check(const Fq& o) const {
  if (!field_ || !o.field_ || field_->key() != o.field_->key()) throw FieldMismatch("operands from different fields");
}
Fq Fq::operator+(const Fq& o) const {
  check(o);
  return {field_, field_->add(v_, o.v_)};
}
Fq Fq::operator-(const Fq& o) const {
  check(o);
  return {field_, field_->sub(v_, o.v_)};
}
Fq Fq::operator*(const Fq& o) const {
  check(o);
  return {field_, field_->mul(v_, o.v_)};
}
Fq Fq::operator/(const Fq& o) const {
  check(o);
  return {field_, field_->div(v_, o.v_)};
}
bool Fq::operator==(const Fq& o) const {
  check(o);
  return v_ == o.v_;
}

Fq arith(const Fq& x, const Fq& y, ArithKind kind) {
  switch (kind) {
    case ArithKind::add:
      return x + y;
    case ArithKind::mul:
      return x * y;
    case ArithKind::inv:
      return x.inv();
    case ArithKind::pow: {
      // exponent is y read as an integer through its packed value
      return x.pow(static_cast<std::int64_t>(y.value()));
    }
  }
  return x;
}

Fq frobenius(const Fq& x, int j) { return x.frobenius(j); }

Tower::Tower(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
  if (small_->p() != big_->p() || big_->f() % small_->f() != 0) throw NotASubfield("degree does not divide");
  b_ = big_->f() / small_->f();
  const Field& B = *big_;
  const Field& S = *small_;
  // a root of the small modulus inside the big field
  elem root = 0;
  bool found = false;
  for (elem r = 0; r < B.q() && !found; ++r) {
    elem acc = 0, pw = 1;
    for (int c : S.modulus()) {
      acc = B.add(acc, B.mul(B.from_int(c), pw));
      pw = B.mul(pw, r);
    }
    if (acc == 0) {
      root = r;
      found = true;
    }
  }
  if (!found) throw NoTower("modulus has no root in extension");
  embed_.assign(S.q(), 0);
  restrict_.assign(B.q(), -1);
  for (elem s = 0; s < S.q(); ++s) {
    auto c = S.coeffs(s);
    elem acc = 0, pw = 1;
    for (int i = 0; i < S.f(); ++i) {
      acc = B.add(acc, B.mul(B.from_int(c[i]), pw));
      pw = B.mul(pw, root);
    }
    embed_[s] = acc;
    restrict_[acc] = s;
  }
  basis_.resize(b_);
  elem theta = B.primitive();
  elem pw = 1;
  for (int k = 0; k < b_; ++k) {
    basis_[k] = pw;
    pw = B.mul(pw, theta);
  }
  coords_.assign(static_cast<std::size_t>(B.q()) * b_, 0);
  std::vector<elem> c(b_, 0);
  std::uint32_t total = B.q();
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    std::uint32_t v = idx;
    for (int k = 0; k < b_; ++k) {
      c[k] = v % S.q();
      v /= S.q();
    }
    elem x = from_coords(c.data());
    for (int k = 0; k < b_; ++k) coords_[static_cast<std::size_t>(x) * b_ + k] = c[k];
  }
}

elem Tower::from_coords(const elem* c) const {
  elem acc = 0;
  for (int k = 0; k < b_; ++k) acc = big_->add(acc, big_->mul(embed_[c[k]], basis_[k]));
  return acc;
}

elem Tower::trace(elem x) const {
  elem acc = 0;
  for (int i = 0; i < b_; ++i) acc = big_->add(acc, big_->frob(x, i * small_->f()));
  return acc;
}

elem Tower::norm(elem x) const {
  elem acc = 1;
  for (int i = 0; i < b_; ++i) acc = big_->mul(acc, big_->frob(x, i * small_->f()));
  return acc;
}

TowerPtr Tower::get(const FieldPtr& small, const FieldPtr& big) {
  std::pair<std::string, std::string> key{small->key(), big->key()};
  {
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto it = tower_registry().find(key);
    if (it != tower_registry().end()) return it->second;
  }
  auto t = std::make_shared<const Tower>(small, big);
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  tower_registry()[key] = t;
  return t;
}

TowerPtr Tower::get(int p, int f, int b) { return get(Field::get(p, f), Field::get(p, f * b)); }

Fq trace_to(const Fq& x, const FieldPtr& sub) {
  const FieldPtr& big = x.field();
  if (sub->p() != big->p() || big->f() % sub->f() != 0) throw NotASubfield("not a subfield of the owner");
  auto t = Tower::get(sub, big);
  std::int64_t r = t->restrict_elem(t->trace(x.value()));
  if (r < 0) throw NotASubfield("trace did not land in subfield");
  return {sub, static_cast<elem>(r)};
}

Fq solve_trace_one(const TowerPtr& ext) {
  if (ext->degree() != 2) throw NoTower("solve_trace_one needs a quadratic extension");
  const Field& B = *ext->big();
  for (elem x = 0; x < B.q(); ++x)
    if (ext->trace(x) == 1) return {ext->big(), x};
  throw NoSuchConstant("no trace-one element");
}

Fq find_irreducible_mu(const FieldPtr& fld) {
  const Field& F = *fld;
  for (elem mu = 0; mu < F.q(); ++mu) {
    bool root = false;
    for (elem y = 0; y < F.q() && !root; ++y)
      if (F.add(F.add(F.mul(y, y), y), mu) == 0) root = true;
    if (!root) return {fld, mu};
  }
  throw NoSuchConstant("x^2+x+mu splits for every mu");
}

Fq find_mu_norm_minus_one(const TowerPtr& ext) {
  if (ext->degree() != 2) throw NoTower("find_mu_norm_minus_one needs a quadratic extension");
  const Field& B = *ext->big();
  std::int64_t q = ext->small()->q();
  elem minus_one = B.neg(1);
  for (elem x = 1; x < B.q(); ++x)
    if (B.pow(x, q - 1) == minus_one) return {ext->big(), x};
  throw NoSuchConstant("no mu with mu^(q-1) = -1");
}

}  // namespace factorlab
