#include "factorlab/shapes.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "named_orders_data.hpp"

namespace factorlab {

BigInt big_pow(const BigInt& base, unsigned long exponent) {
  BigInt r = 1, b = base;
  while (exponent) {
    if (exponent & 1) r *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return r;
}

BigInt big_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// ---------------------------------------------------------------- orders

namespace {

const std::set<std::string> kClassical = {
    "SL",     "GL",     "SigmaL", "GammaL",  "PSL",     "PGL",     "PSigmaL", "PGammaL", "SU",     "GU",
    "SigmaU", "GammaU", "PSU",    "PGU",     "Sp",      "PSp",     "GammaSp", "Omega+",  "Omega-", "Omega",
    "SO+",    "SO-",    "SO",     "GO+",     "GO-",     "GO",      "GammaO+", "GammaO-", "GammaO", "POmega+",
    "POmega-", "POmega", "ASL",   "AGL",     "ASigmaL", "AGammaL", "Spin"};

struct QInfo {
  BigInt q;
  long long p;
  long long f;
};

QInfo q_info(const BigInt& q) {
  if (q < 2) throw IllegalParameters("field order must be at least 2");
  BigInt p = 2;
  BigInt x = q;
  while (x % p != 0) {
    ++p;
    if (p * p > x) {
      p = x;
      break;
    }
  }
  long long f = 0;
  while (x % p == 0) {
    x /= p;
    ++f;
  }
  if (x != 1) throw IllegalParameters("field order " + q.str() + " is not a prime power");
  return {q, p.convert_to<long long>(), f};
}

BigInt sl_order(long long n, const BigInt& q) {
  BigInt r = big_pow(q, static_cast<unsigned long>(n * (n - 1) / 2));
  for (long long i = 2; i <= n; ++i) r *= big_pow(q, i) - 1;
  return r;
}

BigInt su_order(long long n, const BigInt& q) {
  BigInt r = big_pow(q, static_cast<unsigned long>(n * (n - 1) / 2));
  for (long long i = 2; i <= n; ++i) r *= (i % 2 == 0) ? big_pow(q, i) - 1 : big_pow(q, i) + 1;
  return r;
}

BigInt sp_order(long long n, const BigInt& q) {
  long long m = n / 2;
  BigInt r = big_pow(q, static_cast<unsigned long>(m * m));
  for (long long i = 1; i <= m; ++i) r *= big_pow(q, 2 * i) - 1;
  return r;
}

// |SO^eps_{2m}(q)| for q odd, |Omega^eps_{2m}(q)| for q even
BigInt orth_even_core(long long m, const BigInt& q, int eps) {
  if (m == 0) return 1;
  BigInt r = big_pow(q, static_cast<unsigned long>(m * (m - 1)));
  r *= eps > 0 ? big_pow(q, m) - 1 : big_pow(q, m) + 1;
  for (long long i = 1; i < m; ++i) r *= big_pow(q, 2 * i) - 1;
  return r;
}

BigInt gcd_small(const BigInt& a, const BigInt& b) { return big_gcd(a, b); }

}  // namespace

bool is_classical_family(const std::string& family) { return kClassical.count(family) > 0; }

BigInt classical_order(const std::string& fam, long long n, const BigInt& q) {
  if (!is_classical_family(fam)) throw UnknownFamily("unknown classical family " + fam);
  if (n < 0) throw IllegalParameters("negative dimension");
  QInfo qi = q_info(q);
  const BigInt& Q = qi.q;
  BigInt f = qi.f;
  auto need_even = [&]() {
    if (n % 2) throw IllegalParameters(fam + " needs even dimension");
  };
  auto need_odd = [&]() {
    if (n % 2 == 0) throw IllegalParameters(fam + " needs odd dimension");
  };
  if (n == 0) return 1;
  if (fam == "SL") return sl_order(n, Q);
  if (fam == "GL") return sl_order(n, Q) * (Q - 1);
  if (fam == "SigmaL") return sl_order(n, Q) * f;
  if (fam == "GammaL") return sl_order(n, Q) * (Q - 1) * f;
  if (fam == "PSL") return sl_order(n, Q) / gcd_small(n, Q - 1);
  if (fam == "PGL") return sl_order(n, Q);
  if (fam == "PSigmaL") return sl_order(n, Q) * f / gcd_small(n, Q - 1);
  if (fam == "PGammaL") return sl_order(n, Q) * f;
  if (fam == "ASL") return big_pow(Q, n) * sl_order(n, Q);
  if (fam == "AGL") return big_pow(Q, n) * sl_order(n, Q) * (Q - 1);
  if (fam == "ASigmaL") return big_pow(Q, n) * sl_order(n, Q) * f;
  if (fam == "AGammaL") return big_pow(Q, n) * sl_order(n, Q) * (Q - 1) * f;
  if (fam == "SU") return su_order(n, Q);
  if (fam == "GU") return su_order(n, Q) * (Q + 1);
  if (fam == "SigmaU") return su_order(n, Q) * 2 * f;
  if (fam == "GammaU") return su_order(n, Q) * (Q + 1) * 2 * f;
  if (fam == "PSU") return su_order(n, Q) / gcd_small(n, Q + 1);
  if (fam == "PGU") return su_order(n, Q);
  if (fam == "Sp" || fam == "PSp" || fam == "GammaSp") {
    need_even();
    BigInt r = sp_order(n, Q);
    if (fam == "PSp") r /= gcd_small(2, Q - 1);
    if (fam == "GammaSp") r *= f;
    return r;
  }
  bool odd_q = qi.p != 2;
  if (fam == "Spin") {
    need_odd();
    return sp_order(n - 1, Q);
  }
  if (fam == "Omega" || fam == "SO" || fam == "GO" || fam == "GammaO" || fam == "POmega") {
    need_odd();
    long long m = n / 2;
    BigInt so = sp_order(2 * m, Q);  // |SO_{2m+1}(q)| for q odd, |Omega_{2m+1}(q)| for q even
    if (!odd_q) {
      if (fam == "Omega" || fam == "POmega" || fam == "SO" || fam == "GO") return so;
      return so * f;
    }
    if (fam == "Omega" || fam == "POmega") return so / 2;
    if (fam == "SO") return so;
    if (fam == "GO") return so * 2;
    return so * 2 * f;
  }
  int eps = fam.back() == '+' ? 1 : -1;
  need_even();
  long long m = n / 2;
  BigInt core = orth_even_core(m, Q, eps);
  std::string base = fam.substr(0, fam.size() - 1);
  if (base == "Omega") return odd_q ? core / 2 : core;
  if (base == "SO") return odd_q ? core : core * 2;
  if (base == "GO") return core * 2;
  if (base == "GammaO") return core * 2 * f;
  if (base == "POmega") {
    BigInt om = odd_q ? core / 2 : core;
    if (!odd_q) return om;
    BigInt qm = big_pow(Q, m);
    BigInt z = eps > 0 ? gcd_small(4, qm - 1) : gcd_small(4, qm + 1);
    return om * 2 / z;
  }
  throw UnknownFamily("unknown classical family " + fam);
}

namespace {

struct DerivedKey {
  std::string fam;
  long long n;
  long long q;
  bool operator<(const DerivedKey& o) const { return std::tie(fam, n, q) < std::tie(o.fam, o.n, o.q); }
};

// first derived subgroups of the non-perfect small cases
const std::map<DerivedKey, long long>& derived_exceptions() {
  static const std::map<DerivedKey, long long> t = {
      {{"SL", 2, 2}, 3},   {{"SL", 2, 3}, 8},   {{"Sp", 2, 2}, 3},      {{"Sp", 2, 3}, 8},
      {{"Sp", 4, 2}, 360}, {{"SU", 2, 2}, 3},   {{"SU", 2, 3}, 8},      {{"SU", 3, 2}, 54},
      {{"PSL", 2, 2}, 3},  {{"PSL", 2, 3}, 4},  {{"PSp", 4, 2}, 360},   {{"PSU", 3, 2}, 9},
      {{"Omega", 3, 3}, 4}, {{"Omega", 5, 2}, 360}, {{"Omega+", 4, 2}, 9}, {{"Omega+", 4, 3}, 64},
      {{"G2", 0, 2}, 6048}, {{"Sz", 0, 2}, 5},  {{"2G2", 0, 3}, 504}};
  return t;
}

bool is_perfect_classical(const std::string& fam, long long n, long long q) {
  std::string core = fam;
  if (core.rfind("P", 0) == 0 && core != "PSL" && core != "PSU" && core != "PSp") core = core.substr(1);
  if (fam == "SL" || fam == "PSL") return !(n == 2 && q <= 3) && n >= 2;
  if (fam == "Sp" || fam == "PSp") return !(n == 2 && q <= 3) && !(n == 4 && q == 2) && n >= 2;
  if (fam == "SU" || fam == "PSU") return !(n == 2 && q <= 3) && !(n == 3 && q == 2) && n >= 2;
  if (fam == "Omega" || fam == "POmega") {
    if (n < 3) return false;
    if (q % 2 == 0) return is_perfect_classical("Sp", n - 1, q);
    return !(n == 3 && q == 3);
  }
  if (fam == "Omega+" || fam == "POmega+") return n >= 6 || (n == 4 && q > 3);
  if (fam == "Omega-" || fam == "POmega-") return n >= 4;
  return false;
}

}  // namespace

BigInt derived_classical_order(const std::string& family, long long n, const BigInt& q) {
  if (n == 0) return 1;
  long long qs = q.convert_to<long long>();
  if ((family == "SL" || family == "SU" || family == "PSL" || family == "PSU") && n == 1) return 1;
  if (is_perfect_classical(family, n, qs)) return classical_order(family, n, q);
  auto& t = derived_exceptions();
  auto it = t.find({family, n, qs});
  if (it != t.end()) return it->second;
  throw UnsupportedParameters("derived subgroup of " + family + "(" + std::to_string(n) + "," + q.str() +
                              ") is not tabulated");
}

BigInt residual_classical_order(const std::string& family, long long n, const BigInt& q) {
  if (n == 0) return 1;
  long long qs = q.convert_to<long long>();
  if ((family == "SL" || family == "SU" || family == "PSL" || family == "PSU") && n == 1) return 1;
  if (is_perfect_classical(family, n, qs)) return classical_order(family, n, q);
  auto& t = derived_exceptions();
  auto it = t.find({family, n, qs});
  if (it == t.end())
    throw UnsupportedParameters("solvable residual of " + family + "(" + std::to_string(n) + "," + q.str() +
                                ") is not tabulated");
  // the derived subgroup is perfect only for Sp4(2) and its relatives
  return it->second == 360 ? BigInt(360) : BigInt(1);
}

// ---------------------------------------------------------------- ppd

namespace {

using u128 = unsigned __int128;

// a*b mod n for n < 2^96
u128 mulmod(u128 a, u128 b, u128 n) {
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    u128 hi_free = a * b;
    if ((a >> 32) == 0 || (b >> 32) == 0 || (((a >> 32) * (b >> 32)) >> 64) == 0) {
      if (a == 0 || hi_free / a == b) return hi_free % n;
    }
  }
  u128 r = 0;
  for (int sh = 64; sh >= 0; sh -= 32) {
    std::uint64_t digit = static_cast<std::uint64_t>((b >> sh) & 0xffffffffu);
    r = (r << 32) % n;
    r = (r + (a * digit) % n) % n;
  }
  return r;
}

u128 powmod(u128 a, u128 e, u128 n) {
  u128 r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod(r, a, n);
    a = mulmod(a, a, n);
    e >>= 1;
  }
  return r;
}

bool is_prime_u128(u128 n) {
  if (n < 2) return false;
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u, 47u}) {
    if (n % p == 0) return n == p;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u, 47u}) {
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

u128 gcd128(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 rho(u128 n, u128 c) {
  if (n % 2 == 0) return 2;
  u128 y = 2, x = 0, g = 1, q = 1, ys = 0;
  std::uint64_t r = 1, m = 128;
  auto f = [&](u128 v) { return (mulmod(v, v, n) + c) % n; };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = gcd128(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd128(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

BigInt from_u128(u128 x) {
  BigInt r = static_cast<std::uint64_t>(x >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(x);
  return r;
}

void factor_into(u128 n, std::set<BigInt>& out) {
  if (n == 1) return;
  for (unsigned p = 2; p < 1000 && static_cast<u128>(p) * p <= n; ++p)
    while (n % p == 0) {
      out.insert(BigInt(p));
      n /= p;
    }
  if (n == 1) return;
  if (is_prime_u128(n)) {
    out.insert(from_u128(n));
    return;
  }
  for (u128 c = 1;; ++c) {
    u128 d = rho(n, c);
    if (d != n) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

u128 to_u128(const BigInt& x) {
  if (x < 0 || msb(x) >= 96) throw UnsupportedParameters("ppd argument too large");
  u128 r = 0;
  BigInt y = x;
  int sh = 0;
  while (y > 0) {
    r |= static_cast<u128>(static_cast<std::uint64_t>(y & 0xffffffffu)) << sh;
    y >>= 32;
    sh += 32;
  }
  return r;
}

std::set<BigInt> prime_factors(const BigInt& x) {
  std::set<BigInt> r;
  if (x > 1) factor_into(to_u128(x), r);
  return r;
}

// a has order exactly k modulo the prime p
bool has_order(long long a, long long k, const BigInt& p) {
  using boost::multiprecision::powm;
  BigInt A = BigInt(a) % p;
  if (A == 0 || powm(A, BigInt(k), p) != 1) return false;
  long long m = k;
  for (long long r = 2; r <= m; ++r) {
    if (m % r) continue;
    while (m % r == 0) m /= r;
    if (powm(A, BigInt(k / r), p) == 1) return false;
  }
  return true;
}

}  // namespace

std::set<BigInt> ppd(long long a, long long k) {
  if (a < 2 || k < 2) throw IllegalParameters("ppd needs a >= 2 and k >= 2");
  if (a == 2 && k == 6) return {BigInt(7)};
  // primitive divisors of a^k - 1 divide the cyclotomic value; keep those of order k
  BigInt ak = big_pow(BigInt(a), k) - 1;
  BigInt prim = ak;
  for (long long j = 1; j < k; ++j) {
    if (k % j) continue;
    BigInt g = big_gcd(prim, big_pow(BigInt(a), j) - 1);
    while (g > 1) {
      prim /= g;
      g = big_gcd(prim, g);
    }
  }
  std::set<BigInt> r;
  for (const BigInt& p : prime_factors(prim))
    if (has_order(a, k, p)) r.insert(p);
  return r;
}

std::set<BigInt> ppd_bruteforce(long long a, long long k) {
  if (a < 2 || k < 2) throw IllegalParameters("ppd needs a >= 2 and k >= 2");
  std::set<BigInt> r;
  for (const BigInt& p : prime_factors(big_pow(BigInt(a), k) - 1)) {
    bool prim = true;
    for (long long j = 1; j < k && prim; ++j)
      if ((big_pow(BigInt(a), j) - 1) % p == 0) prim = false;
    if (prim) r.insert(p);
  }
  return r;
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
  std::string s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    std::string near = pos < s.size() ? "'" + s.substr(pos, 8) + "'" : "end of input";
    throw SyntaxError("at position " + std::to_string(pos) + " near " + near + ": expected " + expected + " in \"" + s +
                      "\"");
  }
  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    ws();
    return pos < s.size() && s[pos] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("'") + c + "'");
  }
  bool at_end() {
    ws();
    return pos >= s.size();
  }
  bool peek_digit() {
    ws();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  bool peek_alpha() {
    ws();
    return pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]));
  }
  std::string number() {
    ws();
    std::size_t st = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (st == pos) fail("integer");
    return s.substr(st, pos - st);
  }
  std::string ident() {
    ws();
    std::size_t st = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (st == pos) fail("identifier");
    return s.substr(st, pos - st);
  }
  // digits immediately followed by an upper-case letter, as in 2G2 or 3D4
  bool peek_twisted_name() {
    ws();
    std::size_t i = pos;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return i > pos && i < s.size() && std::isupper(static_cast<unsigned char>(s[i]));
  }
  // single-letter 'x' used as the direct-product operator
  bool peek_times() {
    ws();
    if (pos >= s.size() || s[pos] != 'x') return false;
    return pos + 1 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + 1]));
  }

  // arithmetic
  ArithPtr mk(Arith::Op op, std::vector<ArithPtr> args) {
    auto a = std::make_shared<Arith>();
    a->op = op;
    a->args = std::move(args);
    return a;
  }
  ArithPtr sum() {
    ArithPtr l = term();
    for (;;) {
      if (eat('+'))
        l = mk(Arith::Op::add, {l, term()});
      else if (eat('-'))
        l = mk(Arith::Op::sub, {l, term()});
      else
        return l;
    }
  }
  ArithPtr term() {
    ArithPtr l = unary();
    for (;;) {
      if (eat('*'))
        l = mk(Arith::Op::mul, {l, unary()});
      else if (eat('/'))
        l = mk(Arith::Op::div, {l, unary()});
      else if (eat('%'))
        l = mk(Arith::Op::mod, {l, unary()});
      else
        return l;
    }
  }
  ArithPtr unary() {
    if (eat('-')) return mk(Arith::Op::neg, {unary()});
    ArithPtr b = primary();
    if (eat('^')) return mk(Arith::Op::pow, {b, unary()});
    return b;
  }
  ArithPtr primary() {
    if (peek_digit()) {
      auto a = std::make_shared<Arith>();
      a->op = Arith::Op::num;
      a->value = BigInt(number());
      return a;
    }
    if (eat('(')) {
      ArithPtr e = sum();
      expect(')');
      return e;
    }
    if (peek_alpha()) {
      std::size_t save = pos;
      std::string id = ident();
      if (id == "gcd") {
        expect('(');
        ArithPtr x = sum();
        expect(',');
        ArithPtr y = sum();
        expect(')');
        return mk(Arith::Op::gcd, {x, y});
      }
      if (id == "twopart" || id == "fdeg") {
        expect('(');
        ArithPtr x = sum();
        expect(')');
        auto a = std::make_shared<Arith>();
        a->op = Arith::Op::call;
        a->name = id;
        a->args = {x};
        return a;
      }
      if (!std::islower(static_cast<unsigned char>(id[0]))) {
        pos = save;
        fail("binding symbol");
      }
      auto a = std::make_shared<Arith>();
      a->op = Arith::Op::sym;
      a->name = id;
      return a;
    }
    fail("integer, symbol, gcd or '('");
  }

  // predicates
  bool peek_word(const char* w) {
    ws();
    std::size_t n = std::strlen(w);
    if (s.compare(pos, n, w) != 0) return false;
    return pos + n >= s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + n]));
  }
  bool eat_word(const char* w) {
    if (!peek_word(w)) return false;
    pos += std::strlen(w);
    return true;
  }
  PredicatePtr pnode(Predicate::Op op, std::vector<PredicatePtr> kids) {
    auto p = std::make_shared<Predicate>();
    p->op = op;
    p->kids = std::move(kids);
    return p;
  }
  PredicatePtr disj() {
    PredicatePtr l = conj();
    while (eat_word("or")) l = pnode(Predicate::Op::disj, {l, conj()});
    return l;
  }
  PredicatePtr conj() {
    PredicatePtr l = pneg();
    while (eat_word("and")) l = pnode(Predicate::Op::conj, {l, pneg()});
    return l;
  }
  PredicatePtr pneg() {
    if (eat_word("not")) return pnode(Predicate::Op::neg, {pneg()});
    if (peek('(')) {
      std::size_t save = pos;
      try {
        ++pos;
        PredicatePtr inner = disj();
        expect(')');
        if (!peek_rel()) return inner;
      } catch (const SyntaxError&) {
      }
      pos = save;
    }
    return cmp();
  }
  bool peek_rel() {
    ws();
    return pos < s.size() && (s[pos] == '=' || s[pos] == '!' || s[pos] == '<' || s[pos] == '>');
  }
  PredicatePtr cmp() {
    auto p = std::make_shared<Predicate>();
    p->op = Predicate::Op::cmp;
    ArithPtr l = sum();
    ws();
    for (const char* r : {"==", "!=", "<=", ">=", "<", ">"}) {
      std::size_t n = std::strlen(r);
      if (s.compare(pos, n, r) == 0) {
        pos += n;
        p->rel = r;
        break;
      }
    }
    if (p->rel.empty()) fail("comparison operator");
    p->terms = {l, sum()};
    return p;
  }

  // shapes
  ShapePtr node(Shape::Kind k, std::string name, std::vector<ArithPtr> params, std::vector<ShapePtr> kids) {
    auto n = std::make_shared<Shape>();
    n->kind = k;
    n->name = std::move(name);
    n->params = std::move(params);
    n->kids = std::move(kids);
    return n;
  }
  ShapePtr expr() {
    ShapePtr l = prod();
    while (eat('/')) l = node(Shape::Kind::quotient, "", {quot_arg()}, {l});
    return l;
  }
  ArithPtr quot_arg() {
    if (peek('(')) {
      ++pos;
      ArithPtr a = sum();
      expect(')');
      return a;
    }
    if (peek_alpha()) {
      std::size_t save = pos;
      std::string id = ident();
      pos = save;
      if (id == "gcd") return primary();
    }
    return primary();
  }
  ShapePtr prod() {
    ShapePtr l = chain();
    while (peek_times()) {
      ++pos;
      l = node(Shape::Kind::product, "", {}, {l, chain()});
    }
    return l;
  }
  ShapePtr chain() {
    ShapePtr l = postfix();
    for (;;) {
      if (eat(':'))
        l = node(Shape::Kind::split, "", {}, {l, postfix()});
      else if (eat('.'))
        l = node(Shape::Kind::ext, "", {}, {l, postfix()});
      else
        return l;
    }
  }
  ShapePtr postfix() {
    ShapePtr a = atom();
    for (;;) {
      if (eat('^')) {
        ArithPtr e;
        if (eat('(')) {
          e = sum();
          expect(')');
        } else {
          e = primary();
        }
        a = node(Shape::Kind::power, "", {e}, {a});
      } else if (eat('\'')) {
        a = node(Shape::Kind::derived, "", {}, {a});
      } else {
        return a;
      }
    }
  }
  ShapePtr atom() {
    if (eat('[')) {
      ArithPtr a = sum();
      expect(']');
      return node(Shape::Kind::bracket, "", {a}, {});
    }
    if (eat('(')) {
      ShapePtr e = expr();
      expect(')');
      return node(Shape::Kind::paren, "", {}, {e});
    }
    if (peek_twisted_name() || (peek_alpha() && std::isupper(static_cast<unsigned char>(s[pos])))) {
      std::size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string name = s.substr(st, pos - st);
      if (pos + 1 < s.size() && (s[pos] == '+' || s[pos] == '-') && s[pos + 1] == '(') name += s[pos++];
      if (peek('(')) {
        std::size_t at = pos;
        ++pos;
        std::vector<ArithPtr> args{sum()};
        if (eat(',')) args.push_back(sum());
        expect(')');
        bool classical = is_classical_family(name);
        bool named = NamedOrders::instance().has_family(name);
        if ((classical && args.size() != 2) || (named && args.size() != 1)) {
          pos = at;
          fail(classical ? "two family arguments" : "one family argument");
        }
        if (!classical && !named) throw UnknownFamily("unknown family " + name + " in \"" + s + "\"");
        return node(Shape::Kind::family, name, args, {});
      }
      if (!NamedOrders::instance().has(name)) throw UnknownFamily("unknown group name " + name + " in \"" + s + "\"");
      return node(Shape::Kind::named, name, {}, {});
    }
    if (peek_digit() || peek_alpha()) {
      ArithPtr a = primary();
      return node(Shape::Kind::integer, "", {a}, {});
    }
    fail("group atom");
  }
};

int prec(Arith::Op op) {
  switch (op) {
    case Arith::Op::add:
    case Arith::Op::sub:
      return 1;
    case Arith::Op::mul:
    case Arith::Op::div:
    case Arith::Op::mod:
      return 2;
    case Arith::Op::neg:
      return 3;
    case Arith::Op::pow:
      return 4;
    default:
      return 5;
  }
}

std::string pa(const ArithPtr& a, int min_prec) {
  std::string r;
  switch (a->op) {
    case Arith::Op::num:
      r = a->value.str();
      break;
    case Arith::Op::sym:
      r = a->name;
      break;
    case Arith::Op::gcd:
      r = "gcd(" + pa(a->args[0], 0) + "," + pa(a->args[1], 0) + ")";
      break;
    case Arith::Op::call:
      r = a->name + "(" + pa(a->args[0], 0) + ")";
      break;
    case Arith::Op::neg:
      r = "-" + pa(a->args[0], 3);
      break;
    case Arith::Op::add:
      r = pa(a->args[0], 1) + "+" + pa(a->args[1], 2);
      break;
    case Arith::Op::sub:
      r = pa(a->args[0], 1) + "-" + pa(a->args[1], 2);
      break;
    case Arith::Op::mul:
      r = pa(a->args[0], 2) + "*" + pa(a->args[1], 3);
      break;
    case Arith::Op::div:
      r = pa(a->args[0], 2) + "/" + pa(a->args[1], 3);
      break;
    case Arith::Op::mod:
      r = pa(a->args[0], 2) + "%" + pa(a->args[1], 3);
      break;
    case Arith::Op::pow:
      r = pa(a->args[0], 5) + "^" + pa(a->args[1], 3);
      break;
  }
  if (prec(a->op) < min_prec) return "(" + r + ")";
  return r;
}

bool simple(const ArithPtr& a) { return a->op == Arith::Op::num || a->op == Arith::Op::sym; }

std::string ps(const ShapePtr& s) {
  switch (s->kind) {
    case Shape::Kind::family: {
      std::string r = s->name + "(" + pa(s->params[0], 0);
      if (s->params.size() > 1) r += "," + pa(s->params[1], 0);
      return r + ")";
    }
    case Shape::Kind::power: {
      std::string base = ps(s->kids[0]);
      auto k = s->kids[0]->kind;
      if (k == Shape::Kind::split || k == Shape::Kind::ext || k == Shape::Kind::product || k == Shape::Kind::quotient)
        base = "(" + base + ")";
      return base + "^" + (simple(s->params[0]) ? pa(s->params[0], 0) : "(" + pa(s->params[0], 0) + ")");
    }
    case Shape::Kind::bracket:
      return "[" + pa(s->params[0], 0) + "]";
    case Shape::Kind::named:
      return s->name;
    case Shape::Kind::derived:
      return ps(s->kids[0]) + "'";
    case Shape::Kind::integer:
      return pa(s->params[0], 5);
    case Shape::Kind::split:
      return ps(s->kids[0]) + ":" + ps(s->kids[1]);
    case Shape::Kind::ext:
      return ps(s->kids[0]) + "." + ps(s->kids[1]);
    case Shape::Kind::product:
      return ps(s->kids[0]) + " x " + ps(s->kids[1]);
    case Shape::Kind::quotient:
      return ps(s->kids[0]) + "/" + (simple(s->params[0]) ? pa(s->params[0], 0) : "(" + pa(s->params[0], 0) + ")");
    case Shape::Kind::paren:
      return "(" + ps(s->kids[0]) + ")";
  }
  return "";
}

long long to_ll(const BigInt& x, const char* what) {
  if (x > BigInt(1000000000000LL) || x < BigInt(-1000000000000LL))
    throw IllegalParameters(std::string(what) + " out of range: " + x.str());
  return x.convert_to<long long>();
}

void collect(const ArithPtr& a, std::vector<std::string>& out) {
  if (a->op == Arith::Op::sym && std::find(out.begin(), out.end(), a->name) == out.end()) out.push_back(a->name);
  for (const auto& k : a->args) collect(k, out);
}

void collect(const ShapePtr& s, std::vector<std::string>& out) {
  for (const auto& p : s->params) collect(p, out);
  for (const auto& k : s->kids) collect(k, out);
}

BigInt factorial(long long n) {
  BigInt r = 1;
  for (long long i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt derived_order(const ShapePtr& s, const Bindings& b);

}  // namespace

ShapePtr parse_shape(const std::string& s) {
  Parser p{s};
  ShapePtr r = p.expr();
  if (!p.at_end()) p.fail("end of shape");
  return r;
}

ArithPtr parse_arith(const std::string& s) {
  Parser p{s};
  ArithPtr r = p.sum();
  if (!p.at_end()) p.fail("end of expression");
  return r;
}

PredicatePtr parse_predicate(const std::string& s) {
  Parser p{s};
  PredicatePtr r = p.disj();
  if (!p.at_end()) p.fail("end of predicate");
  return r;
}

bool eval_predicate(const PredicatePtr& p, const Bindings& b) {
  switch (p->op) {
    case Predicate::Op::conj:
      return eval_predicate(p->kids[0], b) && eval_predicate(p->kids[1], b);
    case Predicate::Op::disj:
      return eval_predicate(p->kids[0], b) || eval_predicate(p->kids[1], b);
    case Predicate::Op::neg:
      return !eval_predicate(p->kids[0], b);
    case Predicate::Op::cmp:
      break;
  }
  BigInt x = eval_arith(p->terms[0], b), y = eval_arith(p->terms[1], b);
  const std::string& r = p->rel;
  if (r == "==") return x == y;
  if (r == "!=") return x != y;
  if (r == "<") return x < y;
  if (r == "<=") return x <= y;
  if (r == ">") return x > y;
  return x >= y;
}

std::vector<std::string> free_symbols(const PredicatePtr& p) {
  std::vector<std::string> r;
  std::vector<const Predicate*> st{p.get()};
  while (!st.empty()) {
    const Predicate* x = st.back();
    st.pop_back();
    for (const auto& t : x->terms) collect(t, r);
    for (auto it = x->kids.rbegin(); it != x->kids.rend(); ++it) st.push_back(it->get());
  }
  return r;
}

std::vector<std::string> free_symbols(const ArithPtr& a) {
  std::vector<std::string> r;
  collect(a, r);
  return r;
}

std::string print_shape(const ShapePtr& s) { return ps(s); }
std::string print_arith(const ArithPtr& a) { return pa(a, 0); }

std::vector<std::string> free_symbols(const ShapePtr& s) {
  std::vector<std::string> r;
  collect(s, r);
  return r;
}

BigInt eval_arith(const ArithPtr& a, const Bindings& b) {
  switch (a->op) {
    case Arith::Op::num:
      return a->value;
    case Arith::Op::sym: {
      auto it = b.find(a->name);
      if (it == b.end()) throw UnboundSymbol("symbol " + a->name + " is not bound");
      return it->second;
    }
    case Arith::Op::neg:
      return -eval_arith(a->args[0], b);
    case Arith::Op::add:
      return eval_arith(a->args[0], b) + eval_arith(a->args[1], b);
    case Arith::Op::sub:
      return eval_arith(a->args[0], b) - eval_arith(a->args[1], b);
    case Arith::Op::mul:
      return eval_arith(a->args[0], b) * eval_arith(a->args[1], b);
    case Arith::Op::div: {
      BigInt x = eval_arith(a->args[0], b), y = eval_arith(a->args[1], b);
      if (y == 0) throw NonIntegralQuotient("division by zero in " + print_arith(a));
      if (x % y != 0) throw NonIntegralQuotient(x.str() + "/" + y.str() + " is not integral in " + print_arith(a));
      return x / y;
    }
    case Arith::Op::pow: {
      BigInt x = eval_arith(a->args[0], b), y = eval_arith(a->args[1], b);
      if (y < 0) throw NonIntegralQuotient("negative exponent in " + print_arith(a));
      if (y > 100000) throw IllegalParameters("exponent too large in " + print_arith(a));
      return big_pow(x, y.convert_to<unsigned long>());
    }
    case Arith::Op::gcd:
      return big_gcd(eval_arith(a->args[0], b), eval_arith(a->args[1], b));
    case Arith::Op::mod: {
      BigInt x = eval_arith(a->args[0], b), y = eval_arith(a->args[1], b);
      if (y <= 0) throw IllegalParameters("non-positive modulus in " + print_arith(a));
      BigInt r = x % y;
      return r < 0 ? r + y : r;
    }
    case Arith::Op::call: {
      BigInt x = eval_arith(a->args[0], b);
      if (a->name == "twopart") {
        if (x == 0) throw IllegalParameters("twopart(0)");
        if (x < 0) x = -x;
        BigInt r = 1;
        while (x % 2 == 0) {
          x /= 2;
          r *= 2;
        }
        return r;
      }
      return q_info(x).f;
    }
  }
  return 0;
}

BigInt order_of(const ShapePtr& s, const Bindings& b) {
  switch (s->kind) {
    case Shape::Kind::family: {
      if (s->params.size() == 1) return NamedOrders::instance().family_order(s->name, eval_arith(s->params[0], b));
      long long n = to_ll(eval_arith(s->params[0], b), "dimension");
      return classical_order(s->name, n, eval_arith(s->params[1], b));
    }
    case Shape::Kind::power: {
      BigInt e = eval_arith(s->params[0], b);
      if (e < 0) throw NonIntegralQuotient("negative exponent in " + print_shape(s));
      return big_pow(order_of(s->kids[0], b), to_ll(e, "exponent"));
    }
    case Shape::Kind::bracket:
    case Shape::Kind::integer: {
      BigInt v = eval_arith(s->params[0], b);
      if (v < 1) throw NonIntegralQuotient("group order " + v.str() + " is not positive in " + print_shape(s));
      return v;
    }
    case Shape::Kind::named:
      return NamedOrders::instance().order(s->name);
    case Shape::Kind::derived:
      return derived_order(s->kids[0], b);
    case Shape::Kind::split:
    case Shape::Kind::ext:
    case Shape::Kind::product:
      return order_of(s->kids[0], b) * order_of(s->kids[1], b);
    case Shape::Kind::quotient: {
      BigInt x = order_of(s->kids[0], b), k = eval_arith(s->params[0], b);
      if (k < 1 || x % k != 0) throw NonIntegralQuotient(x.str() + "/" + k.str() + " in " + print_shape(s));
      return x / k;
    }
    case Shape::Kind::paren:
      return order_of(s->kids[0], b);
  }
  return 0;
}

BigInt order_of(const std::string& s, const Bindings& b) { return order_of(parse_shape(s), b); }

namespace {

BigInt derived_order(const ShapePtr& s, const Bindings& b) {
  const Shape* t = s.get();
  while (t->kind == Shape::Kind::paren) t = t->kids[0].get();
  if (t->kind == Shape::Kind::family && t->params.size() == 2) {
    long long n = to_ll(eval_arith(t->params[0], b), "dimension");
    return derived_classical_order(t->name, n, eval_arith(t->params[1], b));
  }
  if (t->kind == Shape::Kind::family && t->params.size() == 1) {
    BigInt q = eval_arith(t->params[0], b);
    auto& ex = derived_exceptions();
    auto it = ex.find({t->name, 0, q > 1000000 ? 0 : q.convert_to<long long>()});
    if (it != ex.end()) return it->second;
    if (t->name == "G2" || t->name == "Sz" || t->name == "2G2" || t->name == "F4" || t->name == "3D4" ||
        t->name == "2F4")
      return NamedOrders::instance().family_order(t->name, q);
  }
  throw UnsupportedParameters("derived subgroup of " + print_shape(s) + " is not tabulated");
}

}  // namespace

// ---------------------------------------------------------------- named

namespace {
std::mutex g_named_mu;
std::unique_ptr<NamedOrders> g_named;

bool pattern_named(const std::string& name, char lead) {
  if (name.size() < 2 || name[0] != lead) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}
}  // namespace

const NamedOrders& NamedOrders::instance() {
  std::lock_guard<std::mutex> lk(g_named_mu);
  if (!g_named) {
    auto n = std::make_unique<NamedOrders>();
    auto j = nlohmann::json::parse(kNAMED_ORDERS_JSON);
    for (auto& [k, v] : j.at("constants").items()) n->constants_[k] = BigInt(v.get<std::string>());
    for (auto& [k, v] : j.at("families").items()) {
      std::string sym = v.at("symbol").get<std::string>();
      n->families_[k] = {sym, parse_arith(v.at("order").get<std::string>())};
    }
    g_named = std::move(n);
  }
  return *g_named;
}

void NamedOrders::load(const std::string& path) {
  (void)instance();
  std::lock_guard<std::mutex> lk(g_named_mu);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open named-orders file " + path);
  auto j = nlohmann::json::parse(in);
  auto n = std::make_unique<NamedOrders>();
  for (auto& [k, v] : j.at("constants").items()) n->constants_[k] = BigInt(v.get<std::string>());
  for (auto& [k, v] : j.at("families").items())
    n->families_[k] = {v.at("symbol").get<std::string>(), parse_arith(v.at("order").get<std::string>())};
  g_named = std::move(n);
}

bool NamedOrders::has(const std::string& name) const {
  return constants_.count(name) || pattern_named(name, 'A') || pattern_named(name, 'S') || pattern_named(name, 'D') ||
         pattern_named(name, 'C');
}

bool NamedOrders::has_family(const std::string& name) const { return families_.count(name) > 0; }

BigInt NamedOrders::order(const std::string& name) const {
  auto it = constants_.find(name);
  if (it != constants_.end()) return it->second;
  if (name.size() >= 2) {
    long long n = std::stoll(name.substr(1));
    if (pattern_named(name, 'A')) return n < 2 ? BigInt(1) : factorial(n) / 2;
    if (pattern_named(name, 'S')) return factorial(n);
    if (pattern_named(name, 'D') || pattern_named(name, 'C')) return n;
  }
  throw UnknownFamily("unknown group name " + name);
}

BigInt NamedOrders::family_order(const std::string& name, const BigInt& arg) const {
  auto it = families_.find(name);
  if (it == families_.end()) throw UnknownFamily("unknown family " + name);
  Bindings b{{it->second.first, arg}};
  return eval_arith(it->second.second, b);
}

}  // namespace factorlab
