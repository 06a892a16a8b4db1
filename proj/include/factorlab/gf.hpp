#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "factorlab/errors.hpp"

namespace factorlab {

// Elements of GF(p^f) are packed as integers sum c_i p^i where
// (c_0..c_{f-1}) are the coefficients modulo the field's modulus.
// 0 and 1 encode zero and one.
using elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  // Canonical field: modulus is the smallest primitive polynomial in the
  // packed coefficient order.
  static FieldPtr get(int p, int f);
  // Any irreducible monic modulus, given as [c0..cf] with cf = 1.
  static FieldPtr get(int p, int f, const std::vector<int>& modulus);

  int p() const { return p_; }
  int f() const { return f_; }
  std::uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }
  const std::string& key() const { return key_; }

  elem add(elem a, elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    if (p_ == 2) return a ^ b;
    std::uint32_t la = log_[a], d = (log_[b] + q_ - 1 - la) % (q_ - 1);
    std::int32_t z = zech_[d];
    if (z < 0) return 0;
    return exp_[la + static_cast<std::uint32_t>(z)];
  }
  elem neg(elem a) const {
    if (a == 0 || p_ == 2) return a;
    return exp_[log_[a] + (q_ - 1) / 2];
  }
  elem sub(elem a, elem b) const { return add(a, neg(b)); }
  elem mul(elem a, elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  elem inv(elem a) const {
    if (a == 0) throw DivisionByZero("inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  elem div(elem a, elem b) const { return mul(a, inv(b)); }
  elem pow(elem a, std::int64_t e) const;
  // x -> x^(p^j); j may be negative
  elem frob(elem a, int j) const;

  elem primitive() const { return exp_[1]; }
  elem gexp(std::int64_t k) const;  // primitive()^k
  std::uint32_t log(elem a) const {
    if (a == 0) throw DivisionByZero("log of zero");
    return log_[a];
  }
  elem from_int(long long v) const;
  std::vector<int> coeffs(elem a) const;
  elem from_coeffs(const std::vector<int>& c) const;
  bool is_square(elem a) const;
  std::string to_string(elem a) const;

  Field(int p, int f, std::vector<int> modulus);

 private:
  int p_, f_;
  std::uint32_t q_;
  std::vector<int> modulus_;
  std::string key_;
  std::vector<elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::int32_t> zech_;
  void build_tables();
};

bool is_prime(long long n);
// q = p^f with p prime, else returns false
bool prime_power(long long q, int* p, int* f);

// Value type bound to its owning field.
class Fq {
 public:
  Fq() = default;
  Fq(FieldPtr field, elem v) : field_(std::move(field)), v_(v) {}
  const FieldPtr& field() const { return field_; }
  elem value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  std::vector<int> coeffs() const { return field_->coeffs(v_); }

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator*(const Fq& o) const;
  Fq operator/(const Fq& o) const;
  Fq operator-() const { return {field_, field_->neg(v_)}; }
  Fq inv() const { return {field_, field_->inv(v_)}; }
  Fq pow(std::int64_t e) const { return {field_, field_->pow(v_, e)}; }
  Fq frobenius(int j) const { return {field_, field_->frob(v_, j)}; }
  bool operator==(const Fq& o) const;
  bool operator!=(const Fq& o) const { return !(*this == o); }
  std::string str() const { return field_->to_string(v_); }

 private:
  FieldPtr field_;
  elem v_ = 0;
  void check(const Fq& o) const;
};

enum class ArithKind { add, mul, inv, pow };
Fq arith(const Fq& x, const Fq& y, ArithKind kind);
Fq frobenius(const Fq& x, int j);

// GF(q) inside GF(q^b) with an explicit embedding and a GF(q)-basis
// theta^0..theta^{b-1} of the big field (theta = big->primitive()).
class Tower {
 public:
  static std::shared_ptr<const Tower> get(const FieldPtr& small, const FieldPtr& big);
  static std::shared_ptr<const Tower> get(int p, int f, int b);

  const FieldPtr& small() const { return small_; }
  const FieldPtr& big() const { return big_; }
  int degree() const { return b_; }
  elem embed(elem s) const { return embed_[s]; }
  // -1 when x is not in the subfield
  std::int64_t restrict_elem(elem x) const { return restrict_[x]; }
  elem basis(int k) const { return basis_[k]; }
  // coordinates of x over the basis, as small-field elements
  const elem* coords(elem x) const { return &coords_[static_cast<std::size_t>(x) * b_]; }
  elem from_coords(const elem* c) const;
  // sum_{i<b} x^{q^i}
  elem trace(elem x) const;
  elem norm(elem x) const;

  Tower(FieldPtr small, FieldPtr big);

 private:
  FieldPtr small_, big_;
  int b_;
  std::vector<elem> embed_;
  std::vector<std::int64_t> restrict_;
  std::vector<elem> basis_;
  std::vector<elem> coords_;
};
using TowerPtr = std::shared_ptr<const Tower>;

Fq trace_to(const Fq& x, const FieldPtr& sub);
Fq solve_trace_one(const TowerPtr& ext);
Fq find_irreducible_mu(const FieldPtr& fld);
Fq find_mu_norm_minus_one(const TowerPtr& ext);

}  // namespace factorlab
