#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "factorlab/bigint.hpp"
#include "factorlab/errors.hpp"

namespace factorlab {

using Bindings = std::map<std::string, BigInt>;

// Integer arithmetic over bindings: + - * / % ^, gcd(x,y), twopart(x),
// fdeg(q) and parentheses. Division must be exact.
struct Arith {
  enum class Op { num, sym, add, sub, mul, div, mod, pow, gcd, neg, call };
  Op op = Op::num;
  BigInt value;
  std::string name;
  std::vector<std::shared_ptr<const Arith>> args;
};
using ArithPtr = std::shared_ptr<const Arith>;

struct Shape {
  enum class Kind {
    family,    // name(dim, field) or name(field)
    power,     // base^exponent
    bracket,   // [arith]
    named,     // constant-order group such as M22 or A7
    integer,   // cyclic group of the given order
    split,     // a:b
    ext,       // a.b
    product,   // a x b
    quotient,  // a/k
    paren,     // (a)
    derived    // a'
  };
  Kind kind = Kind::integer;
  std::string name;
  std::vector<ArithPtr> params;  // family args, power base/exponent, bracket, quotient divisor
  std::vector<std::shared_ptr<const Shape>> kids;
};
using ShapePtr = std::shared_ptr<const Shape>;

ShapePtr parse_shape(const std::string& s);
ArithPtr parse_arith(const std::string& s);
std::string print_shape(const ShapePtr& s);
std::string print_arith(const ArithPtr& a);
BigInt eval_arith(const ArithPtr& a, const Bindings& b);
BigInt order_of(const ShapePtr& s, const Bindings& b);
BigInt order_of(const std::string& s, const Bindings& b);
// Comparisons of arithmetic terms joined by and, or, not.
struct Predicate {
  enum class Op { cmp, conj, disj, neg };
  Op op = Op::cmp;
  std::string rel;  // == != < <= > >=
  std::vector<ArithPtr> terms;
  std::vector<std::shared_ptr<const Predicate>> kids;
};
using PredicatePtr = std::shared_ptr<const Predicate>;
PredicatePtr parse_predicate(const std::string& s);
bool eval_predicate(const PredicatePtr& p, const Bindings& b);
std::vector<std::string> free_symbols(const PredicatePtr& p);
std::vector<std::string> free_symbols(const ArithPtr& a);

// free symbols in parse order, without repetition
std::vector<std::string> free_symbols(const ShapePtr& s);

// Family tags: SL GL SigmaL GammaL PSL PGL PSigmaL PGammaL SU GU SigmaU GammaU
// PSU PGU Sp PSp GammaSp Omega+ Omega- Omega SO+ SO- SO GO+ GO- GO GammaO+
// GammaO- GammaO POmega+ POmega- POmega ASL AGL ASigmaL AGammaL Spin. Unitary q is the order of the
// fixed field of the Hermitian form.
BigInt classical_order(const std::string& family, long long n, const BigInt& q);
bool is_classical_family(const std::string& family);
// Order of the derived subgroup of the classical group; raises for
// non-perfect cases that are not in the exception table.
BigInt derived_classical_order(const std::string& family, long long n, const BigInt& q);
// Order of the last term of the derived series.
BigInt residual_classical_order(const std::string& family, long long n, const BigInt& q);

std::set<BigInt> ppd(long long a, long long k);
std::set<BigInt> ppd_bruteforce(long long a, long long k);

// Constant and closed-form orders of exceptional, sporadic and small
// named groups.
class NamedOrders {
 public:
  static const NamedOrders& instance();
  static void load(const std::string& path);
  bool has(const std::string& name) const;
  // one-argument families such as G2(q)
  bool has_family(const std::string& name) const;
  BigInt order(const std::string& name) const;
  BigInt family_order(const std::string& name, const BigInt& arg) const;

 private:
  std::map<std::string, BigInt> constants_;
  std::map<std::string, std::pair<std::string, ArithPtr>> families_;  // name -> (symbol, formula)
};

}  // namespace factorlab
