#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "factorlab/bigint.hpp"
#include "factorlab/linalg.hpp"

namespace factorlab {

using Perm = std::vector<std::uint32_t>;
using Point = std::uint64_t;

Perm perm_mul(const Perm& a, const Perm& b);  // apply a, then b
Perm perm_inv(const Perm& a);
Perm perm_identity(std::uint32_t n);
bool perm_is_identity(const Perm& a);

struct Caps {
  std::uint64_t max_domain = 1u << 20;
  std::uint64_t max_enum = 1000000;
};

enum class DomainKind {
  NonzeroVectors,
  NormLevelSet,
  SingularNonzeroVectors,
  ProjectivePoints,
  RefinedAntiflags,
  UnorderedVectorPairs,
  FormOrbit
};
std::string domain_kind_name(DomainKind k);

// A set acted on by semilinear maps of GF(q)^n. Points are canonical
// integer codes; the meaning of a code depends on the domain kind.
class Domain {
 public:
  Domain(FieldPtr field, int n) : field_(std::move(field)), n_(n) {}
  virtual ~Domain() = default;
  virtual DomainKind kind() const = 0;
  virtual Point act(const GroupElem& g, Point x) const = 0;
  virtual bool contains(Point x) const = 0;
  // every point, in increasing code order; throws DomainOverflow past cap
  virtual std::vector<Point> enumerate(std::uint64_t cap) const;
  virtual std::string describe(Point x) const;
  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  std::uint64_t space_size() const;  // q^n
  // every point code lies below this
  virtual std::uint64_t code_bound() const { return space_size(); }

 protected:
  FieldPtr field_;
  int n_;
};

// Vectors v != 0, optionally restricted to form(v) == level.
class VectorDomain : public Domain {
 public:
  VectorDomain(FieldPtr field, int n);  // NonzeroVectors
  VectorDomain(const FormSpec& form, elem level, DomainKind kind);
  DomainKind kind() const override { return kind_; }
  Point act(const GroupElem& g, Point x) const override;
  bool contains(Point x) const override;
  std::string describe(Point x) const override;
  Point point_of(const Vec& v) const { return vec_index(*field_, v); }
  Vec vector_of(Point x) const { return vec_from_index(*field_, n_, x); }

 private:
  DomainKind kind_;
  std::shared_ptr<FormSpec> form_;
  elem level_ = 0;
};

class ProjectiveDomain : public Domain {
 public:
  ProjectiveDomain(FieldPtr field, int n) : Domain(std::move(field), n) {}
  DomainKind kind() const override { return DomainKind::ProjectivePoints; }
  Point act(const GroupElem& g, Point x) const override;
  bool contains(Point x) const override;
  Point normalize(const Vec& v) const;
};

// Pairs (v, phi) with phi(v) = 1; phi is a column of coefficients, so the
// pair is the refined antiflag {v, ker phi}.
class AntiflagDomain : public Domain {
 public:
  AntiflagDomain(FieldPtr field, int n) : Domain(std::move(field), n) {}
  std::uint64_t code_bound() const override { return space_size() * space_size(); }
  DomainKind kind() const override { return DomainKind::RefinedAntiflags; }
  Point act(const GroupElem& g, Point x) const override;
  bool contains(Point x) const override;
  std::string describe(Point x) const override;
  Point make(const Vec& v, const Vec& phi) const;
};

class PairDomain : public Domain {
 public:
  PairDomain(FieldPtr field, int n) : Domain(std::move(field), n) {}
  std::uint64_t code_bound() const override { return space_size() * space_size(); }
  DomainKind kind() const override { return DomainKind::UnorderedVectorPairs; }
  Point act(const GroupElem& g, Point x) const override;
  bool contains(Point x) const override;
  Point make(const Vec& u, const Vec& v) const;
};

// Quadratic forms with a fixed polar form; a form is identified by its
// values on the basis vectors. Forms are interned on first sight.
class FormOrbitDomain : public Domain {
 public:
  explicit FormOrbitDomain(const FormSpec& seed);
  DomainKind kind() const override { return DomainKind::FormOrbit; }
  Point act(const GroupElem& g, Point x) const override;
  bool contains(Point x) const override;
  std::vector<Point> enumerate(std::uint64_t cap) const override;
  std::string describe(Point x) const override;
  Point seed_point() const { return 0; }
  const FormSpec& form(Point x) const { return forms_.at(x); }
  Point intern(const FormSpec& form) const;

 private:
  mutable std::vector<FormSpec> forms_;
  mutable std::map<std::pair<std::vector<elem>, std::vector<elem>>, Point> ids_;
};

// Dense action on nonzero vectors used for all membership computations.
// The base is e_1..e_n, plus w*e_1 for a primitive w when f > 1; images
// of these points determine a semilinear map uniquely.
class FaithfulAction {
 public:
  FaithfulAction(FieldPtr field, int n, std::uint64_t max_domain = 1u << 20);
  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  std::uint32_t degree() const { return N_; }
  const std::vector<std::uint32_t>& base() const { return base_; }
  std::uint32_t point_of(const Vec& v) const { return static_cast<std::uint32_t>(vec_index(*field_, v) - 1); }
  Vec vector_of(std::uint32_t pt) const { return vec_from_index(*field_, n_, static_cast<std::uint64_t>(pt) + 1); }
  Perm perm_of(const GroupElem& g) const;
  std::vector<std::uint32_t> base_images(const GroupElem& g) const;
  GroupElem elem_of_images(const std::vector<std::uint32_t>& images) const;
  GroupElem elem_of(const Perm& p) const;

 private:
  FieldPtr field_;
  int n_;
  std::uint32_t N_;
  std::vector<std::uint32_t> base_;
  std::vector<Vec> base_vecs_;
};

class StabChain {
 public:
  StabChain() = default;
  StabChain(std::uint32_t degree, std::vector<std::uint32_t> base);

  std::uint32_t degree() const { return N_; }
  const std::vector<std::uint32_t>& base() const { return base_; }
  std::size_t depth() const { return base_.size(); }
  std::size_t orbit_size(std::size_t level) const { return levels_[level].orbit.size(); }
  const std::vector<std::uint32_t>& orbit(std::size_t level) const { return levels_[level].orbit; }
  BigInt order() const;
  bool certified() const { return certified_; }
  const std::vector<Perm>& generators() const { return gens_; }
  std::size_t strong_count() const { return strong_.size(); }

  // Adds an element of the group to the generating set.
  void add_generator(const Perm& g);
  // Random Schreier-Sims: sifts product-replacement elements until
  // trivial_limit consecutive sifts succeed or the order reaches target.
  void randomized(std::uint64_t seed, int trivial_limit, const BigInt* target = nullptr);
  // Deterministic Schreier-generator closure; certifies the chain.
  void verify();
  // The chain order reached a known upper bound on the group order.
  void certify_by_order() { certified_ = true; }

  bool contains_images(std::vector<std::uint32_t> images) const;
  bool contains(const Perm& g) const;
  std::vector<std::uint32_t> images_of(const Perm& g) const;
  Perm random_element(std::mt19937_64& rng) const;

  // Calls fn with base images of every element; stops early when fn
  // returns false. Throws CapExceeded when the order exceeds cap.
  void for_each_element(const std::function<bool(const std::vector<std::uint32_t>&)>& fn, std::uint64_t cap) const;
  void for_each_element_perm(const std::function<bool(const Perm&)>& fn, std::uint64_t cap) const;

 private:
  struct Level {
    std::uint32_t point = 0;
    std::vector<int> gens;
    std::vector<std::int32_t> label;  // -1 absent, -2 root, else strong generator id
    std::vector<std::uint32_t> orbit;
  };
  std::uint32_t N_ = 0;
  std::vector<std::uint32_t> base_;
  std::vector<Level> levels_;
  std::vector<Perm> gens_;
  std::vector<Perm> strong_, strong_inv_;
  bool certified_ = false;

  bool in_orbit(const Level& L, std::uint32_t x) const;
  void extend_orbit(std::size_t li, int gid);
  void add_strong(const Perm& g, std::size_t level);
  std::vector<int> path(const Level& L, std::uint32_t beta) const;
  std::uint32_t apply_inv_path(const Level& L, std::uint32_t beta, std::uint32_t x) const;
  std::size_t sift_images(std::vector<std::uint32_t>& images, std::size_t start) const;
  // sifts a full permutation; returns the residue and its level
  std::pair<Perm, std::size_t> residue(Perm g) const;
  Perm transversal(std::size_t level, std::uint32_t beta) const;
};

// A matrix group with certified chain on the faithful action.
struct PermGroup {
  std::shared_ptr<const FaithfulAction> action;
  std::vector<GroupElem> gens;
  StabChain chain;
  std::uint64_t seed = 0;

  BigInt order() const { return chain.order(); }
  bool contains(const GroupElem& g) const { return chain.contains_images(action->base_images(g)); }
};

std::shared_ptr<const FaithfulAction> faithful_action(const FieldPtr& field, int n, std::uint64_t max_domain = 1u << 20);

// Builds and certifies a chain. With a target order the chain is
// certified once it reaches the target (the target must be an upper bound
// for |<gens>|); otherwise Schreier generators are checked exhaustively.
PermGroup bsgs(const std::vector<GroupElem>& gens, std::shared_ptr<const FaithfulAction> action, std::uint64_t seed,
               const BigInt* target = nullptr);
PermGroup group_from_perms(const std::vector<Perm>& perms, std::shared_ptr<const FaithfulAction> action,
                           std::uint64_t seed, const BigInt* target = nullptr);

struct OrbitResult {
  std::vector<Point> points;
  std::unordered_map<Point, std::uint32_t> index;
  std::vector<std::int64_t> parent;  // index of parent point, -1 for the root
  std::vector<int> label;            // generator moving parent to this point
};

Point act(const GroupElem& g, Point x, const Domain& dom);
OrbitResult orbit(const std::vector<GroupElem>& gens, Point x, const Domain& dom, std::uint64_t cap = 1u << 22);
GroupElem orbit_transversal(const OrbitResult& orb, const std::vector<GroupElem>& gens, std::uint32_t idx);

// Stabilizer of x in G, certified by |G_x| = |G| / |x^G|.
PermGroup stabilizer(const PermGroup& G, const Domain& dom, Point x, std::uint64_t seed,
                     std::uint64_t cap = 1u << 22);

// |H ∩ K| by enumerating H and sifting through K (common base required).
BigInt enumerate_and_sift(const PermGroup& H, const PermGroup& K, std::uint64_t cap = 1000000);

PermGroup derived_subgroup(const PermGroup& G, std::uint64_t seed);
PermGroup normal_closure(const PermGroup& G, const std::vector<Perm>& elems, std::uint64_t seed);
PermGroup solvable_residual(const PermGroup& G, std::uint64_t seed);
PermGroup solvable_residual(const std::vector<GroupElem>& gens, std::shared_ptr<const FaithfulAction> action,
                            std::uint64_t seed);

}  // namespace factorlab
