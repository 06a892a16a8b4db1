#include "factorlab/perm.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace factorlab {

Perm perm_mul(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

Perm perm_inv(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<std::uint32_t>(i);
  return r;
}

Perm perm_identity(std::uint32_t n) {
  Perm r(n);
  for (std::uint32_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

bool perm_is_identity(const Perm& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != i) return false;
  return true;
}

std::string domain_kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::NonzeroVectors:
      return "NonzeroVectors";
    case DomainKind::NormLevelSet:
      return "NormLevelSet";
    case DomainKind::SingularNonzeroVectors:
      return "SingularNonzeroVectors";
    case DomainKind::ProjectivePoints:
      return "ProjectivePoints";
    case DomainKind::RefinedAntiflags:
      return "RefinedAntiflags";
    case DomainKind::UnorderedVectorPairs:
      return "UnorderedVectorPairs";
    case DomainKind::FormOrbit:
      return "FormOrbit";
  }
  return "?";
}

std::uint64_t Domain::space_size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < n_; ++i) {
    s *= field_->q();
    if (s > (1ull << 40)) throw DomainOverflow("ambient space too large");
  }
  return s;
}

std::vector<Point> Domain::enumerate(std::uint64_t cap) const {
  std::uint64_t total = code_bound();
  if (total > (1ull << 26)) throw DomainOverflow("space too large to enumerate");
  std::vector<Point> pts;
  for (std::uint64_t x = 0; x < total; ++x)
    if (contains(x)) {
      pts.push_back(x);
      if (pts.size() > cap) throw DomainOverflow("domain exceeds cap");
    }
  return pts;
}

std::string Domain::describe(Point x) const { return std::to_string(x); }

namespace {

std::string vec_str(const Field& F, const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << F.to_string(v[i]);
  os << ")";
  return os.str();
}

}  // namespace

VectorDomain::VectorDomain(FieldPtr field, int n) : Domain(std::move(field), n), kind_(DomainKind::NonzeroVectors) {}

VectorDomain::VectorDomain(const FormSpec& form, elem level, DomainKind kind)
    : Domain(form.field(), form.n()), kind_(kind), form_(std::make_shared<FormSpec>(form)), level_(level) {
  if (kind == DomainKind::SingularNonzeroVectors) level_ = 0;
}

Point VectorDomain::act(const GroupElem& g, Point x) const { return vec_index(*field_, g.apply(vector_of(x))); }

bool VectorDomain::contains(Point x) const {
  if (x == 0 || x >= space_size()) return false;
  if (!form_) return true;
  return form_eval(*form_, vector_of(x)) == level_;
}

std::string VectorDomain::describe(Point x) const { return vec_str(*field_, vector_of(x)); }

Point ProjectiveDomain::normalize(const Vec& v) const {
  const Field& F = *field_;
  for (elem c : v)
    if (c) return vec_index(F, vec_scale(F, F.inv(c), v));
  throw PointNotInDomain("zero vector");
}

Point ProjectiveDomain::act(const GroupElem& g, Point x) const {
  return normalize(g.apply(vec_from_index(*field_, n_, x)));
}

bool ProjectiveDomain::contains(Point x) const {
  if (x == 0 || x >= space_size()) return false;
  return normalize(vec_from_index(*field_, n_, x)) == x;
}

Point AntiflagDomain::make(const Vec& v, const Vec& phi) const {
  return vec_index(*field_, v) * space_size() + vec_index(*field_, phi);
}

Point AntiflagDomain::act(const GroupElem& g, Point x) const {
  const Field& F = *field_;
  std::uint64_t Q = space_size();
  Vec v = vec_from_index(F, n_, x / Q);
  Vec phi = vec_from_index(F, n_, x % Q);
  Vec v2 = g.apply(v);
  // phi'(x) = phi(x g^-1)^(sigma^i), as a column: A^-1 phi^(sigma^i)
  MatF Ai = g.mat.inverse();
  Vec c = vec_frob(F, phi, g.frob);
  Vec phi2(n_, 0);
  for (int r = 0; r < n_; ++r)
    for (int s = 0; s < n_; ++s) phi2[r] = F.add(phi2[r], F.mul(Ai.at(r, s), c[s]));
  return make(v2, phi2);
}

bool AntiflagDomain::contains(Point x) const {
  const Field& F = *field_;
  std::uint64_t Q = space_size();
  if (x >= Q * Q) return false;
  Vec v = vec_from_index(F, n_, x / Q);
  Vec phi = vec_from_index(F, n_, x % Q);
  elem s = 0;
  for (int i = 0; i < n_; ++i) s = F.add(s, F.mul(v[i], phi[i]));
  return s == 1;
}

std::string AntiflagDomain::describe(Point x) const {
  std::uint64_t Q = space_size();
  return vec_str(*field_, vec_from_index(*field_, n_, x / Q)) + "|" + vec_str(*field_, vec_from_index(*field_, n_, x % Q));
}

Point PairDomain::make(const Vec& u, const Vec& v) const {
  std::uint64_t a = vec_index(*field_, u), b = vec_index(*field_, v);
  if (a > b) std::swap(a, b);
  return a * space_size() + b;
}

Point PairDomain::act(const GroupElem& g, Point x) const {
  std::uint64_t Q = space_size();
  return make(g.apply(vec_from_index(*field_, n_, x / Q)), g.apply(vec_from_index(*field_, n_, x % Q)));
}

bool PairDomain::contains(Point x) const {
  std::uint64_t Q = space_size();
  std::uint64_t a = x / Q, b = x % Q;
  return a != 0 && a < b && b < Q;
}

FormOrbitDomain::FormOrbitDomain(const FormSpec& seed) : Domain(seed.field(), seed.n()) {
  if (seed.kind != FormKind::quadratic) throw IllegalParameters("form orbits are over quadratic forms");
  intern(seed);
}

Point FormOrbitDomain::intern(const FormSpec& form) const {
  auto key = std::make_pair(form.gram.data(), form.qdiag);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  Point id = forms_.size();
  forms_.push_back(form);
  ids_[key] = id;
  return id;
}

Point FormOrbitDomain::act(const GroupElem& g, Point x) const {
  if (x >= forms_.size()) throw PointNotInDomain("unknown form");
  return intern(transform_form(forms_[x], g));
}

bool FormOrbitDomain::contains(Point x) const { return x < forms_.size(); }

std::vector<Point> FormOrbitDomain::enumerate(std::uint64_t cap) const {
  if (forms_.size() > cap) throw DomainOverflow("form registry exceeds cap");
  std::vector<Point> pts(forms_.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = i;
  return pts;
}

std::string FormOrbitDomain::describe(Point x) const {
  const auto& f = forms_.at(x);
  return "Q" + vec_str(*field_, f.qdiag);
}

FaithfulAction::FaithfulAction(FieldPtr field, int n, std::uint64_t max_domain) : field_(std::move(field)), n_(n) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= field_->q();
    if (total - 1 > max_domain) throw DomainOverflow("faithful domain of size " + std::to_string(total - 1) + " exceeds cap");
  }
  N_ = static_cast<std::uint32_t>(total - 1);
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    base_vecs_.push_back(e);
  }
  if (field_->f() > 1) {
    Vec w(n, 0);
    w[0] = field_->primitive();
    base_vecs_.push_back(w);
  }
  for (const auto& v : base_vecs_) base_.push_back(point_of(v));
}

Perm FaithfulAction::perm_of(const GroupElem& g) const {
  const Field& F = *field_;
  std::uint64_t q = F.q();
  std::uint64_t total = static_cast<std::uint64_t>(N_) + 1;
  std::vector<std::uint32_t> img(total, 0);
  auto add_idx = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (F.p() == 2) return a ^ b;
    std::uint64_t r = 0, mul = 1;
    for (int i = 0; i < n_; ++i) {
      r += mul * F.add(static_cast<elem>(a % q), static_cast<elem>(b % q));
      a /= q;
      b /= q;
      mul *= q;
    }
    return r;
  };
  std::uint64_t qk = 1;
  for (int k = 0; k < n_; ++k) {
    Vec row = g.mat.row(k);
    for (std::uint64_t c = 1; c < q; ++c) {
      elem cs = F.frob(static_cast<elem>(c), g.frob);
      std::uint64_t rimg = vec_index(F, vec_scale(F, cs, row));
      for (std::uint64_t rest = 0; rest < qk; ++rest)
        img[c * qk + rest] = static_cast<std::uint32_t>(add_idx(img[rest], rimg));
    }
    qk *= q;
  }
  Perm p(N_);
  for (std::uint32_t i = 0; i < N_; ++i) {
    if (img[i + 1] == 0) throw NotFaithful("matrix is singular");
    p[i] = img[i + 1] - 1;
  }
  return p;
}

std::vector<std::uint32_t> FaithfulAction::base_images(const GroupElem& g) const {
  std::vector<std::uint32_t> im;
  im.reserve(base_vecs_.size());
  for (const auto& v : base_vecs_) {
    Vec w = g.apply(v);
    if (vec_is_zero(w)) throw NotFaithful("matrix is singular");
    im.push_back(point_of(w));
  }
  return im;
}

GroupElem FaithfulAction::elem_of_images(const std::vector<std::uint32_t>& images) const {
  std::vector<Vec> rows;
  for (int i = 0; i < n_; ++i) rows.push_back(vector_of(images[i]));
  MatF A = MatF::from_rows(field_, rows);
  int frob = 0;
  if (field_->f() > 1) {
    Vec target = vector_of(images[n_]);
    bool found = false;
    for (int i = 0; i < field_->f() && !found; ++i) {
      if (vec_scale(*field_, field_->frob(field_->primitive(), i), rows[0]) == target) {
        frob = i;
        found = true;
      }
    }
    if (!found) throw NotFaithful("images are not those of a semilinear map");
  }
  return {A, frob};
}

GroupElem FaithfulAction::elem_of(const Perm& p) const {
  std::vector<std::uint32_t> im;
  for (auto b : base_) im.push_back(p[b]);
  return elem_of_images(im);
}

std::shared_ptr<const FaithfulAction> faithful_action(const FieldPtr& field, int n, std::uint64_t max_domain) {
  return std::make_shared<const FaithfulAction>(field, n, max_domain);
}

StabChain::StabChain(std::uint32_t degree, std::vector<std::uint32_t> base) : N_(degree), base_(std::move(base)) {
  levels_.resize(base_.size());
  for (std::size_t i = 0; i < base_.size(); ++i) {
    levels_[i].point = base_[i];
    levels_[i].orbit.push_back(base_[i]);
  }
}

BigInt StabChain::order() const {
  BigInt r = 1;
  for (const auto& L : levels_) r *= static_cast<unsigned long long>(L.orbit.size());
  return r;
}

bool StabChain::in_orbit(const Level& L, std::uint32_t x) const {
  if (L.label.empty()) return x == L.point;
  return L.label[x] != -1;
}

void StabChain::extend_orbit(std::size_t li, int gid) {
  Level& L = levels_[li];
  const Perm& s = strong_[gid];
  if (L.label.empty()) {
    if (s[L.point] == L.point && L.orbit.size() == 1) return;
    L.label.assign(N_, -1);
    L.label[L.point] = -2;
  }
  std::vector<std::uint32_t> fresh;
  std::size_t old = L.orbit.size();
  for (std::size_t oi = 0; oi < old; ++oi) {
    std::uint32_t z = s[L.orbit[oi]];
    if (L.label[z] == -1) {
      L.label[z] = gid;
      L.orbit.push_back(z);
      fresh.push_back(z);
    }
  }
  for (std::size_t qi = 0; qi < fresh.size(); ++qi) {
    std::uint32_t y = fresh[qi];
    for (int g : L.gens) {
      std::uint32_t z = strong_[g][y];
      if (L.label[z] == -1) {
        L.label[z] = g;
        L.orbit.push_back(z);
        fresh.push_back(z);
      }
    }
  }
}

void StabChain::add_strong(const Perm& g, std::size_t level) {
  int id = static_cast<int>(strong_.size());
  strong_.push_back(g);
  strong_inv_.push_back(perm_inv(g));
  certified_ = false;
  for (std::size_t li = 0; li <= level && li < levels_.size(); ++li) {
    levels_[li].gens.push_back(id);
    extend_orbit(li, id);
  }
}

std::vector<int> StabChain::path(const Level& L, std::uint32_t beta) const {
  std::vector<int> labels;
  std::uint32_t cur = beta;
  while (cur != L.point) {
    int s = L.label[cur];
    labels.push_back(s);
    cur = strong_inv_[s][cur];
  }
  return labels;
}

std::uint32_t StabChain::apply_inv_path(const Level& L, std::uint32_t beta, std::uint32_t x) const {
  std::uint32_t cur = beta;
  while (cur != L.point) {
    int s = L.label[cur];
    x = strong_inv_[s][x];
    cur = strong_inv_[s][cur];
  }
  return x;
}

std::size_t StabChain::sift_images(std::vector<std::uint32_t>& images, std::size_t start) const {
  std::size_t k = levels_.size();
  for (std::size_t i = start; i < k; ++i) {
    const Level& L = levels_[i];
    std::uint32_t cur = images[i];
    if (!in_orbit(L, cur)) return i;
    while (cur != L.point) {
      int s = L.label[cur];
      const Perm& inv = strong_inv_[s];
      for (std::size_t j = i + 1; j < k; ++j) images[j] = inv[images[j]];
      cur = inv[cur];
    }
    images[i] = L.point;
  }
  return k;
}

std::pair<Perm, std::size_t> StabChain::residue(Perm g) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& L = levels_[i];
    std::uint32_t beta = g[L.point];
    if (!in_orbit(L, beta)) return {g, i};
    if (beta == L.point) continue;
    for (auto& x : g) x = apply_inv_path(L, beta, x);
  }
  if (!perm_is_identity(g)) throw NotFaithful("base does not determine group elements");
  return {g, levels_.size()};
}

Perm StabChain::transversal(std::size_t level, std::uint32_t beta) const {
  Perm u = perm_identity(N_);
  auto labels = path(levels_[level], beta);
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    const Perm& s = strong_[*it];
    for (auto& x : u) x = s[x];
  }
  return u;
}

std::vector<std::uint32_t> StabChain::images_of(const Perm& g) const {
  std::vector<std::uint32_t> im(base_.size());
  for (std::size_t i = 0; i < base_.size(); ++i) im[i] = g[base_[i]];
  return im;
}

bool StabChain::contains_images(std::vector<std::uint32_t> images) const {
  return sift_images(images, 0) == levels_.size();
}

bool StabChain::contains(const Perm& g) const { return contains_images(images_of(g)); }

void StabChain::add_generator(const Perm& g) {
  if (g.size() != N_) throw DimensionMismatch("permutation degree");
  gens_.push_back(g);
  auto [res, lvl] = residue(g);
  if (lvl < levels_.size()) add_strong(res, lvl);
  certified_ = false;
}

void StabChain::randomized(std::uint64_t seed, int trivial_limit, const BigInt* target) {
  if (gens_.empty()) return;
  std::mt19937_64 rng(seed);
  std::size_t r = std::max<std::size_t>(10, gens_.size());
  std::vector<Perm> R(r);
  for (std::size_t i = 0; i < r; ++i) R[i] = gens_[i % gens_.size()];
  Perm acc = perm_identity(N_);
  auto step = [&]() {
    std::size_t i = rng() % r, j = rng() % (r - 1);
    if (j >= i) ++j;
    const Perm& other = (rng() & 1) ? R[j] : perm_inv(R[j]);
    if (rng() & 1)
      R[i] = perm_mul(R[i], other);
    else
      R[i] = perm_mul(other, R[i]);
    acc = perm_mul(acc, R[i]);
    return acc;
  };
  for (int w = 0; w < 50; ++w) step();
  int trivial = 0;
  while (trivial < trivial_limit) {
    if (target && order() == *target) return;
    const Perm& g = step();
    auto im = images_of(g);
    if (sift_images(im, 0) == levels_.size()) {
      ++trivial;
    } else {
      auto [res, lvl] = residue(g);
      add_strong(res, lvl);
      trivial = 0;
    }
  }
}

void StabChain::verify() {
  std::size_t k = levels_.size();
  std::vector<std::uint32_t> img(k), ub(k);
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - 1;
  while (i >= 0) {
    bool added = false;
    const Level& L = levels_[i];
    std::vector<std::uint32_t> orb = L.orbit;
    std::vector<int> gens = L.gens;
    for (std::uint32_t beta : orb) {
      auto labels = path(L, beta);
      for (std::size_t j = 0; j < k; ++j) {
        std::uint32_t x = base_[j];
        for (auto it = labels.rbegin(); it != labels.rend(); ++it) x = strong_[*it][x];
        ub[j] = x;
      }
      for (int gid : gens) {
        const Perm& s = strong_[gid];
        std::uint32_t gamma = s[beta];
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) img[j] = apply_inv_path(L, gamma, s[ub[j]]);
        if (sift_images(img, static_cast<std::size_t>(i) + 1) == k) continue;
        Perm P = perm_mul(perm_mul(transversal(i, beta), s), perm_inv(transversal(i, gamma)));
        auto [res, lvl] = residue(P);
        if (lvl >= k) continue;
        add_strong(res, lvl);
        i = static_cast<std::ptrdiff_t>(lvl);
        added = true;
        break;
      }
      if (added) break;
    }
    if (!added) --i;
  }
  certified_ = true;
}

Perm StabChain::random_element(std::mt19937_64& rng) const {
  Perm g = perm_identity(N_);
  for (std::size_t i = levels_.size(); i-- > 0;) {
    const auto& orb = levels_[i].orbit;
    std::uint32_t beta = orb[rng() % orb.size()];
    g = perm_mul(g, transversal(i, beta));
  }
  return g;
}

void StabChain::for_each_element(const std::function<bool(const std::vector<std::uint32_t>&)>& fn,
                                 std::uint64_t cap) const {
  if (order() > cap) throw CapExceeded("group order " + order().str() + " exceeds enumeration cap");
  std::size_t k = levels_.size();
  std::uint64_t cells = 0;
  for (const auto& L : levels_) cells += L.orbit.size() * static_cast<std::uint64_t>(N_);
  bool materialize = cells <= 20000000ull;
  std::vector<std::vector<Perm>> trans;
  std::vector<std::vector<std::vector<int>>> paths;
  if (materialize) {
    trans.resize(k);
    for (std::size_t i = 0; i < k; ++i)
      for (auto b : levels_[i].orbit) trans[i].push_back(transversal(i, b));
  } else {
    paths.resize(k);
    for (std::size_t i = 0; i < k; ++i)
      for (auto b : levels_[i].orbit) paths[i].push_back(path(levels_[i], b));
  }
  std::vector<std::vector<std::uint32_t>> stack(k + 1, std::vector<std::uint32_t>(k));
  stack[k] = base_;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t lvl) {
    // lvl counts remaining levels; level index is lvl-1
    if (stop) return;
    if (lvl == 0) {
      if (!fn(stack[0])) stop = true;
      return;
    }
    std::size_t li = lvl - 1;
    const auto& cur = stack[lvl];
    auto& nxt = stack[lvl - 1];
    for (std::size_t bi = 0; bi < levels_[li].orbit.size() && !stop; ++bi) {
      if (materialize) {
        const Perm& u = trans[li][bi];
        for (std::size_t j = 0; j < k; ++j) nxt[j] = u[cur[j]];
      } else {
        const auto& labels = paths[li][bi];
        for (std::size_t j = 0; j < k; ++j) {
          std::uint32_t x = cur[j];
          for (auto it = labels.rbegin(); it != labels.rend(); ++it) x = strong_[*it][x];
          nxt[j] = x;
        }
      }
      rec(lvl - 1);
    }
  };
  rec(k);
}

void StabChain::for_each_element_perm(const std::function<bool(const Perm&)>& fn, std::uint64_t cap) const {
  if (order() > cap) throw CapExceeded("group order " + order().str() + " exceeds enumeration cap");
  std::size_t k = levels_.size();
  std::vector<std::vector<Perm>> trans(k);
  for (std::size_t i = 0; i < k; ++i)
    for (auto b : levels_[i].orbit) trans[i].push_back(transversal(i, b));
  std::vector<Perm> stack(k + 1, Perm(N_));
  stack[k] = perm_identity(N_);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t lvl) {
    if (stop) return;
    if (lvl == 0) {
      if (!fn(stack[0])) stop = true;
      return;
    }
    std::size_t li = lvl - 1;
    for (std::size_t bi = 0; bi < trans[li].size() && !stop; ++bi) {
      const Perm& u = trans[li][bi];
      const Perm& cur = stack[lvl];
      Perm& nxt = stack[lvl - 1];
      for (std::uint32_t x = 0; x < N_; ++x) nxt[x] = u[cur[x]];
      rec(lvl - 1);
    }
  };
  rec(k);
}

PermGroup group_from_perms(const std::vector<Perm>& perms, std::shared_ptr<const FaithfulAction> action,
                           std::uint64_t seed, const BigInt* target) {
  PermGroup G;
  G.action = action;
  G.seed = seed;
  G.chain = StabChain(action->degree(), action->base());
  for (const auto& p : perms) {
    if (perm_is_identity(p)) continue;
    G.chain.add_generator(p);
    G.gens.push_back(action->elem_of(p));
  }
  G.chain.randomized(seed, 40, target);
  if (target && G.chain.order() == *target)
    G.chain.certify_by_order();
  else
    G.chain.verify();
  return G;
}

PermGroup bsgs(const std::vector<GroupElem>& gens, std::shared_ptr<const FaithfulAction> action, std::uint64_t seed,
               const BigInt* target) {
  PermGroup G;
  G.action = action;
  G.seed = seed;
  G.gens = gens;
  G.chain = StabChain(action->degree(), action->base());
  for (const auto& g : gens) {
    if (g.n() != action->n()) throw DimensionMismatch("generator dimension");
    if (g.field()->key() != action->field()->key()) throw FieldMismatch("generator field");
    Perm p = action->perm_of(g);
    if (!perm_is_identity(p)) G.chain.add_generator(p);
  }
  G.chain.randomized(seed, 40, target);
  if (target && G.chain.order() == *target)
    G.chain.certify_by_order();
  else
    G.chain.verify();
  return G;
}

Point act(const GroupElem& g, Point x, const Domain& dom) {
  Point y = dom.act(g, x);
  return y;
}

OrbitResult orbit(const std::vector<GroupElem>& gens, Point x, const Domain& dom, std::uint64_t cap) {
  if (!dom.contains(x)) throw PointNotInDomain(dom.describe(x));
  OrbitResult r;
  r.points.push_back(x);
  r.index[x] = 0;
  r.parent.push_back(-1);
  r.label.push_back(-1);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Point y = dom.act(gens[g], r.points[i]);
      if (r.index.count(y)) continue;
      if (r.points.size() >= cap) throw DomainOverflow("orbit exceeds cap");
      r.index[y] = static_cast<std::uint32_t>(r.points.size());
      r.points.push_back(y);
      r.parent.push_back(static_cast<std::int64_t>(i));
      r.label.push_back(static_cast<int>(g));
    }
  }
  return r;
}

GroupElem orbit_transversal(const OrbitResult& orb, const std::vector<GroupElem>& gens, std::uint32_t idx) {
  std::vector<int> labels;
  std::int64_t cur = idx;
  while (orb.parent[cur] >= 0) {
    labels.push_back(orb.label[cur]);
    cur = orb.parent[cur];
  }
  GroupElem u = GroupElem::identity(gens.empty() ? nullptr : gens[0].field(), gens.empty() ? 0 : gens[0].n());
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) u = u * gens[*it];
  return u;
}

PermGroup stabilizer(const PermGroup& G, const Domain& dom, Point x, std::uint64_t seed, std::uint64_t cap) {
  auto orb = orbit(G.gens, x, dom, cap);
  BigInt og = G.order();
  BigInt len = static_cast<unsigned long long>(orb.points.size());
  if (og % len != 0) throw VerificationFailed("orbit length does not divide the group order");
  BigInt target = og / len;
  PermGroup S;
  S.action = G.action;
  S.seed = seed;
  S.chain = StabChain(G.action->degree(), G.action->base());
  if (target == 1) {
    S.chain.certify_by_order();
    return S;
  }
  std::vector<std::optional<GroupElem>> cache(orb.points.size());
  std::function<const GroupElem&(std::uint32_t)> trans = [&](std::uint32_t i) -> const GroupElem& {
    if (!cache[i]) {
      if (orb.parent[i] < 0)
        cache[i] = GroupElem::identity(G.action->field(), G.action->n());
      else
        cache[i] = trans(static_cast<std::uint32_t>(orb.parent[i])) * G.gens[orb.label[i]];
    }
    return *cache[i];
  };
  std::uint64_t round = 0;
  for (std::uint32_t i = 0; i < orb.points.size(); ++i) {
    for (std::size_t s = 0; s < G.gens.size(); ++s) {
      Point y = dom.act(G.gens[s], orb.points[i]);
      std::uint32_t j = orb.index.at(y);
      if (orb.parent[j] == static_cast<std::int64_t>(i) && orb.label[j] == static_cast<int>(s)) continue;
      GroupElem sg = trans(i) * G.gens[s] * trans(j).inverse();
      if (S.chain.contains_images(G.action->base_images(sg))) continue;
      S.chain.add_generator(G.action->perm_of(sg));
      S.gens.push_back(sg);
      S.chain.randomized(seed + (++round), 20, &target);
      if (S.chain.order() == target) {
        S.chain.certify_by_order();
        return S;
      }
    }
  }
  S.chain.verify();
  if (S.chain.order() != target) throw VerificationFailed("stabilizer order " + S.chain.order().str() + " != " + target.str());
  return S;
}

BigInt enumerate_and_sift(const PermGroup& H, const PermGroup& K, std::uint64_t cap) {
  if (H.chain.base() != K.chain.base()) throw DimensionMismatch("chains must share a base");
  BigInt count = 0;
  std::uint64_t c = 0;
  H.chain.for_each_element(
      [&](const std::vector<std::uint32_t>& im) {
        if (K.chain.contains_images(im)) ++c;
        return true;
      },
      cap);
  count = c;
  return count;
}

PermGroup normal_closure(const PermGroup& G, const std::vector<Perm>& elems, std::uint64_t seed) {
  PermGroup N;
  N.action = G.action;
  N.seed = seed;
  N.chain = StabChain(G.action->degree(), G.action->base());
  std::uint64_t round = 0;
  auto absorb = [&](const Perm& p) {
    if (perm_is_identity(p) || N.chain.contains(p)) return false;
    N.chain.add_generator(p);
    N.gens.push_back(G.action->elem_of(p));
    N.chain.randomized(seed + (++round), 30);
    N.chain.verify();
    return true;
  };
  for (const auto& e : elems) absorb(e);
  std::vector<Perm> gperms;
  std::vector<Perm> ginv;
  for (const auto& g : G.chain.generators()) {
    gperms.push_back(g);
    ginv.push_back(perm_inv(g));
  }
  for (std::size_t i = 0; i < N.chain.generators().size(); ++i) {
    Perm n = N.chain.generators()[i];
    for (std::size_t j = 0; j < gperms.size(); ++j) absorb(perm_mul(perm_mul(ginv[j], n), gperms[j]));
  }
  N.chain.verify();
  return N;
}

PermGroup derived_subgroup(const PermGroup& G, std::uint64_t seed) {
  const auto& gens = G.chain.generators();
  std::vector<Perm> comms;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Perm a = gens[i], b = gens[j];
      comms.push_back(perm_mul(perm_mul(perm_inv(a), perm_inv(b)), perm_mul(a, b)));
    }
  return normal_closure(G, comms, seed);
}

PermGroup solvable_residual(const PermGroup& G, std::uint64_t seed) {
  PermGroup cur = G;
  for (int depth = 0; depth < 64; ++depth) {
    if (cur.order() == 1) return cur;
    PermGroup D = derived_subgroup(cur, seed + 7919u * static_cast<std::uint64_t>(depth));
    if (D.order() == cur.order()) return cur;
    cur = std::move(D);
  }
  throw CapExceeded("derived series did not stabilize");
}

PermGroup solvable_residual(const std::vector<GroupElem>& gens, std::shared_ptr<const FaithfulAction> action,
                            std::uint64_t seed) {
  return solvable_residual(bsgs(gens, std::move(action), seed), seed);
}

}  // namespace factorlab
