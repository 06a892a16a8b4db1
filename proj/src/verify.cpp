#include "factorlab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "factorlab/construct.hpp"

namespace factorlab {

using nlohmann::ordered_json;

std::string tier_name(Tier t) { return t == Tier::A ? "A" : "B"; }

std::string status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "PASS";
    case Status::fail:
      return "FAIL";
    default:
      return "SKIPPED";
  }
}

std::string VerificationReport::case_id() const {
  std::string s = id;
  for (const auto& [k, v] : bindings) s += " " + k + "=" + v.str();
  return s;
}

std::string VerificationReport::status_text() const {
  if (status == Status::pass || reason.empty()) return status_name(status);
  return status_name(status) + "(" + reason + ")";
}

BigInt default_max_order(Tier t) { return t == Tier::A ? parse_cap("1e40") : parse_cap("1e9"); }

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void mark(VerificationReport& r, Status s, std::string reason, std::string detail = {}) {
  r.status = s;
  r.reason = std::move(reason);
  r.detail = std::move(detail);
}

std::string str(const BigInt& x) { return x.str(); }

long long iv(const Bindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw UnboundSymbol(name);
  return it->second.convert_to<long long>();
}

bool same_form(const FormSpec& a, const FormSpec& b) {
  return a.kind == b.kind && a.gram == b.gram && a.qdiag == b.qdiag;
}

// generators of s rewritten in the coordinates of target
std::vector<GroupElem> into_frame(const Subgroup& s, const SpaceFrame& target) {
  if (s.frame.field->key() != target.field->key()) throw FieldMismatch(s.recipe + ": field differs from the ambient frame");
  if (s.frame.n != target.n) throw DimensionMismatch(s.recipe + ": dimension differs from the ambient frame");
  if (!target.has_form() || same_form(s.frame.form, target.form)) return s.gens;
  MatF A = isometry_between(s.frame.form, target.form);
  MatF Ainv = A.inverse();
  std::vector<GroupElem> out;
  for (const auto& g : s.gens) out.push_back(change_basis(g, Ainv, A));
  return out;
}

Vec unit_vec(int n, int i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

// first point of the domain in code order
Point first_point(const Domain& dom) {
  std::uint64_t total = dom.space_size();
  for (Point x = 1; x < total; ++x)
    if (dom.contains(x)) return x;
  throw PointNotInDomain("domain is empty");
}

struct Build {
  std::shared_ptr<const FaithfulAction> action;
  std::vector<GroupElem> G, H, K;
  bool derive_H = false;
  std::shared_ptr<const Domain> dom;  // K is the stabilizer of x when set
  Point x = 0;
};

using Recipe = std::function<Build(const Bindings&, const Caps&, std::uint64_t)>;

Build with_action(Build b, const FieldPtr& F, int n, const Caps& caps) {
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= F->q();
    if (size > caps.max_domain + 1) throw CapExceeded("faithful domain exceeds max-domain");
  }
  b.action = faithful_action(F, n, caps.max_domain);
  return b;
}

Build ext_sp_derived_vectors(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long a = iv(v, "a"), b = iv(v, "b"), q = iv(v, "q");
  int n = static_cast<int>(a * b);
  Subgroup G = gens_classical("SL", n, q);
  Subgroup H = b == 1 ? gens_classical("Sp", static_cast<int>(a), q)
                      : ext_field_subgroup("Sp", static_cast<int>(a), static_cast<int>(b), q);
  Build r;
  r.G = G.gens;
  r.H = H.gens;
  r.derive_H = true;
  auto dom = std::make_shared<VectorDomain>(G.frame.field, n);
  r.x = dom->point_of(unit_vec(n, 0));
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build sigmal_antiflags(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long m = iv(v, "m");
  int n = static_cast<int>(2 * m);
  Subgroup G = gens_classical("SL", n, 2);
  Subgroup H = ext_field_subgroup("SigmaL", static_cast<int>(m), 2, 2);
  Build r;
  r.G = G.gens;
  r.H = H.gens;
  auto dom = std::make_shared<AntiflagDomain>(G.frame.field, n);
  r.x = dom->make(unit_vec(n, 0), unit_vec(n, 0));
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build sp_in_su_norm1(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long m = iv(v, "m"), q = iv(v, "q");
  int n = static_cast<int>(2 * m);
  Subgroup G = gens_classical("SU", n, q);
  Subgroup H = sp_in_su(static_cast<int>(m), q);
  Build r;
  r.G = G.gens;
  r.H = into_frame(H, G.frame);
  auto dom = std::make_shared<VectorDomain>(G.frame.form, 1, DomainKind::NormLevelSet);
  r.x = first_point(*dom);
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build su_in_omega_singular(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long m = iv(v, "m"), q = iv(v, "q");
  int n = static_cast<int>(2 * m);
  FormSign sign = m % 2 == 0 ? FormSign::plus : FormSign::minus;
  Subgroup G = gens_classical(m % 2 == 0 ? "Omega+" : "Omega-", n, q);
  Subgroup H = su_in_omega(static_cast<int>(m), q, sign);
  Build r;
  r.G = G.gens;
  r.H = into_frame(H, G.frame);
  auto dom = std::make_shared<VectorDomain>(G.frame.form, 0, DomainKind::SingularNonzeroVectors);
  r.x = first_point(*dom);
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build gammao_in_go_norm1(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long m = iv(v, "m");
  int n = static_cast<int>(2 * m);
  Subgroup G = gens_classical("GO-", n, 2);
  Subgroup H = ext_field_subgroup("GammaO-", static_cast<int>(m), 2, 2);
  Build r;
  r.G = G.gens;
  r.H = into_frame(H, G.frame);
  auto dom = std::make_shared<VectorDomain>(G.frame.form, 1, DomainKind::NormLevelSet);
  r.x = first_point(*dom);
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build ext_sp_in_p1_residual(const Bindings& v, const Caps& caps, std::uint64_t seed) {
  long long a = iv(v, "a"), b = iv(v, "b"), q = iv(v, "q");
  int n = static_cast<int>(2 * a * b);
  Subgroup G = gens_classical("Sp", n, q);
  Subgroup H = ext_field_subgroup("Sp", static_cast<int>(2 * a), static_cast<int>(b), q);
  Subgroup K = parabolic_p1_sp(static_cast<int>(a * b), q, true, seed);
  Build r;
  r.G = G.gens;
  r.H = into_frame(H, G.frame);
  r.K = into_frame(K, G.frame);
  return with_action(std::move(r), G.frame.field, n, caps);
}

Build ext_sp_form_orbit(const Bindings& v, const Caps& caps, std::uint64_t) {
  long long a = iv(v, "a"), b = iv(v, "b"), q = iv(v, "q");
  if (q % 2 != 0 || b % 2 != 0) throw UnsupportedParameters("the form-orbit recipe needs q and b even");
  int n = static_cast<int>(2 * a * b);
  Subgroup G = gens_classical("Sp", n, q);
  Subgroup H = ext_field_subgroup("Sp", static_cast<int>(2 * a), static_cast<int>(b), q);
  SpaceFrame minus = frame_orthogonal(G.frame.field, n, FormSign::minus);
  if (minus.form.gram != G.frame.form.gram) throw VerificationFailed("quadratic form does not polarize to the symplectic form");
  Build r;
  r.G = G.gens;
  r.H = into_frame(H, G.frame);
  auto dom = std::make_shared<FormOrbitDomain>(minus.form);
  r.x = dom->seed_point();
  r.dom = dom;
  return with_action(std::move(r), G.frame.field, n, caps);
}

const std::map<std::string, Recipe>& recipes() {
  static const std::map<std::string, Recipe> m = {
      {"ext_sp_derived_vectors", ext_sp_derived_vectors},
      {"sigmal_antiflags", sigmal_antiflags},
      {"sp_in_su_norm1", sp_in_su_norm1},
      {"su_in_omega_singular", su_in_omega_singular},
      {"gammao_in_go_norm1", gammao_in_go_norm1},
      {"ext_sp_in_p1_residual", ext_sp_in_p1_residual},
      {"ext_sp_form_orbit", ext_sp_form_orbit},
  };
  return m;
}

std::string mismatch(const char* what, const BigInt& got, const BigInt& want) {
  return std::string("|") + what + "| = " + str(got) + ", expected " + str(want);
}

void check_inside(const PermGroup& G, const std::vector<GroupElem>& gens, const char* what) {
  for (const auto& g : gens)
    if (!G.contains(g)) throw NotSubgroup(std::string(what) + " generator is not in G");
}

}  // namespace

VerificationReport verify_tier_a(const FactorizationRecord& rec, const Bindings& given, const VerifyOptions& opt) {
  auto t0 = Clock::now();
  VerificationReport r;
  r.id = rec.id;
  r.bindings = given;
  r.tier = Tier::A;
  r.seed = opt.seed;
  try {
    if (auto miss = missing_parameter(rec, given)) throw UnboundSymbol(*miss);
    Bindings full = complete_bindings(rec, given);
    if (!constraints_hold(rec, full)) {
      mark(r, Status::skipped, "config", "bindings violate the record's constraints");
      r.elapsed_ms = ms_since(t0);
      return r;
    }
    BigInt G = order_of(rec.shapeG, full);
    BigInt cap = opt.max_order.value_or(default_max_order(Tier::A));
    if (G > cap) {
      r.computed.G = G;
      mark(r, Status::skipped, "scale", "|G| = " + str(G) + " exceeds max-order");
      r.elapsed_ms = ms_since(t0);
      return r;
    }
    if (const Erratum* e = rec.erratum_for(full)) r.erratum = e->source.empty() ? e->Int : e->source + ": " + e->Int;
    BigInt H = order_of(rec.shapeH, full);
    BigInt K = order_of(rec.shapeK, full);
    BigInt I = order_of(rec.int_shape(full), full);
    r.computed.G = G;
    r.computed.H = H;
    r.computed.K = K;
    r.computed.Int = I;
    BigInt lhs = H * K, rhs = G * I;
    if (G != 0 && lhs % G == 0) r.expected.Int = lhs / G;
    if (lhs == rhs && G > 0 && H > 0 && K > 0 && I > 0)
      mark(r, Status::pass, "");
    else
      mark(r, Status::fail, "identity", "|H||K| = " + str(lhs) + " but |G||H∩K| = " + str(rhs));
  } catch (const UnboundSymbol& e) {
    mark(r, Status::skipped, "config", e.what());
  } catch (const Error& e) {
    mark(r, Status::fail, "shape", e.what());
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

VerificationReport verify_tier_b(const FactorizationRecord& rec, const Bindings& given, const VerifyOptions& opt) {
  auto t0 = Clock::now();
  VerifyOptions aopt = opt;
  aopt.max_order.reset();
  VerificationReport a = verify_tier_a(rec, given, aopt);
  VerificationReport r = a;
  r.tier = Tier::B;
  r.computed = {};
  r.expected = {};
  auto done = [&]() -> VerificationReport {
    r.elapsed_ms = ms_since(t0);
    return r;
  };
  if (a.status == Status::skipped) return done();
  if (a.status == Status::fail) {
    mark(r, Status::fail, "tier-a", a.detail);
    return done();
  }
  r.expected.G = a.computed.G;
  r.expected.H = a.computed.H;
  r.expected.K = a.computed.K;
  r.expected.Int = a.computed.Int;
  r.expected.orbit = *a.computed.G / *a.computed.K;
  if (!rec.tier_b) {
    mark(r, Status::skipped, "no-recipe", "record has no TIER-B recipe");
    return done();
  }
  auto rit = recipes().find(rec.tier_b->recipe);
  if (rit == recipes().end()) {
    mark(r, Status::skipped, "config", "unknown recipe " + rec.tier_b->recipe);
    return done();
  }
  BigInt cap = opt.max_order ? *opt.max_order : rec.tier_b->max_order.value_or(default_max_order(Tier::B));
  if (*r.expected.G > cap) {
    mark(r, Status::skipped, "scale", "|G| = " + str(*r.expected.G) + " exceeds max-order");
    return done();
  }
  Bindings full = complete_bindings(rec, given);
  try {
    Build b;
    try {
      b = rit->second(full, opt.caps, opt.seed);
    } catch (const CapExceeded&) {
      throw;
    } catch (const DomainOverflow&) {
      throw;
    } catch (const UnsupportedParameters&) {
      throw;
    } catch (const Error& e) {
      mark(r, Status::fail, "construction", e.what());
      return done();
    }
    PermGroup G = bsgs(b.G, b.action, opt.seed);
    PermGroup H = bsgs(b.H, b.action, opt.seed + 1);
    if (b.derive_H) H = derived_subgroup(H, opt.seed + 2);
    r.computed.G = G.order();
    r.computed.H = H.order();
    try {
      check_inside(G, H.gens, "H");
      if (!b.dom) check_inside(G, b.K, "K");
    } catch (const NotSubgroup& e) {
      mark(r, Status::fail, "construction", e.what());
      return done();
    }
    std::optional<BigInt> via_orbit, via_sift;
    std::optional<PermGroup> K;
    if (b.dom) {
      K = stabilizer(G, *b.dom, b.x, opt.seed + 3, opt.caps.max_domain);
      r.computed.K = K->order();
      auto orb = orbit(H.gens, b.x, *b.dom, opt.caps.max_domain);
      r.computed.orbit = BigInt(static_cast<unsigned long long>(orb.points.size()));
      via_orbit = *r.computed.H / *r.computed.orbit;
      r.route = "orbit";
    } else {
      K = bsgs(b.K, b.action, opt.seed + 3);
      r.computed.K = K->order();
    }
    const PermGroup& small = *r.computed.H <= *r.computed.K ? H : *K;
    const PermGroup& large = &small == &H ? *K : H;
    if (small.order() <= opt.caps.max_enum) {
      via_sift = enumerate_and_sift(small, large, opt.caps.max_enum);
      r.route = r.route.empty() ? "sift" : r.route + "+sift";
    } else if (!via_orbit) {
      throw CapExceeded("|H| and |K| exceed max-enum and no orbit route exists");
    }
    r.computed.Int = via_orbit ? *via_orbit : *via_sift;
    if (opt.residual && b.dom) {
      PermGroup I = stabilizer(H, *b.dom, b.x, opt.seed + 4, opt.caps.max_domain);
      r.computed.residualInt = solvable_residual(I, opt.seed + 5).order();
      r.expected.residualInt = residual_order_of(rec.int_shape(full), full);
    }
    const OrderSet& c = r.computed;
    const OrderSet& e = r.expected;
    if (*c.G != *e.G)
      mark(r, Status::fail, "order", mismatch("G", *c.G, *e.G));
    else if (*c.H != *e.H)
      mark(r, Status::fail, "order", mismatch("H", *c.H, *e.H));
    else if (*c.K != *e.K)
      mark(r, Status::fail, "order", mismatch("K", *c.K, *e.K));
    else if (via_orbit && via_sift && *via_orbit != *via_sift)
      mark(r, Status::fail, "cross-check",
           "orbit route gives " + str(*via_orbit) + ", enumeration gives " + str(*via_sift));
    else if (*c.Int != *e.Int)
      mark(r, Status::fail, "intersection", mismatch("H∩K", *c.Int, *e.Int));
    else if (c.orbit && *c.orbit != *e.orbit)
      mark(r, Status::fail, "transitivity", mismatch("x^H", *c.orbit, *e.orbit));
    else if (*c.H * *c.K != *c.G * *c.Int)
      mark(r, Status::fail, "identity", "|H||K| != |G||H∩K|");
    else if (c.residualInt && e.residualInt && *c.residualInt != *e.residualInt)
      mark(r, Status::fail, "residual", mismatch("(H∩K)^(∞)", *c.residualInt, *e.residualInt));
    else
      mark(r, Status::pass, "");
  } catch (const CapExceeded& e) {
    mark(r, Status::skipped, "scale", e.what());
  } catch (const DomainOverflow& e) {
    mark(r, Status::skipped, "scale", e.what());
  } catch (const UnsupportedParameters& e) {
    mark(r, Status::skipped, "recipe", e.what());
  } catch (const UnboundSymbol& e) {
    mark(r, Status::skipped, "config", e.what());
  } catch (const Error& e) {
    mark(r, Status::fail, "construction", e.what());
  }
  return done();
}

VerificationReport verify_case(const FactorizationRecord& rec, const Bindings& given, Tier tier,
                               const VerifyOptions& opt) {
  return tier == Tier::A ? verify_tier_a(rec, given, opt) : verify_tier_b(rec, given, opt);
}

namespace {

bool agrees(const FactorizationRecord& rec, const Bindings& b, const Bindings& want) {
  if (want.empty()) return true;
  Bindings full;
  bool completed = false;
  for (const auto& [k, v] : want) {
    auto it = b.find(k);
    if (it == b.end()) {
      if (!completed) {
        try {
          full = complete_bindings(rec, b);
        } catch (const Error&) {
          return false;
        }
        completed = true;
      }
      it = full.find(k);
      if (it == full.end()) return false;
    }
    if (it->second != v) return false;
  }
  return true;
}

}  // namespace

SweepResult sweep(const Database& db, const SweepFilter& filter, Tier tier, const VerifyOptions& opt, int jobs) {
  struct Item {
    const FactorizationRecord* rec;
    std::optional<Bindings> bind;
  };
  std::vector<Item> items;
  BigInt cap = opt.max_order.value_or(default_max_order(tier));
  for (const auto* rec : db.select(filter.table, filter.row, filter.sub)) {
    if (tier == Tier::A) {
      auto all = admissible_bindings(*rec, cap, db.box);
      if (all.empty()) {
        if (filter.bind.empty()) items.push_back({rec, std::nullopt});
        continue;
      }
      for (auto& b : all)
        if (agrees(*rec, b, filter.bind)) items.push_back({rec, std::move(b)});
    } else {
      if (!rec->tier_b) continue;
      for (const auto& b : rec->tier_b->golden)
        if (agrees(*rec, b, filter.bind)) items.push_back({rec, b});
    }
  }
  SweepResult out;
  out.reports.resize(items.size());
  auto run = [&](std::size_t i) {
    const Item& it = items[i];
    if (!it.bind) {
      VerificationReport r;
      r.id = it.rec->id;
      r.tier = tier;
      r.seed = opt.seed;
      mark(r, Status::skipped, "scale", "no admissible binding with |G| <= max-order");
      out.reports[i] = std::move(r);
      return;
    }
    out.reports[i] = verify_case(*it.rec, *it.bind, tier, opt);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1 || items.size() < 2) {
    for (std::size_t i = 0; i < items.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < items.size();) run(i);
      });
    for (auto& t : pool) t.join();
  }
  out.summary = summarize(out.reports);
  return out;
}

Summary summarize(const std::vector<VerificationReport>& reports) {
  Summary s;
  std::set<std::string> tables;
  for (const auto& r : reports) {
    tables.insert(r.id.substr(0, r.id.find('.')));
    ++s.cases;
    if (r.status == Status::pass) ++s.pass;
    if (r.status == Status::fail) ++s.fail;
    if (r.status == Status::skipped) ++s.skipped;
  }
  s.tables = static_cast<int>(tables.size());
  return s;
}

std::string summary_line(const Summary& s) {
  std::ostringstream o;
  o << "tables=" << s.tables << " cases=" << s.cases << " pass=" << s.pass << " fail=" << s.fail
    << " skipped=" << s.skipped;
  return o.str();
}

namespace {

ordered_json orders_json(const OrderSet& o) {
  ordered_json j = ordered_json::object();
  auto put = [&](const char* k, const std::optional<BigInt>& v) {
    if (v) j[k] = v->str();
  };
  put("G", o.G);
  put("H", o.H);
  put("K", o.K);
  put("Int", o.Int);
  put("orbitSize", o.orbit);
  put("residualOrderInt", o.residualInt);
  return j;
}

}  // namespace

ordered_json report_json(const VerificationReport& r, bool timing) {
  ordered_json j;
  j["case"] = r.case_id();
  j["id"] = r.id;
  j["tier"] = tier_name(r.tier);
  ordered_json b = ordered_json::object();
  for (const auto& [k, v] : r.bindings) b[k] = v.convert_to<long long>();
  j["bindings"] = b;
  j["status"] = status_name(r.status);
  j["reason"] = r.reason.empty() ? ordered_json(nullptr) : ordered_json(r.reason);
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (!r.route.empty()) j["route"] = r.route;
  if (!r.erratum.empty()) j["erratum"] = r.erratum;
  j["computed"] = orders_json(r.computed);
  j["expected"] = orders_json(r.expected);
  j["seed"] = r.seed;
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

ordered_json reports_json(const std::vector<VerificationReport>& rs, bool timing) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rs) a.push_back(report_json(r, timing));
  return a;
}

std::string report_text(const VerificationReport& r) {
  std::ostringstream o;
  o << r.status_text() << "  " << r.case_id() << "  tier=" << tier_name(r.tier);
  auto put = [&](const char* k, const std::optional<BigInt>& v) {
    if (v) o << " " << k << "=" << v->str();
  };
  put("G", r.computed.G);
  put("H", r.computed.H);
  put("K", r.computed.K);
  put("Int", r.computed.Int);
  put("orbit", r.computed.orbit);
  put("residualInt", r.computed.residualInt);
  if (!r.route.empty()) o << " route=" << r.route;
  if (!r.erratum.empty()) o << " erratum=" << r.erratum;
  o << " seed=" << r.seed;
  char buf[32];
  std::snprintf(buf, sizeof buf, " %.1f ms", r.elapsed_ms);
  o << buf;
  if (!r.detail.empty()) o << "\n    " << r.detail;
  return o.str();
}

std::optional<BigInt> residual_order_of(const ShapePtr& s, const Bindings& b) {
  using K = Shape::Kind;
  switch (s->kind) {
    case K::integer:
    case K::power:
      return BigInt(1);
    case K::bracket: {
      BigInt n = order_of(s, b);
      if (n == 1) return BigInt(1);
      BigInt p = 2;
      while (n % p != 0) ++p;
      while (n % p == 0) n /= p;
      if (n == 1) return BigInt(1);
      return std::nullopt;
    }
    case K::family: {
      if (!is_classical_family(s->name) || s->params.size() != 2) return std::nullopt;
      try {
        long long n = eval_arith(s->params[0], b).convert_to<long long>();
        return residual_classical_order(s->name, n, eval_arith(s->params[1], b));
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    case K::paren:
    case K::derived:
      return residual_order_of(s->kids[0], b);
    case K::product: {
      auto x = residual_order_of(s->kids[0], b), y = residual_order_of(s->kids[1], b);
      if (x && y) return *x * *y;
      return std::nullopt;
    }
    case K::split:
    case K::ext: {
      auto top = residual_order_of(s->kids[1], b);
      if (top && *top == 1) return residual_order_of(s->kids[0], b);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

TripleReport check_triple(const std::vector<GroupElem>& G, const std::vector<GroupElem>& H,
                          const std::vector<GroupElem>& K, const Caps& caps, std::uint64_t seed) {
  if (G.empty()) throw ConfigError("G needs at least one generator");
  const FieldPtr& F = G.front().field();
  int n = G.front().n();
  for (const auto* set : {&G, &H, &K})
    for (const auto& g : *set) {
      if (g.field()->key() != F->key()) throw FieldMismatch("generators lie over different fields");
      if (g.n() != n) throw DimensionMismatch("generators have different dimensions");
    }
  auto action = faithful_action(F, n, caps.max_domain);
  PermGroup PG = bsgs(G, action, seed);
  PermGroup PH = bsgs(H, action, seed + 1);
  PermGroup PK = bsgs(K, action, seed + 2);
  check_inside(PG, H, "H");
  check_inside(PG, K, "K");
  TripleReport r;
  r.seed = seed;
  r.G = PG.order();
  r.H = PH.order();
  r.K = PK.order();
  bool h_small = r.H <= r.K;
  r.Int = h_small ? enumerate_and_sift(PH, PK, caps.max_enum) : enumerate_and_sift(PK, PH, caps.max_enum);
  r.holds = r.H * r.K == r.G * r.Int;
  return r;
}

ordered_json triple_json(const TripleReport& r) {
  ordered_json j;
  j["G"] = r.G.str();
  j["H"] = r.H.str();
  j["K"] = r.K.str();
  j["Int"] = r.Int.str();
  j["factorizes"] = r.holds;
  j["seed"] = r.seed;
  return j;
}

}  // namespace factorlab
