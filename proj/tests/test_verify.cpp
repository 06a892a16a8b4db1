#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "factorlab/construct.hpp"
#include "factorlab/verify.hpp"
#include "goldens.hpp"
#include "mutations.hpp"

using namespace factorlab;

namespace {

Bindings B(std::initializer_list<std::pair<const std::string, long long>> kv) {
  Bindings b;
  for (const auto& [k, v] : kv) b[k] = v;
  return b;
}

const FactorizationRecord& rec(const std::string& id) {
  const auto* r = load_db().find(id);
  REQUIRE(r);
  return *r;
}

std::vector<GroupElem> upper_borel(const FieldPtr& F) {
  GroupElem u = GroupElem::identity(F, 2), d = GroupElem::identity(F, 2), e = GroupElem::identity(F, 2);
  u.mat.at(0, 1) = 1;
  d.mat.at(0, 0) = F->primitive();
  e.mat.at(1, 1) = F->primitive();
  return {u, d, e};
}

}  // namespace

TEST_CASE("tier A examples") {
  auto r = verify_tier_a(rec("2.2.1"), B({{"m", 2}, {"q", 2}}));
  CHECK(r.status == Status::pass);
  CHECK(r.computed.G == 25920);
  CHECK(r.computed.H == 720);
  CHECK(r.computed.K == 216);
  CHECK(r.computed.Int == 6);
  CHECK(r.status_text() == "PASS");

  auto s = verify_tier_a(rec("1.1.1"), B({{"a", 2}, {"b", 2}, {"q", 2}}));
  CHECK(s.status == Status::pass);
  CHECK(s.computed.G == 20160);
  CHECK(s.computed.H == 60);
  CHECK(s.computed.K == 1344);
  CHECK(s.computed.Int == 4);
  CHECK(s.case_id() == "1.1.1 a=2 b=2 q=2");
}

TEST_CASE("tier A failures and skips") {
  const Database& db = load_db();
  auto muts = shape_mutations();
  Database bad = parse_db(mutated_source(db.source, muts[0]).dump());
  auto r = verify_tier_a(*bad.find("1.1.1"), muts[0].at);
  CHECK(r.status == Status::fail);
  CHECK(r.reason == "identity");
  CHECK(r.computed.Int == 5);
  CHECK(r.expected.Int == 4);
  CHECK(r.status_text() == "FAIL(identity)");

  auto m = verify_tier_a(rec("1.1.1"), B({{"a", 2}, {"q", 2}}));
  CHECK(m.status == Status::skipped);
  CHECK(m.reason == "config");
  auto c = verify_tier_a(rec("5.4.1"), B({{"m", 4}, {"q", 2}}));
  CHECK(c.status == Status::skipped);
  CHECK(c.reason == "config");
  VerifyOptions small;
  small.max_order = 1000;
  auto big = verify_tier_a(rec("2.2.1"), B({{"m", 2}, {"q", 2}}), small);
  CHECK(big.status == Status::skipped);
  CHECK(big.status_text() == "SKIPPED(scale)");
}

TEST_CASE("errata are reported") {
  auto r = verify_tier_a(rec("1.2.1"), B({{"m", 2}, {"q", 3}}));
  CHECK(r.status == Status::pass);
  CHECK_FALSE(r.erratum.empty());
  auto s = verify_tier_a(rec("1.2.1"), B({{"m", 2}, {"q", 5}}));
  CHECK(s.erratum.empty());
}

TEST_CASE("tier B golden cases") {
  for (const auto& g : tier_b_goldens()) {
    CAPTURE(g.id);
    CAPTURE(bindings_text(g.at));
    auto r = verify_tier_b(rec(g.id), g.at);
    CHECK(r.status == Status::pass);
    CHECK(r.reason == "");
    CHECK(r.computed.Int == g.Int);
    CHECK(r.expected.Int == g.Int);
    CHECK(r.route == g.route);
    if (g.orbit) {
      CHECK(r.computed.orbit == *g.orbit);
      CHECK(r.expected.orbit == *g.orbit);
    }
    CHECK(*r.computed.G * *r.computed.Int == *r.computed.H * *r.computed.K);
  }
}

TEST_CASE("tier B gating") {
  auto none = verify_tier_b(rec("1.1.1"), B({{"a", 2}, {"b", 2}, {"q", 2}}));
  CHECK(none.status == Status::skipped);
  CHECK(none.reason == "no-recipe");
  VerifyOptions small;
  small.max_order = 100;
  auto capped = verify_tier_b(rec("2.2.1"), B({{"m", 2}, {"q", 2}}), small);
  CHECK(capped.status == Status::skipped);
  CHECK(capped.reason == "scale");
  VerifyOptions tight;
  tight.caps.max_domain = 100;
  auto dom = verify_tier_b(rec("2.2.1"), B({{"m", 2}, {"q", 3}}), tight);
  CHECK(dom.status == Status::skipped);
  CHECK(dom.reason == "scale");
  auto odd = verify_tier_b(rec("8.14.1"), B({{"a", 2}, {"b", 1}, {"q", 3}}));
  CHECK(odd.status == Status::skipped);
  auto viaA = verify_case(rec("2.2.1"), B({{"m", 2}, {"q", 2}}), Tier::A);
  CHECK(viaA.tier == Tier::A);
}

TEST_CASE("residual orders") {
  Bindings none;
  CHECK(residual_order_of(parse_shape("Sp(4,2)"), none) == BigInt(360));
  CHECK_FALSE(residual_order_of(parse_shape("2^3:SL(3,2)"), none));
  CHECK(residual_order_of(parse_shape("SL(2,5):2"), none) == BigInt(120));
  CHECK(residual_order_of(parse_shape("[2^4]:SL(2,3)"), none) == BigInt(1));
  CHECK(residual_order_of(parse_shape("SL(2,3)"), none) == BigInt(1));
  CHECK(residual_order_of(parse_shape("[2^5]"), none) == BigInt(1));
  VerifyOptions o;
  o.residual = true;
  auto r = verify_tier_b(rec("2.2.1"), B({{"m", 2}, {"q", 3}}), o);
  CHECK(r.status == Status::pass);
  CHECK(r.computed.residualInt == r.expected.residualInt);
  CHECK(r.computed.residualInt == 1);
}

TEST_CASE("sweeps are deterministic and independent of jobs") {
  const Database& db = load_db();
  VerifyOptions o;
  o.seed = 11;
  SweepFilter f{2, std::nullopt, std::nullopt, {}};
  auto a = sweep(db, f, Tier::B, o, 1);
  auto b = sweep(db, f, Tier::B, o, 3);
  CHECK(reports_json(a.reports).dump() == reports_json(b.reports).dump());
  o.seed = 12;
  auto c = sweep(db, f, Tier::B, o, 1);
  REQUIRE(a.reports.size() == c.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    auto x = report_json(a.reports[i]), y = report_json(c.reports[i]);
    x.erase("seed");
    y.erase("seed");
    CHECK(x == y);
  }
  CHECK(a.summary.fail == 0);
  CHECK(a.summary.pass == 2);
  CHECK(summary_line(a.summary) == "tables=1 cases=" + std::to_string(a.summary.cases) + " pass=2 fail=0 skipped=" +
                                       std::to_string(a.summary.skipped));
  auto filt = sweep(db, SweepFilter{2, 2, std::nullopt, B({{"q", 3}})}, Tier::B, o, 1);
  REQUIRE(filt.reports.size() == 1);
  CHECK(filt.reports[0].bindings.at("q") == 3);
}

TEST_CASE("tier A sweep of one table") {
  VerifyOptions o;
  auto s = sweep(load_db(), SweepFilter{1, std::nullopt, std::nullopt, {}}, Tier::A, o, 2);
  CHECK(s.summary.fail == 0);
  CHECK(s.summary.pass > 50);
  CHECK(s.summary.tables == 1);
  Summary t = summarize(s.reports);
  CHECK(t.pass == s.summary.pass);
}

TEST_CASE("report JSON") {
  auto r = verify_tier_b(rec("2.2.1"), B({{"m", 2}, {"q", 2}}));
  auto j = report_json(r);
  CHECK(j["case"] == "2.2.1 m=2 q=2");
  CHECK(j["status"] == "PASS");
  CHECK(j["reason"].is_null());
  CHECK(j["computed"]["Int"] == "6");
  CHECK(j["computed"]["orbitSize"] == "120");
  CHECK_FALSE(j.contains("elapsed_ms"));
  CHECK(report_json(r, true).contains("elapsed_ms"));
  CHECK(report_text(r).rfind("PASS  2.2.1 m=2 q=2", 0) == 0);
}

TEST_CASE("triples from generators") {
  auto F = field_of_order(3);
  Subgroup gl = gens_classical("GL", 2, 3);
  Subgroup sl = gens_classical("SL", 2, 3);
  auto borel = upper_borel(F);
  auto t = check_triple(gl.gens, sl.gens, borel);
  CHECK(t.G == 48);
  CHECK(t.H == 24);
  CHECK(t.K == 12);
  CHECK(t.Int == 6);
  CHECK(t.holds);
  auto u = check_triple(gl.gens, borel, borel);
  CHECK_FALSE(u.holds);
  CHECK(u.Int == 12);
  auto v = check_triple(gl.gens, gl.gens, {});
  CHECK(v.holds);
  CHECK(v.K == 1);
  CHECK(triple_json(t)["factorizes"] == true);
  Subgroup sl5 = gens_classical("SL", 2, 5);
  CHECK_THROWS_AS(check_triple(gl.gens, sl5.gens, borel), FieldMismatch);
  CHECK_THROWS_AS(check_triple(sl.gens, gl.gens, borel), NotSubgroup);
}
