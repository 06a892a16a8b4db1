#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorlab/perm.hpp"
#include "factorlab/tables.hpp"

namespace factorlab {

enum class Tier { A, B };
enum class Status { pass, fail, skipped };

std::string tier_name(Tier t);
std::string status_name(Status s);

struct OrderSet {
  std::optional<BigInt> G, H, K, Int;
  std::optional<BigInt> orbit;        // |x^H| on the recipe domain
  std::optional<BigInt> residualInt;  // |(H∩K)^(∞)|
};

struct VerificationReport {
  std::string id;
  Bindings bindings;  // main and free parameters as given
  Tier tier = Tier::A;
  Status status = Status::skipped;
  std::string reason;  // FAIL(reason) or SKIPPED(reason)
  std::string detail;
  std::string route;    // tier B: orbit, sift or orbit+sift
  std::string erratum;  // source of the corrected intersection in force
  OrderSet computed, expected;
  double elapsed_ms = 0;
  std::uint64_t seed = 0;

  std::string case_id() const;
  std::string status_text() const;  // PASS, FAIL(x), SKIPPED(x)
};

struct VerifyOptions {
  std::optional<BigInt> max_order;  // default 1e40 for A, 1e9 (or the recipe's own) for B
  Caps caps;
  std::uint64_t seed = 0;
  bool residual = false;  // also compare |(H∩K)^(∞)| where the shape determines it
};

BigInt default_max_order(Tier t);

VerificationReport verify_tier_a(const FactorizationRecord& rec, const Bindings& given,
                                 const VerifyOptions& opt = {});
VerificationReport verify_tier_b(const FactorizationRecord& rec, const Bindings& given,
                                 const VerifyOptions& opt = {});
VerificationReport verify_case(const FactorizationRecord& rec, const Bindings& given, Tier tier,
                               const VerifyOptions& opt = {});

struct SweepFilter {
  std::optional<int> table, row, sub;
  Bindings bind;  // keeps bindings agreeing on these symbols
};

struct Summary {
  int tables = 0, cases = 0, pass = 0, fail = 0, skipped = 0;
};

struct SweepResult {
  std::vector<VerificationReport> reports;
  Summary summary;
};

// Tier A: every admissible binding under the cap, or one SKIPPED(scale)
// report for a record with none. Tier B: the golden bindings of records
// with a recipe. Report order does not depend on jobs.
SweepResult sweep(const Database& db, const SweepFilter& filter, Tier tier, const VerifyOptions& opt,
                  int jobs = 1);

Summary summarize(const std::vector<VerificationReport>& reports);
std::string summary_line(const Summary& s);

nlohmann::ordered_json report_json(const VerificationReport& r, bool timing = false);
nlohmann::ordered_json reports_json(const std::vector<VerificationReport>& rs, bool timing = false);
std::string report_text(const VerificationReport& r);

// The expected solvable-residual order of an intersection shape, when the
// shape determines it.
std::optional<BigInt> residual_order_of(const ShapePtr& s, const Bindings& b);

struct TripleReport {
  BigInt G, H, K, Int;
  bool holds = false;  // |H||K| = |G||H∩K|
  std::uint64_t seed = 0;
};

// All generators must lie over one field in one dimension; H and K must
// lie in G.
TripleReport check_triple(const std::vector<GroupElem>& G, const std::vector<GroupElem>& H,
                          const std::vector<GroupElem>& K, const Caps& caps = {}, std::uint64_t seed = 0);
nlohmann::ordered_json triple_json(const TripleReport& r);

}  // namespace factorlab
