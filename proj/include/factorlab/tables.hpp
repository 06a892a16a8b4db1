#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorlab/shapes.hpp"

namespace factorlab {

struct ParamSpec {
  enum class Kind { range, prime_power };
  std::string name;
  Kind kind = Kind::range;
  long long lo = 0, hi = 0;
};

// value of the first branch whose condition holds; a null condition
// always holds
struct Branch {
  std::string cond_text;
  PredicatePtr cond;
  std::string value_text;
  ArithPtr value;
};

struct DerivedSymbol {
  std::string name;
  std::vector<Branch> branches;
};

struct TierBSpec {
  std::string recipe;
  std::vector<Bindings> golden;
  std::optional<BigInt> max_order;
};

// A corrected intersection for the bindings where the printed one is
// arithmetically inconsistent.
struct Erratum {
  std::string when;  // empty: always
  PredicatePtr cond;
  std::string Int;
  ShapePtr shapeInt;
  std::string source;
  std::string reason;
};

struct FactorizationRecord {
  std::string id;
  int table = 0, row = 0, sub = 0;
  std::string family;
  std::string G, H, K, Int;
  ShapePtr shapeG, shapeH, shapeK, shapeInt;
  std::vector<std::string> constraints;
  std::vector<PredicatePtr> predicates;
  std::vector<ParamSpec> params;  // main parameters; |G| depends only on these
  std::vector<ParamSpec> free;    // structural choices such as |I| in c
  std::vector<DerivedSymbol> derived;
  std::string ref;
  std::string notes;
  std::optional<TierBSpec> tier_b;
  std::vector<Erratum> errata;

  // the erratum in force at the bindings, if any
  const Erratum* erratum_for(const Bindings& full) const;
  const ShapePtr& int_shape(const Bindings& full) const;
};

// enumeration box for parameters without an explicit upper bound
struct ParamBox {
  long long int_max = 40;
  long long prime_max = 61;
  long long prime_power_max = 4096;
};

struct Database {
  int version = 0;
  ParamBox box;
  std::map<int, std::string> captions;
  std::vector<FactorizationRecord> records;
  nlohmann::ordered_json source;

  const FactorizationRecord* find(const std::string& id) const;
  std::vector<const FactorizationRecord*> select(std::optional<int> table, std::optional<int> row,
                                                 std::optional<int> sub = std::nullopt) const;
};

// Bundled DB, or the file named by FACTORLAB_DB.
const Database& load_db();
Database load_db_file(const std::string& path);
Database parse_db(const std::string& text);

// Adds p and f for q, then derived symbols in order.
Bindings complete_bindings(const FactorizationRecord& rec, const Bindings& given);
bool constraints_hold(const FactorizationRecord& rec, const Bindings& full);
// Name of the first unbound main or free parameter, if any.
std::optional<std::string> missing_parameter(const FactorizationRecord& rec, const Bindings& given);

// Bindings of main and free parameters satisfying the constraints with
// |G| <= cap, in lexicographic order of the parameter lists.
std::vector<Bindings> admissible_bindings(const FactorizationRecord& rec, const BigInt& cap,
                                          const ParamBox& box = ParamBox{});

std::string branch_text(const DerivedSymbol& d);
std::string bindings_text(const Bindings& b);
// "1e40", "1000000" and the like
BigInt parse_cap(const std::string& text);

}  // namespace factorlab
