#include "factorlab/tables.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "tables_data.hpp"

namespace factorlab {

namespace {

using ojson = nlohmann::ordered_json;

std::vector<ParamSpec> parse_params(const ojson& j) {
  std::vector<ParamSpec> r;
  for (auto& [name, v] : j.items()) {
    ParamSpec p;
    p.name = name;
    if (v.is_string()) {
      if (v.get<std::string>() != "prime_power") throw ConfigError("unknown parameter kind for " + name);
      p.kind = ParamSpec::Kind::prime_power;
    } else {
      p.lo = v.at(0).get<long long>();
      p.hi = v.at(1).get<long long>();
      if (p.lo > p.hi) throw ConfigError("empty range for " + name);
    }
    r.push_back(p);
  }
  return r;
}

Branch make_branch(const std::string& cond, const std::string& value) {
  Branch b;
  b.cond_text = cond;
  if (!cond.empty()) b.cond = parse_predicate(cond);
  b.value_text = value;
  b.value = parse_arith(value);
  return b;
}

FactorizationRecord parse_record(const ojson& j) {
  FactorizationRecord r;
  r.id = j.at("id").get<std::string>();
  r.table = j.at("table").get<int>();
  r.row = j.at("row").get<int>();
  r.sub = j.at("sub").get<int>();
  if (r.id != std::to_string(r.table) + "." + std::to_string(r.row) + "." + std::to_string(r.sub))
    throw ManifestMismatch("record id " + r.id + " disagrees with its table, row and sub fields");
  r.family = j.at("family").get<std::string>();
  const auto& s = j.at("shapes");
  r.G = s.at("G").get<std::string>();
  r.H = s.at("H").get<std::string>();
  r.K = s.at("K").get<std::string>();
  r.Int = s.at("int").get<std::string>();
  r.shapeG = parse_shape(r.G);
  r.shapeH = parse_shape(r.H);
  r.shapeK = parse_shape(r.K);
  r.shapeInt = parse_shape(r.Int);
  for (const auto& c : j.at("constraints")) {
    r.constraints.push_back(c.get<std::string>());
    r.predicates.push_back(parse_predicate(r.constraints.back()));
  }
  r.params = parse_params(j.at("params"));
  if (j.contains("free")) r.free = parse_params(j.at("free"));
  if (j.contains("derived")) {
    for (auto& [name, v] : j.at("derived").items()) {
      DerivedSymbol d;
      d.name = name;
      if (v.is_string()) {
        d.branches.push_back(make_branch("", v.get<std::string>()));
      } else {
        for (const auto& br : v) d.branches.push_back(make_branch(br.at("if").get<std::string>(), br.at("value").get<std::string>()));
      }
      r.derived.push_back(std::move(d));
    }
  }
  r.ref = j.at("ref").get<std::string>();
  if (j.contains("notes")) r.notes = j.at("notes").get<std::string>();
  if (j.contains("tier_b")) {
    const auto& t = j.at("tier_b");
    TierBSpec tb;
    tb.recipe = t.at("recipe").get<std::string>();
    for (const auto& g : t.at("golden")) {
      Bindings b;
      for (auto& [k, v] : g.items()) b[k] = v.get<long long>();
      tb.golden.push_back(b);
    }
    if (t.contains("max_order")) tb.max_order = parse_cap(t.at("max_order").get<std::string>());
    r.tier_b = tb;
  }
  if (j.contains("errata")) {
    for (const auto& e : j.at("errata")) {
      Erratum x;
      x.when = e.at("when").get<std::string>();
      if (!x.when.empty()) x.cond = parse_predicate(x.when);
      x.Int = e.at("int").get<std::string>();
      x.shapeInt = parse_shape(x.Int);
      x.source = e.at("source").get<std::string>();
      x.reason = e.at("reason").get<std::string>();
      r.errata.push_back(std::move(x));
    }
  }
  return r;
}

std::mutex g_db_mu;
std::unique_ptr<Database> g_db;

std::vector<long long> prime_powers(const ParamBox& box) {
  std::vector<long long> r;
  for (long long p = 2; p <= box.prime_max; ++p) {
    bool prime = true;
    for (long long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    for (long long q = p; q <= box.prime_power_max; q *= p) r.push_back(q);
  }
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<long long> values_of(const ParamSpec& p, const ParamBox& box) {
  if (p.kind == ParamSpec::Kind::prime_power) return prime_powers(box);
  std::vector<long long> r;
  for (long long v = p.lo; v <= std::min(p.hi, std::max(p.lo, box.int_max)); ++v) r.push_back(v);
  return r;
}

void add_field_symbols(Bindings& b) {
  auto q = b.find("q");
  if (q == b.end() || b.count("p")) return;
  BigInt x = q->second;
  if (x < 2) throw IllegalParameters("q must be a prime power");
  BigInt p = 2;
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
  if (x != 1) throw IllegalParameters("q = " + q->second.str() + " is not a prime power");
  b["p"] = p;
  b["f"] = f;
}

// |G| with the remaining parameters at their least values, or nullopt
// when that is not evaluable
std::optional<BigInt> order_floor(const FactorizationRecord& rec, Bindings b) {
  try {
    add_field_symbols(b);
    for (const auto& d : rec.derived) {
      for (const auto& br : d.branches) {
        try {
          if (!br.cond || eval_predicate(br.cond, b)) {
            b[d.name] = eval_arith(br.value, b);
            break;
          }
        } catch (const Error&) {
          break;
        }
      }
      if (d.name == "q") add_field_symbols(b);
    }
    return order_of(rec.shapeG, b);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

const Erratum* FactorizationRecord::erratum_for(const Bindings& full) const {
  for (const auto& e : errata)
    if (!e.cond || eval_predicate(e.cond, full)) return &e;
  return nullptr;
}

const ShapePtr& FactorizationRecord::int_shape(const Bindings& full) const {
  const Erratum* e = erratum_for(full);
  return e ? e->shapeInt : shapeInt;
}

const FactorizationRecord* Database::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<const FactorizationRecord*> Database::select(std::optional<int> table, std::optional<int> row,
                                                         std::optional<int> sub) const {
  std::vector<const FactorizationRecord*> r;
  for (const auto& rec : records) {
    if (table && rec.table != *table) continue;
    if (row && rec.row != *row) continue;
    if (sub && rec.sub != *sub) continue;
    r.push_back(&rec);
  }
  return r;
}

Database parse_db(const std::string& text) {
  Database db;
  try {
    db.source = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tables DB is not valid JSON: ") + e.what());
  }
  const auto& j = db.source;
  try {
    db.version = j.at("version").get<int>();
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      db.box.int_max = d.value("int_max", db.box.int_max);
      db.box.prime_max = d.value("prime_max", db.box.prime_max);
      db.box.prime_power_max = d.value("prime_power_max", db.box.prime_power_max);
    }
    if (j.contains("captions"))
      for (auto& [k, v] : j.at("captions").items()) db.captions[std::stoi(k)] = v.get<std::string>();
    for (const auto& r : j.at("records")) db.records.push_back(parse_record(r));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed tables DB: ") + e.what());
  }
  std::set<std::string> ids;
  std::map<int, long long> per_table;
  for (const auto& r : db.records) {
    if (!ids.insert(r.id).second) throw ManifestMismatch("duplicate record " + r.id);
    ++per_table[r.table];
  }
  const auto& man = j.at("manifest");
  if (man.at("records").get<std::size_t>() != db.records.size())
    throw ManifestMismatch("manifest lists " + std::to_string(man.at("records").get<std::size_t>()) +
                           " records, found " + std::to_string(db.records.size()));
  std::map<int, long long> listed;
  for (auto& [k, v] : man.at("per_table").items()) listed[std::stoi(k)] = v.get<long long>();
  if (listed != per_table) throw ManifestMismatch("per-table record counts disagree with the manifest");
  return db;
}

Database load_db_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tables DB " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_db(ss.str());
}

const Database& load_db() {
  std::lock_guard<std::mutex> lk(g_db_mu);
  if (!g_db) {
    const char* env = std::getenv("FACTORLAB_DB");
    g_db = std::make_unique<Database>(env && *env ? load_db_file(env) : parse_db(kTABLES_JSON));
  }
  return *g_db;
}

Bindings complete_bindings(const FactorizationRecord& rec, const Bindings& given) {
  Bindings b = given;
  add_field_symbols(b);
  for (const auto& d : rec.derived) {
    if (b.count(d.name)) continue;
    bool done = false;
    for (const auto& br : d.branches) {
      if (!br.cond || eval_predicate(br.cond, b)) {
        b[d.name] = eval_arith(br.value, b);
        done = true;
        break;
      }
    }
    if (!done) throw IllegalParameters("no branch of " + d.name + " applies at " + bindings_text(given));
    if (d.name == "q") add_field_symbols(b);
  }
  return b;
}

bool constraints_hold(const FactorizationRecord& rec, const Bindings& full) {
  for (const auto& p : rec.predicates)
    if (!eval_predicate(p, full)) return false;
  return true;
}

std::optional<std::string> missing_parameter(const FactorizationRecord& rec, const Bindings& given) {
  for (const auto* list : {&rec.params, &rec.free})
    for (const auto& p : *list)
      if (!given.count(p.name)) return p.name;
  return std::nullopt;
}

std::vector<Bindings> admissible_bindings(const FactorizationRecord& rec, const BigInt& cap, const ParamBox& box) {
  std::vector<std::vector<long long>> main_vals, free_vals;
  for (const auto& p : rec.params) main_vals.push_back(values_of(p, box));
  for (const auto& p : rec.free) free_vals.push_back(values_of(p, box));
  std::vector<Bindings> out;
  Bindings cur;

  std::function<void(std::size_t)> free_rec = [&](std::size_t i) {
    if (i == rec.free.size()) {
      Bindings base = cur;
      add_field_symbols(base);
      std::vector<const PredicatePtr*> later;
      for (const auto& p : rec.predicates) {
        auto syms = free_symbols(p);
        bool ready = std::all_of(syms.begin(), syms.end(), [&](const std::string& s) { return base.count(s) > 0; });
        if (!ready)
          later.push_back(&p);
        else if (!eval_predicate(p, base))
          return;
      }
      Bindings full = complete_bindings(rec, cur);
      for (const auto* p : later)
        if (!eval_predicate(*p, full)) return;
      out.push_back(cur);
      return;
    }
    for (long long v : free_vals[i]) {
      cur[rec.free[i].name] = v;
      free_rec(i + 1);
    }
    cur.erase(rec.free[i].name);
  };

  std::function<void(std::size_t)> main_rec = [&](std::size_t i) {
    if (i == rec.params.size()) {
      auto g = order_floor(rec, cur);
      if (g && *g > cap) return;
      free_rec(0);
      return;
    }
    for (long long v : main_vals[i]) {
      cur[rec.params[i].name] = v;
      Bindings probe = cur;
      for (std::size_t j = i + 1; j < rec.params.size(); ++j) probe[rec.params[j].name] = main_vals[j].front();
      auto g = order_floor(rec, probe);
      if (g && *g > cap) break;
      main_rec(i + 1);
    }
    cur.erase(rec.params[i].name);
  };
  main_rec(0);
  return out;
}

std::string branch_text(const DerivedSymbol& d) {
  std::string r;
  for (const auto& b : d.branches) {
    if (!r.empty()) r += "; ";
    r += d.name + " = " + b.value_text;
    if (!b.cond_text.empty()) r += " if " + b.cond_text;
  }
  return r;
}

BigInt parse_cap(const std::string& text) {
  std::string s = text;
  std::size_t e = s.find_first_of("eE");
  std::string mant = s.substr(0, e);
  long long ex = 0;
  if (e != std::string::npos) {
    std::string es = s.substr(e + 1);
    if (es.empty() || !std::all_of(es.begin(), es.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ConfigError("bad order cap " + text);
    ex = std::stoll(es);
    if (ex > 1000) throw ConfigError("order cap exponent too large in " + text);
  }
  if (mant.empty() || !std::all_of(mant.begin(), mant.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ConfigError("bad order cap " + text);
  return BigInt(mant) * big_pow(BigInt(10), static_cast<unsigned long>(ex));
}

std::string bindings_text(const Bindings& b) {
  std::string r;
  for (const auto& [k, v] : b) {
    if (!r.empty()) r += ",";
    r += k + "=" + v.str();
  }
  return r;
}

}  // namespace factorlab
