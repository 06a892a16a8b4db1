#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "factorlab/genfile.hpp"
#include "factorlab/tables.hpp"
#include "factorlab/verify.hpp"

using namespace factorlab;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::optional<int> table, row, sub;
  std::vector<std::string> bind;
  std::string tier = "a";
  std::string max_order, max_domain = "1048576", max_enum = "1000000";
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out;
  int jobs = 1;
  bool timing = false, residual = false;
  std::vector<std::string> files;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Bindings parse_bindings(const std::vector<std::string>& items) {
  Bindings b;
  for (const auto& s : items) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) throw UsageError("--bind expects k=v, got " + s);
    std::string k = s.substr(0, eq), v = s.substr(eq + 1);
    bool neg = v[0] == '-';
    std::string digits = neg ? v.substr(1) : v;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("--bind value must be an integer: " + s);
    if (b.count(k)) throw UsageError("symbol bound twice: " + k);
    b[k] = BigInt(v);
  }
  return b;
}

std::uint64_t parse_u64_cap(const std::string& s, const char* flag) {
  BigInt v = parse_cap(s);
  if (v < 1 || v > BigInt(std::numeric_limits<std::uint64_t>::max()))
    throw UsageError(std::string(flag) + " out of range: " + s);
  return v.convert_to<std::uint64_t>();
}

VerifyOptions options(const Config& c) {
  VerifyOptions o;
  if (!c.max_order.empty()) o.max_order = parse_cap(c.max_order);
  o.caps.max_domain = parse_u64_cap(c.max_domain, "--max-domain");
  o.caps.max_enum = parse_u64_cap(c.max_enum, "--max-enum");
  o.seed = c.seed;
  o.residual = c.residual;
  return o;
}

Tier tier_of(const Config& c) { return c.tier == "b" || c.tier == "B" ? Tier::B : Tier::A; }

std::vector<std::string> param_names(const FactorizationRecord& r) {
  std::vector<std::string> v;
  for (const auto& p : r.params) v.push_back(p.name);
  for (const auto& p : r.free) v.push_back(p.name);
  return v;
}

int emit_reports(const Config& c, const std::vector<VerificationReport>& reports) {
  Summary s = summarize(reports);
  Output out(c.out);
  if (c.format == "json") {
    out.os() << reports_json(reports, c.timing).dump(2) << "\n";
    std::cerr << summary_line(s) << "\n";
  } else {
    for (const auto& r : reports) out.os() << report_text(r) << "\n";
    out.os() << summary_line(s) << "\n";
  }
  return s.fail > 0 ? 1 : 0;
}

std::string params_text(const FactorizationRecord& r) {
  std::string s;
  auto add = [&](const ParamSpec& p) {
    if (!s.empty()) s += ", ";
    if (p.kind == ParamSpec::Kind::prime_power)
      s += p.name + " prime power";
    else
      s += p.name + " in [" + std::to_string(p.lo) + ".." + std::to_string(p.hi) + "]";
  };
  for (const auto& p : r.params) add(p);
  for (const auto& p : r.free) add(p);
  return s;
}

int cmd_list(const Config& c, const Database& db) {
  auto recs = db.select(c.table, c.row, c.sub);
  Output out(c.out);
  if (c.format == "json") {
    ordered_json a = ordered_json::array();
    for (const auto* r : recs) {
      ordered_json j;
      j["id"] = r->id;
      j["family"] = r->family;
      j["shapes"] = {{"G", r->G}, {"H", r->H}, {"K", r->K}, {"int", r->Int}};
      j["ref"] = r->ref;
      j["tier_b"] = r->tier_b.has_value();
      a.push_back(j);
    }
    out.os() << a.dump(2) << "\n";
  } else {
    for (const auto* r : recs)
      out.os() << r->id << "  " << r->family << "  G=" << r->G << "  H=" << r->H << "  K=" << r->K
               << "  Int=" << r->Int << (r->tier_b ? "  [B]" : "") << "\n";
  }
  return 0;
}

int cmd_show(const Config& c, const Database& db) {
  if (!c.table) throw UsageError("show needs --table");
  auto recs = db.select(c.table, c.row, c.sub);
  Output out(c.out);
  if (c.format == "json") {
    std::set<std::string> ids;
    for (const auto* r : recs) ids.insert(r->id);
    ordered_json a = ordered_json::array();
    for (const auto& j : db.source.at("records"))
      if (ids.count(j.at("id").get<std::string>())) a.push_back(j);
    out.os() << a.dump(2) << "\n";
    return 0;
  }
  for (const auto* r : recs) {
    auto& os = out.os();
    os << r->id << " (" << r->family << ")\n";
    os << "  G    " << r->G << "\n  H    " << r->H << "\n  K    " << r->K << "\n  H∩K " << r->Int << "\n";
    os << "  params       " << params_text(*r) << "\n";
    for (const auto& k : r->constraints) os << "  constraint   " << k << "\n";
    for (const auto& d : r->derived) os << "  derived      " << branch_text(d) << "\n";
    os << "  ref          " << r->ref << "\n";
    if (!r->notes.empty()) os << "  notes        " << r->notes << "\n";
    if (r->tier_b) {
      os << "  tier B       " << r->tier_b->recipe;
      for (const auto& g : r->tier_b->golden) os << " [" << bindings_text(g) << "]";
      os << "\n";
    }
    for (const auto& e : r->errata)
      os << "  erratum      " << (e.when.empty() ? "always" : e.when) << ": H∩K = " << e.Int
         << (e.source.empty() ? "" : " (" + e.source + ")") << "\n";
  }
  return 0;
}

int cmd_verify(const Config& c, const Database& db) {
  if (!c.table) throw UsageError("verify needs --table");
  Bindings given = parse_bindings(c.bind);
  auto recs = db.select(c.table, c.row, c.sub);
  VerifyOptions opt = options(c);
  Tier tier = tier_of(c);
  if (given.empty()) {
    SweepFilter f{c.table, c.row, c.sub, {}};
    return emit_reports(c, sweep(db, f, tier, opt, c.jobs).reports);
  }
  std::set<std::string> known;
  for (const auto* r : recs)
    for (const auto& n : param_names(*r)) known.insert(n);
  for (const auto& [k, v] : given)
    if (!known.count(k)) throw UsageError("symbol " + k + " is not a parameter of the selected rows");
  std::vector<VerificationReport> reports;
  for (const auto* r : recs) {
    Bindings own;
    for (const auto& n : param_names(*r))
      if (given.count(n)) own[n] = given.at(n);
    reports.push_back(verify_case(*r, own, tier, opt));
  }
  return emit_reports(c, reports);
}

int cmd_sweep(const Config& c, const Database& db) {
  SweepFilter f{c.table, c.row, c.sub, parse_bindings(c.bind)};
  return emit_reports(c, sweep(db, f, tier_of(c), options(c), c.jobs).reports);
}

int cmd_export(const Config& c, const Database& db) {
  Output out(c.out);
  out.os() << db.source.dump(2) << "\n";
  return 0;
}

int cmd_check_triple(const Config& c) {
  if (c.files.size() != 3) throw UsageError("check-triple needs three generator files G H K");
  GenFile g = read_genfile(c.files[0]), h = read_genfile(c.files[1]), k = read_genfile(c.files[2]);
  for (const GenFile* x : {&h, &k}) {
    if (x->field->key() != g.field->key()) throw FieldMismatch("generator files use different fields");
    if (x->n != g.n) throw DimensionMismatch("generator files use different dimensions");
  }
  VerifyOptions o = options(c);
  TripleReport r = check_triple(g.gens, h.gens, k.gens, o.caps, o.seed);
  Output out(c.out);
  if (c.format == "json") {
    out.os() << triple_json(r).dump(2) << "\n";
  } else {
    out.os() << (r.holds ? "FACTORIZES" : "DOES NOT FACTORIZE") << "  G=" << r.G << " H=" << r.H << " K=" << r.K
             << " Int=" << r.Int << " seed=" << r.seed << "\n";
  }
  return r.holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorlab: verification of classical group factorizations"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* s, bool filters, bool verify_flags) {
    s->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--out", c.out, "write output here instead of stdout");
    if (filters) {
      s->add_option("--table", c.table, "table number");
      s->add_option("--row", c.row, "row number");
      s->add_option("--sub", c.sub, "sub-row number");
    }
    if (verify_flags) {
      s->add_option("--bind", c.bind, "k=v parameter binding");
      s->add_option("--tier", c.tier, "a or b")->check(CLI::IsMember({"a", "b", "A", "B"}));
      s->add_option("--max-order", c.max_order, "cap on |G|, e.g. 1e40");
      s->add_option("--max-domain", c.max_domain, "cap on the permutation domain");
      s->add_option("--max-enum", c.max_enum, "cap on enumerated group orders");
      s->add_option("--seed", c.seed, "random seed");
      s->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
      s->add_flag("--timing", c.timing, "include elapsed times in JSON");
      s->add_flag("--residual", c.residual, "also compare solvable-residual orders of H∩K");
    }
  };
  auto* list = app.add_subcommand("list", "list records");
  common(list, true, false);
  auto* show = app.add_subcommand("show", "print records");
  common(show, true, false);
  auto* verify = app.add_subcommand("verify", "verify one row");
  common(verify, true, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "verify every admissible case");
  common(sweep_cmd, true, true);
  auto* exp = app.add_subcommand("export-db", "write the database");
  common(exp, false, false);
  auto* triple = app.add_subcommand("check-triple", "check G = HK for generator files");
  common(triple, false, true);
  triple->add_option("files", c.files, "G H K generator files")->expected(3)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (*triple) return cmd_check_triple(c);
    const Database& db = load_db();
    if (*list) return cmd_list(c, db);
    if (*show) return cmd_show(c, db);
    if (*verify) return cmd_verify(c, db);
    if (*sweep_cmd) return cmd_sweep(c, db);
    if (*exp) return cmd_export(c, db);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ManifestMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
