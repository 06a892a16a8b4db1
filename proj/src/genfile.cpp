#include "factorlab/genfile.hpp"

#include <fstream>
#include <sstream>

namespace factorlab {

using nlohmann::json;

json field_to_json(const Field& F) { return json{{"p", F.p()}, {"f", F.f()}, {"modulus", F.modulus()}}; }

FieldPtr field_from_json(const json& j) {
  try {
    int p = j.at("p").get<int>();
    int f = j.at("f").get<int>();
    if (j.contains("modulus")) return Field::get(p, f, j.at("modulus").get<std::vector<int>>());
    return Field::get(p, f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field description: ") + e.what());
  }
}

json elem_to_json(const GroupElem& g) {
  const Field& F = *g.field();
  json rows = json::array();
  for (int i = 0; i < g.n(); ++i) {
    json row = json::array();
    for (int k = 0; k < g.n(); ++k) row.push_back(F.coeffs(g.mat.at(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"frob", g.frob}, {"matrix", std::move(rows)}};
}

GroupElem elem_from_json(const json& j, const FieldPtr& field, int n) {
  try {
    const json& rows = j.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw DimensionMismatch("matrix row count");
    GroupElem g{MatF(field, n), j.value("frob", 0)};
    if (g.frob < 0 || g.frob >= field->f()) throw ConfigError("frob must lie in [0, f)");
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) throw DimensionMismatch("matrix row length");
      for (int k = 0; k < n; ++k) {
        auto c = rows[i][k].get<std::vector<int>>();
        if (static_cast<int>(c.size()) > field->f()) throw FieldMismatch("entry has more coefficients than f");
        for (int x : c)
          if (x < 0 || x >= field->p()) throw FieldMismatch("coefficient outside GF(p)");
        c.resize(field->f(), 0);
        g.mat.at(i, k) = field->from_coeffs(c);
      }
    }
    if (g.mat.det() == 0) throw NotFaithful("generator matrix is singular");
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("group element: ") + e.what());
  }
}

json genfile_to_json(const GenFile& g) {
  json gens = json::array();
  for (const auto& x : g.gens) gens.push_back(elem_to_json(x));
  return json{{"field", field_to_json(*g.field)}, {"n", g.n}, {"gens", std::move(gens)}};
}

GenFile genfile_from_json(const json& j) {
  GenFile g;
  try {
    g.field = field_from_json(j.at("field"));
    g.n = j.at("n").get<int>();
    if (g.n < 1) throw ConfigError("dimension must be positive");
    for (const auto& x : j.at("gens")) g.gens.push_back(elem_from_json(x, g.field, g.n));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator file: ") + e.what());
  }
  return g;
}

GenFile read_genfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return genfile_from_json(j);
}

void write_genfile(const std::string& path, const GenFile& g) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << genfile_to_json(g).dump(1) << "\n";
}

}  // namespace factorlab
