#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorlab/linalg.hpp"

namespace factorlab {

// {p, f, modulus: [c0..cf]}
nlohmann::json field_to_json(const Field& F);
FieldPtr field_from_json(const nlohmann::json& j);

// {frob: j, matrix: [[ [c0..c_{f-1}], ... ]]}
nlohmann::json elem_to_json(const GroupElem& g);
GroupElem elem_from_json(const nlohmann::json& j, const FieldPtr& field, int n);

// {field: {...}, n, gens: [...]}
struct GenFile {
  FieldPtr field;
  int n = 0;
  std::vector<GroupElem> gens;
};

nlohmann::json genfile_to_json(const GenFile& g);
GenFile genfile_from_json(const nlohmann::json& j);
GenFile read_genfile(const std::string& path);
void write_genfile(const std::string& path, const GenFile& g);

}  // namespace factorlab
