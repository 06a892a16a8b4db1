#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "factorlab/construct.hpp"
#include "factorlab/genfile.hpp"
#include "factorlab/verify.hpp"

namespace py = pybind11;
using namespace factorlab;

namespace {

// Big integers cross the boundary as decimal strings.
py::object to_py(const BigInt& x) { return py::module_::import("builtins").attr("int")(x.str()); }

BigInt from_py(const py::handle& x) { return BigInt(py::str(x).cast<std::string>()); }

Bindings bindings_from(const py::dict& d) {
  Bindings b;
  for (const auto& [k, v] : d) b[k.cast<std::string>()] = from_py(v);
  return b;
}

std::vector<GroupElem> gens_from(const std::string& text, FieldPtr& field, int& n) {
  GenFile g = genfile_from_json(nlohmann::json::parse(text));
  if (field && (field->key() != g.field->key() || n != g.n)) throw FieldMismatch("generator files disagree");
  field = g.field;
  n = g.n;
  return g.gens;
}

const FactorizationRecord& record(const Database& db, const std::string& id) {
  const auto* r = db.find(id);
  if (!r) throw ConfigError("no record " + id);
  return *r;
}

Tier tier_of(const std::string& t) {
  if (t == "A" || t == "a") return Tier::A;
  if (t == "B" || t == "b") return Tier::B;
  throw ConfigError("tier must be A or B");
}

VerifyOptions options(std::uint64_t seed, const std::optional<std::string>& max_order, bool residual) {
  VerifyOptions o;
  o.seed = seed;
  if (max_order) o.max_order = parse_cap(*max_order);
  o.residual = residual;
  return o;
}

}  // namespace

PYBIND11_MODULE(_factorlab, m) {
  m.doc() = "Factorizations of almost simple classical groups: orders, table DB and verification";

  static PyObject* error = py::exception<Error>(m, "Error").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("kind") = e.kind();
      PyErr_SetObject(error, exc.ptr());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("ppd", [](long long a, long long k) {
    py::list out;
    for (const auto& r : ppd(a, k)) out.append(to_py(r));
    return out;
  }, py::arg("a"), py::arg("k"));

  m.def("classical_order", [](const std::string& family, long long n, const py::handle& q) {
    return to_py(classical_order(family, n, from_py(q)));
  }, py::arg("family"), py::arg("n"), py::arg("q"));

  m.def("shape_order", [](const std::string& shape, const py::dict& b) {
    return to_py(order_of(shape, bindings_from(b)));
  }, py::arg("shape"), py::arg("bindings") = py::dict());

  m.def("normalize_shape", [](const std::string& shape) { return print_shape(parse_shape(shape)); },
        py::arg("shape"));

  m.def("_db_json", [] { return load_db().source.dump(); });

  m.def("_verify_json", [](const std::string& id, const py::dict& b, const std::string& tier, std::uint64_t seed,
                           const std::optional<std::string>& max_order, bool residual, bool timing) {
    auto r = verify_case(record(load_db(), id), bindings_from(b), tier_of(tier), options(seed, max_order, residual));
    return report_json(r, timing).dump();
  }, py::arg("id"), py::arg("bindings"), py::arg("tier"), py::arg("seed"), py::arg("max_order"),
        py::arg("residual"), py::arg("timing"));

  m.def("_sweep_json", [](const std::string& tier, std::optional<int> table, std::optional<int> row,
                          std::optional<int> sub, std::uint64_t seed, const std::optional<std::string>& max_order,
                          bool residual, int jobs) {
    SweepResult s;
    {
      py::gil_scoped_release nogil;
      s = sweep(load_db(), SweepFilter{table, row, sub, {}}, tier_of(tier), options(seed, max_order, residual), jobs);
    }
    return py::make_tuple(reports_json(s.reports).dump(), summary_line(s.summary));
  }, py::arg("tier"), py::arg("table"), py::arg("row"), py::arg("sub"), py::arg("seed"), py::arg("max_order"),
        py::arg("residual"), py::arg("jobs"));

  m.def("_group_order", [](const std::string& genfile, std::uint64_t seed) {
    FieldPtr F;
    int n = 0;
    auto gens = gens_from(genfile, F, n);
    return to_py(bsgs(gens, faithful_action(F, n), seed).order());
  }, py::arg("genfile"), py::arg("seed"));

  m.def("_check_triple_json", [](const std::string& g, const std::string& h, const std::string& k,
                                 std::uint64_t seed) {
    FieldPtr F;
    int n = 0;
    auto G = gens_from(g, F, n);
    auto H = gens_from(h, F, n);
    auto K = gens_from(k, F, n);
    return triple_json(check_triple(G, H, K, Caps{}, seed)).dump();
  }, py::arg("G"), py::arg("H"), py::arg("K"), py::arg("seed"));

  m.def("_classical_genfile", [](const std::string& family, int n, long long q) {
    Subgroup s = gens_classical(family, n, q);
    return genfile_to_json(GenFile{s.frame.field, n, s.gens}).dump();
  }, py::arg("family"), py::arg("n"), py::arg("q"));
}
