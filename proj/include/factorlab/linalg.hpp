#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factorlab/gf.hpp"

namespace factorlab {

using Vec = std::vector<elem>;

class MatF {
 public:
  MatF() = default;
  MatF(FieldPtr field, int n);  // zero matrix
  static MatF identity(const FieldPtr& field, int n);
  static MatF from_rows(const FieldPtr& field, const std::vector<Vec>& rows);

  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  elem& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  elem at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  Vec row(int i) const;
  void set_row(int i, const Vec& v);
  const std::vector<elem>& data() const { return a_; }

  MatF operator*(const MatF& o) const;
  MatF operator+(const MatF& o) const;
  MatF operator-(const MatF& o) const;
  bool operator==(const MatF& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const MatF& o) const { return !(*this == o); }
  MatF frob(int j) const;  // entrywise x -> x^(p^j)
  MatF transpose() const;
  MatF inverse() const;  // throws DivisionByZero when singular
  elem det() const;
  int rank() const;
  bool is_identity() const;

 private:
  FieldPtr field_;
  int n_ = 0;
  std::vector<elem> a_;
};

int rank_of_rows(const FieldPtr& field, std::vector<Vec> rows);
Vec vec_add(const Field& F, const Vec& a, const Vec& b);
Vec vec_scale(const Field& F, elem c, const Vec& a);
Vec vec_frob(const Field& F, const Vec& a, int j);
Vec vec_mat(const Field& F, const Vec& v, const MatF& A);
bool vec_is_zero(const Vec& v);
// coordinates as a base-q integer, coordinate 0 least significant
std::uint64_t vec_index(const Field& F, const Vec& v);
Vec vec_from_index(const Field& F, int n, std::uint64_t idx);

// Semilinear map v -> v^(sigma^frob) * mat, sigma the p-th power map.
struct GroupElem {
  MatF mat;
  int frob = 0;

  static GroupElem identity(const FieldPtr& field, int n) { return {MatF::identity(field, n), 0}; }
  const FieldPtr& field() const { return mat.field(); }
  int n() const { return mat.n(); }
  GroupElem operator*(const GroupElem& o) const;  // apply this, then o
  GroupElem inverse() const;
  Vec apply(const Vec& v) const;
  bool operator==(const GroupElem& o) const { return frob == o.frob && mat == o.mat; }
  bool is_identity() const { return frob == 0 && mat.is_identity(); }
};

GroupElem commutator(const GroupElem& a, const GroupElem& b);

enum class FormKind { alternating, symmetric, quadratic, hermitian };
enum class FormSign { none, plus, minus, odd };

struct FormSpec {
  FormKind kind = FormKind::alternating;
  MatF gram;   // polar matrix for quadratic forms
  Vec qdiag;   // Q(basis_i), quadratic only
  FormSign sign = FormSign::none;

  const FieldPtr& field() const { return gram.field(); }
  int n() const { return gram.n(); }
  // x -> x^q on GF(q^2); hermitian only
  elem conj(elem x) const { return field()->frob(x, field()->f() / 2); }
  // entrywise Frobenius image of the form's coefficients
  FormSpec frob(int j) const;
};

// beta(u,v); for quadratic forms the polar form
elem form_eval(const FormSpec& form, const Vec& u, const Vec& v);
// Q(u) for quadratic forms, beta(u,u) otherwise
elem form_eval(const FormSpec& form, const Vec& u);
FormSpec transform_form(const FormSpec& form, const GroupElem& g);  // Q^g(v) = Q(v g^-1)

bool is_isometry(const GroupElem& g, const FormSpec& form);

enum class FrameKind { linear, symplectic, unitary, orth_plus, orth_minus, orth_odd };

struct SpaceFrame {
  FrameKind kind = FrameKind::linear;
  FieldPtr field;
  int n = 0;
  int m = 0;  // Witt index of the hyperbolic part
  FormSpec form;
  std::vector<std::string> labels;
  elem mu = 0;                // Q(f_m) for minus type
  TowerPtr herm;              // GF(q) < GF(q^2) for unitary frames
  elem lambda = 0;            // lambda + lambda^q = 1, unitary only

  bool has_form() const { return kind != FrameKind::linear; }
  int index_of(const std::string& label) const;
  Vec basis(const std::string& label) const;
  Vec basis(int i) const;
};

SpaceFrame frame_linear(const FieldPtr& field, int n);
SpaceFrame frame_symplectic(const FieldPtr& field, int n);
// field is GF(q^2); n may be odd (extra basis vector d with beta(d,d)=1)
SpaceFrame frame_unitary(const FieldPtr& field, int n);
SpaceFrame frame_orthogonal(const FieldPtr& field, int n, FormSign sign);
SpaceFrame frame_for_form(const FormSpec& form);

GroupElem reflection(const SpaceFrame& frame, const Vec& w);
GroupElem reflection(const FormSpec& form, const Vec& w);
int dickson_invariant(const MatF& g, const SpaceFrame& frame);
enum class SpinorClass { square, nonsquare };
SpinorClass spinor_norm_class(const MatF& g, const SpaceFrame& frame);
// Dickson invariant (char 2) or spinor norm (odd char) is trivial
bool in_omega(const GroupElem& g, const SpaceFrame& frame);

// Rows of P form a basis in which the form is the canonical frame form
// of the returned frame.
struct Standardized {
  MatF P;
  SpaceFrame frame;
};
Standardized standardize(const FormSpec& form);
// Linear A with form2(uA, vA) = form1(u, v) mapping form1 to form2
MatF isometry_between(const FormSpec& form1, const FormSpec& form2);
// conjugate g by the change of basis P: returns P g P^-1 in new coordinates
GroupElem change_basis(const GroupElem& g, const MatF& P, const MatF& Pinv);

}  // namespace factorlab
