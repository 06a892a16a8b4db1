#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "factorlab/bigint.hpp"
#include "factorlab/linalg.hpp"
#include "factorlab/perm.hpp"

namespace factorlab {

FieldPtr field_of_order(long long q);

// A generating set together with the frame whose form it preserves.
struct Subgroup {
  std::string recipe;
  SpaceFrame frame;
  std::vector<GroupElem> gens;
  BigInt expected = 0;  // 0 when no closed form is attached
  std::optional<FormSpec> extra_form;
};

// Canonical frame of a family: GF(q^2) for unitary families.
SpaceFrame classical_frame(const std::string& family, int n, long long q);
// Family tags as in classical_order; projective tags are not realized.
Subgroup gens_classical(const std::string& family, int n, long long q);

// Root-element generators of the quasisimple group of the frame (SL, SU,
// Sp or Omega).
std::vector<GroupElem> omega_generators(const SpaceFrame& frame);
// x -> x + beta(x,u)w + eps beta(x,w)u + c beta(x,u)u
MatF eichler(const FormSpec& form, const Vec& u, const Vec& w, elem eps, elem c);
MatF elementary(const FieldPtr& field, int n, int i, int j, elem t);

// Regular representation over the subfield of a tower.
GroupElem field_ext_blowup(const GroupElem& g, const TowerPtr& tower);
std::vector<GroupElem> field_ext_blowup(const std::vector<GroupElem>& gens, const TowerPtr& tower);
Vec blow_vector(const Vec& v, const TowerPtr& tower);
// Tr(beta), or Tr(Q) for quadratic forms
FormSpec blown_trace_form(const FormSpec& form, const TowerPtr& tower);
// Q(v) = beta(v,v) of a Hermitian form, polar form Tr(beta)
FormSpec blown_norm_form(const FormSpec& herm, const TowerPtr& tower);
// Moves generators preserving form into the canonical frame of the form.
Subgroup to_canonical(const std::vector<GroupElem>& gens, const FormSpec& form, const std::string& recipe);

Subgroup sp_in_su(int m, long long q);
Subgroup su_in_omega(int m, long long q, FormSign sign);
// family in {SL, SigmaL, GL, GammaL, Sp, Omega+, Omega-, GO+, GO-,
// GammaO+, GammaO-}; n is the dimension over GF(q^b)
Subgroup ext_field_subgroup(const std::string& family, int n, int b, long long q);
Subgroup parabolic_p1_sp(int m, long long q, bool residual, std::uint64_t seed = 0);
// family in {SL, SU, Sp, Omega+, Omega}; R:T with Levi SL_m
Subgroup pm_residual(const std::string& family, int m, long long q);

GroupElem gamma_swap(const SpaceFrame& frame);
GroupElem frobenius_elem(const FieldPtr& field, int n, int j = 1);
// e_i <-> e_{l+i}, f_i <-> f_{l+i}, i <= l
GroupElem block_swap(const SpaceFrame& frame, int l);
// (A, 1) with A carrying form^sigma to form
GroupElem semilinear_isometry(const FormSpec& form);
// <base, x>; with an action, x must normalize <base>
std::vector<GroupElem> adjoin(const std::vector<GroupElem>& base, const GroupElem& x,
                              const std::shared_ptr<const FaithfulAction>& check = nullptr, std::uint64_t seed = 0);

}  // namespace factorlab
