#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "factorlab/construct.hpp"
#include "factorlab/linalg.hpp"
#include "factorlab/perm.hpp"

using namespace factorlab;

namespace {

MatF random_invertible(const FieldPtr& F, int n, std::mt19937_64& rng) {
  for (;;) {
    MatF A(F, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A.at(i, j) = static_cast<elem>(rng() % F->q());
    if (A.det() != 0) return A;
  }
}

Vec random_vec(const FieldPtr& F, int n, std::mt19937_64& rng) {
  Vec v(n);
  for (auto& x : v) x = static_cast<elem>(rng() % F->q());
  return v;
}

// (A,i)(B,j) = (A^(sigma^j) B, i+j mod f)
GroupElem compose_by_law(const GroupElem& a, const GroupElem& b) {
  int f = a.field()->f();
  return {a.mat.frob(b.frob) * b.mat, (a.frob + b.frob) % f};
}

void check_standard(const SpaceFrame& fr) {
  const Field& F = *fr.field;
  for (int i = 0; i < fr.m; ++i)
    for (int j = 0; j < fr.m; ++j) {
      Vec ei = fr.basis("e" + std::to_string(i + 1)), fj = fr.basis("f" + std::to_string(j + 1));
      Vec ej = fr.basis("e" + std::to_string(j + 1)), fi = fr.basis("f" + std::to_string(i + 1));
      CHECK(form_eval(fr.form, ei, fj) == (i == j ? 1u : 0u));
      // e_m and f_m are anisotropic in the minus frame
      if (!(fr.kind == FrameKind::orth_minus && i == fr.m - 1 && j == fr.m - 1)) {
        CHECK(form_eval(fr.form, ei, ej) == 0);
        CHECK(form_eval(fr.form, fi, fj) == 0);
      }
    }
  (void)F;
}

}  // namespace

TEST_CASE("matrix arithmetic") {
  std::mt19937_64 rng(1);
  for (auto F : {Field::get(2, 1), Field::get(3, 1), Field::get(2, 2), Field::get(5, 1)}) {
    for (int t = 0; t < 20; ++t) {
      MatF A = random_invertible(F, 4, rng), B = random_invertible(F, 4, rng);
      CHECK((A * A.inverse()).is_identity());
      CHECK(F->mul(A.det(), B.det()) == (A * B).det());
      CHECK((A * B).transpose() == B.transpose() * A.transpose());
      CHECK(A.rank() == 4);
    }
  }
  auto F = Field::get(2, 1);
  MatF Z(F, 3);
  CHECK(Z.rank() == 0);
  CHECK_THROWS_AS(Z.inverse(), DivisionByZero);
}

TEST_CASE("semilinear composition law, inverse and action") {
  std::mt19937_64 rng(7);
  for (auto F : {Field::get(2, 2), Field::get(3, 2), Field::get(2, 3)}) {
    for (int t = 0; t < 30; ++t) {
      GroupElem a{random_invertible(F, 3, rng), static_cast<int>(rng() % F->f())};
      GroupElem b{random_invertible(F, 3, rng), static_cast<int>(rng() % F->f())};
      GroupElem c{random_invertible(F, 3, rng), static_cast<int>(rng() % F->f())};
      CHECK(a * b == compose_by_law(a, b));
      CHECK((a * b) * c == a * (b * c));
      CHECK((a * a.inverse()).is_identity());
      Vec v = random_vec(F, 3, rng);
      CHECK((a * b).apply(v) == b.apply(a.apply(v)));
      // v -> v^(sigma^i) A
      CHECK(a.apply(v) == vec_mat(*F, vec_frob(*F, v, a.frob), a.mat));
    }
  }
}

TEST_CASE("vector coding round-trips") {
  auto F = Field::get(3, 2);
  for (std::uint64_t x = 0; x < 729; ++x) CHECK(vec_index(*F, vec_from_index(*F, 3, x)) == x);
}

TEST_CASE("frames carry standard bases") {
  for (long long q : {2, 3, 4, 5}) {
    int p, f;
    prime_power(q, &p, &f);
    auto F = Field::get(p, f);
    check_standard(frame_symplectic(F, 6));
    check_standard(frame_orthogonal(F, 6, FormSign::plus));
    check_standard(frame_orthogonal(F, 6, FormSign::minus));
    check_standard(frame_unitary(Field::get(p, 2 * f), 4));
    if (p != 2) check_standard(frame_orthogonal(F, 7, FormSign::odd));
    SpaceFrame mf = frame_orthogonal(F, 6, FormSign::minus);
    CHECK(form_eval(mf.form, mf.basis("e3")) == 1);
    CHECK(form_eval(mf.form, mf.basis("f3")) == mf.mu);
  }
  CHECK_THROWS_AS(frame_symplectic(Field::get(2, 1), 5), IllegalParameters);
}

TEST_CASE("quadratic forms polarize to their gram matrix") {
  std::mt19937_64 rng(3);
  for (auto F : {Field::get(2, 1), Field::get(3, 1), Field::get(2, 2)}) {
    SpaceFrame fr = frame_orthogonal(F, 6, FormSign::minus);
    for (int t = 0; t < 50; ++t) {
      Vec u = random_vec(F, 6, rng), v = random_vec(F, 6, rng);
      elem lhs = F->sub(F->sub(form_eval(fr.form, vec_add(*F, u, v)), form_eval(fr.form, u)), form_eval(fr.form, v));
      CHECK(lhs == form_eval(fr.form, u, v));
    }
  }
}

TEST_CASE("hermitian norm of lambda e1 + f1") {
  for (long long q : {2, 3, 4}) {
    int p, f;
    prime_power(q, &p, &f);
    SpaceFrame fr = frame_unitary(Field::get(p, 2 * f), 4);
    Vec v = vec_add(*fr.field, vec_scale(*fr.field, fr.lambda, fr.basis("e1")), fr.basis("f1"));
    CHECK(form_eval(fr.form, v, v) == 1);
  }
}

TEST_CASE("reflections") {
  auto F = Field::get(2, 1);
  SpaceFrame fr = frame_orthogonal(F, 6, FormSign::plus);
  Vec w = vec_add(*F, fr.basis("e1"), fr.basis("f1"));
  GroupElem r = reflection(fr, w);
  CHECK(r.apply(fr.basis("e1")) == fr.basis("f1"));
  CHECK(r.apply(fr.basis("f1")) == fr.basis("e1"));
  CHECK(r.apply(fr.basis("e2")) == fr.basis("e2"));
  CHECK((r * r).is_identity());
  CHECK(is_isometry(r, fr.form));
  CHECK(dickson_invariant(r.mat, fr) == 1);
  CHECK_THROWS_AS(reflection(fr, fr.basis("e1")), SingularVector);

  auto F3 = Field::get(3, 1);
  SpaceFrame o = frame_orthogonal(F3, 5, FormSign::odd);
  Vec d = o.basis("d");
  GroupElem rd = reflection(o, d);
  CHECK(rd.apply(d) == vec_scale(*F3, F3->neg(1), d));
  CHECK((rd * rd).is_identity());
  CHECK(is_isometry(rd, o.form));
}

TEST_CASE("isometry test rejects a scaled hyperbolic pair") {
  auto F = Field::get(3, 1);
  SpaceFrame fr = frame_symplectic(F, 4);
  GroupElem g = GroupElem::identity(F, 4);
  CHECK(is_isometry(g, fr.form));
  g.mat.at(0, 0) = 2;
  CHECK_FALSE(is_isometry(g, fr.form));
}

TEST_CASE("Dickson invariant is a homomorphism") {
  auto F = Field::get(2, 1);
  SpaceFrame fr = frame_orthogonal(F, 6, FormSign::minus);
  Subgroup O = gens_classical("GO-", 6, 2);
  std::mt19937_64 rng(11);
  std::vector<GroupElem> pool = O.gens;
  for (int t = 0; t < 40; ++t) pool.push_back(pool[rng() % pool.size()] * pool[rng() % pool.size()]);
  for (int t = 0; t < 60; ++t) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    CHECK(dickson_invariant((a * b).mat, O.frame) == (dickson_invariant(a.mat, O.frame) ^ dickson_invariant(b.mat, O.frame)));
  }
  CHECK(dickson_invariant(MatF::identity(F, 6), fr) == 0);
}

TEST_CASE("spinor norm is a homomorphism") {
  auto F = Field::get(3, 1);
  SpaceFrame fr = frame_orthogonal(F, 3, FormSign::odd);
  // Q(e1+f1) = 1 and Q(e1-f1) = -1 = 2, a nonsquare mod 3
  GroupElem r1 = reflection(fr, vec_add(*F, fr.basis("e1"), fr.basis("f1")));
  GroupElem r2 = reflection(fr, vec_add(*F, fr.basis("e1"), vec_scale(*F, 2, fr.basis("f1"))));
  CHECK(spinor_norm_class((r1 * r2).mat, fr) == SpinorClass::nonsquare);
  CHECK(spinor_norm_class((r1 * r1).mat, fr) == SpinorClass::square);
  CHECK(spinor_norm_class(MatF::identity(F, 3), fr) == SpinorClass::square);
  Subgroup SO = gens_classical("SO", 5, 3);
  std::mt19937_64 rng(5);
  std::vector<GroupElem> pool = SO.gens;
  for (int t = 0; t < 40; ++t) pool.push_back(pool[rng() % pool.size()] * pool[rng() % pool.size()]);
  for (int t = 0; t < 60; ++t) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    bool sa = spinor_norm_class(a.mat, SO.frame) == SpinorClass::square;
    bool sb = spinor_norm_class(b.mat, SO.frame) == SpinorClass::square;
    CHECK((spinor_norm_class((a * b).mat, SO.frame) == SpinorClass::square) == (sa == sb));
  }
}

TEST_CASE("kernels of the Dickson invariant and spinor norm have index 2") {
  struct Case {
    const char* full;
    const char* omega;
    int n;
    long long q;
  };
  for (const auto& c : {Case{"SO+", "Omega+", 4, 3}, Case{"SO", "Omega", 3, 3}, Case{"SO", "Omega", 5, 3},
                        Case{"GO-", "Omega-", 6, 2}, Case{"GO+", "Omega+", 6, 2}, Case{"SO-", "Omega-", 4, 3}}) {
    Subgroup O = gens_classical(c.full, c.n, c.q);
    auto act = faithful_action(O.frame.field, c.n);
    PermGroup PO = bsgs(O.gens, act, 1);
    // Schreier generators for the transversal {1, t}
    std::optional<GroupElem> t;
    for (const auto& g : O.gens)
      if (!in_omega(g, O.frame)) t = g;
    std::vector<GroupElem> kernel;
    for (const auto& g : O.gens) {
      if (in_omega(g, O.frame)) {
        kernel.push_back(g);
        if (t) kernel.push_back(*t * g * t->inverse());
      } else {
        kernel.push_back(g * t->inverse());
        kernel.push_back(*t * g);
      }
    }
    PermGroup PK = bsgs(kernel, act, 2);
    PermGroup PW = bsgs(gens_classical(c.omega, c.n, c.q).gens, act, 3);
    CAPTURE(c.full);
    CHECK(PO.order() == 2 * PK.order());
    CHECK(PK.order() == PW.order());
  }
}

TEST_CASE("standardize and isometry_between") {
  std::mt19937_64 rng(2);
  for (auto F : {Field::get(2, 1), Field::get(3, 1), Field::get(5, 1)}) {
    SpaceFrame fr = frame_symplectic(F, 4);
    MatF P = random_invertible(F, 4, rng);
    FormSpec moved = fr.form;
    moved.gram = P * fr.form.gram * P.transpose();
    auto st = standardize(moved);
    CHECK(st.frame.kind == FrameKind::symplectic);
    CHECK(st.P * moved.gram * st.P.transpose() == st.frame.form.gram);
    MatF A = isometry_between(moved, fr.form);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Vec u(4, 0), v(4, 0);
        u[i] = v[j] = 1;
        CHECK(form_eval(fr.form, vec_mat(*F, u, A), vec_mat(*F, v, A)) == form_eval(moved, u, v));
      }
  }
}
