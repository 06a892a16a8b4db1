#include "factorlab/construct.hpp"

#include "factorlab/shapes.hpp"

namespace factorlab {

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

bool is_unitary_family(const std::string& f) { return f == "SU" || f == "GU" || f == "SigmaU" || f == "GammaU"; }
bool is_linear_family(const std::string& f) { return f == "SL" || f == "GL" || f == "SigmaL" || f == "GammaL"; }

FormSign orth_sign(const std::string& f) {
  if (f.back() == '+') return FormSign::plus;
  if (f.back() == '-') return FormSign::minus;
  return FormSign::odd;
}

bool is_orth_family(const std::string& f) {
  return starts_with(f, "Omega") || starts_with(f, "SO") || starts_with(f, "GO") || starts_with(f, "GammaO");
}

// GF(p)-basis 1, w, ..., w^(f-1) of the field
std::vector<elem> prime_basis(const Field& F) {
  std::vector<elem> r;
  for (int k = 0; k < F.f(); ++k) r.push_back(F.gexp(k));
  return r;
}

Vec unit(int n, int i, elem t = 1) {
  Vec v(n, 0);
  v[i] = t;
  return v;
}

MatF diag_at(const FieldPtr& F, int n, const std::vector<std::pair<int, elem>>& d) {
  MatF A = MatF::identity(F, n);
  for (auto [i, t] : d) A.at(i, i) = t;
  return A;
}

elem small_trace(const TowerPtr& t, elem x) {
  std::int64_t r = t->restrict_elem(t->trace(x));
  if (r < 0) throw NotASubfield("trace left the subfield");
  return static_cast<elem>(r);
}

elem small_value(const TowerPtr& t, elem x) {
  std::int64_t r = t->restrict_elem(x);
  if (r < 0) throw NotASubfield("value not in the subfield");
  return static_cast<elem>(r);
}

// nonzero c with c + c^q = 0 in GF(q^2)
elem trace_zero_elem(const SpaceFrame& fr) {
  const Field& F = *fr.field;
  for (elem c = 1; c < F.q(); ++c)
    if (F.add(c, fr.form.conj(c)) == 0) return c;
  throw NoSuchConstant("no trace-zero element");
}

void check_gens(const Subgroup& s, bool omega) {
  for (const auto& g : s.gens) {
    if (s.frame.has_form() && !is_isometry(g, s.frame.form))
      throw VerificationFailed(s.recipe + ": generator is not an isometry");
    if (omega && !in_omega(g, s.frame)) throw VerificationFailed(s.recipe + ": generator outside the quasisimple group");
  }
}

MatF embed_block(const MatF& small, int n, int offset) {
  MatF A = MatF::identity(small.field(), n);
  for (int i = 0; i < small.n(); ++i)
    for (int j = 0; j < small.n(); ++j) A.at(offset + i, offset + j) = small.at(i, j);
  return A;
}

}  // namespace

FieldPtr field_of_order(long long q) {
  int p = 0, f = 0;
  if (!prime_power(q, &p, &f)) throw InvalidField("field order " + std::to_string(q) + " is not a prime power");
  return Field::get(p, f);
}

MatF elementary(const FieldPtr& field, int n, int i, int j, elem t) {
  MatF A = MatF::identity(field, n);
  A.at(i, j) = field->add(A.at(i, j), t);
  return A;
}

MatF eichler(const FormSpec& form, const Vec& u, const Vec& w, elem eps, elem c) {
  const Field& F = *form.field();
  int n = form.n();
  MatF A(form.field(), n);
  for (int i = 0; i < n; ++i) {
    Vec x = unit(n, i);
    elem bu = form_eval(form, x, u), bw = form_eval(form, x, w);
    Vec r = x;
    r = vec_add(F, r, vec_scale(F, bu, w));
    r = vec_add(F, r, vec_scale(F, F.add(F.mul(eps, bw), F.mul(c, bu)), u));
    A.set_row(i, r);
  }
  return A;
}

SpaceFrame classical_frame(const std::string& family, int n, long long q) {
  if (n < 1) throw IllegalParameters("dimension must be positive");
  if (is_linear_family(family)) return frame_linear(field_of_order(q), n);
  if (is_unitary_family(family)) return frame_unitary(field_of_order(q * q), n);
  if (family == "Sp" || family == "GammaSp") return frame_symplectic(field_of_order(q), n);
  if (is_orth_family(family)) return frame_orthogonal(field_of_order(q), n, orth_sign(family));
  throw UnknownFamily("no frame for family " + family);
}

std::vector<GroupElem> omega_generators(const SpaceFrame& fr) {
  const Field& F = *fr.field;
  int n = fr.n;
  std::vector<GroupElem> gens;
  auto pb = prime_basis(F);
  auto push = [&](const MatF& A) {
    if (!A.is_identity()) gens.push_back({A, 0});
  };
  switch (fr.kind) {
    case FrameKind::linear:
      for (int i = 0; i + 1 < n; ++i)
        for (elem t : pb) {
          push(elementary(fr.field, n, i, i + 1, t));
          push(elementary(fr.field, n, i + 1, i, t));
        }
      break;
    case FrameKind::symplectic: {
      Vec zero(n, 0);
      for (int u : {0, 1}) {
        for (elem t : pb) push(eichler(fr.form, unit(n, u), zero, 1, t));
        for (int j = 2; j < n; ++j)
          for (elem t : pb) push(eichler(fr.form, unit(n, u), unit(n, j, t), 1, 0));
      }
      break;
    }
    case FrameKind::unitary: {
      if (n < 2) break;
      Vec zero(n, 0);
      elem zeta = trace_zero_elem(fr);
      const Field& S = *fr.herm->small();
      elem neg1 = F.neg(1);
      for (int u : {0, 1}) {
        for (int k = 0; k < S.f(); ++k) push(eichler(fr.form, unit(n, u), zero, neg1, F.mul(zeta, fr.herm->embed(S.gexp(k)))));
        for (int j = 2; j < n; ++j)
          for (elem t : pb) {
            Vec w = unit(n, j, t);
            elem c = F.neg(F.mul(form_eval(fr.form, w, w), fr.lambda));
            push(eichler(fr.form, unit(n, u), w, neg1, c));
          }
      }
      break;
    }
    default: {
      if (n < 3) throw UnsupportedParameters("orthogonal groups need dimension at least 3");
      elem neg1 = F.neg(1);
      for (int u : {0, 1})
        for (int j = 2; j < n; ++j)
          for (elem t : pb) {
            Vec w = unit(n, j, t);
            push(eichler(fr.form, unit(n, u), w, neg1, F.neg(form_eval(fr.form, w))));
          }
      break;
    }
  }
  return gens;
}

GroupElem frobenius_elem(const FieldPtr& field, int n, int j) {
  int f = field->f();
  return {MatF::identity(field, n), ((j % f) + f) % f};
}

GroupElem semilinear_isometry(const FormSpec& form) {
  const FieldPtr& F = form.field();
  if (F->f() == 1) return GroupElem::identity(F, form.n());
  return {isometry_between(form.frob(1), form), 1};
}

GroupElem gamma_swap(const SpaceFrame& frame) {
  MatF A(frame.field, frame.n);
  for (int i = 0; i < frame.n; ++i) A.at(i, i) = 1;
  for (int i = 0; i < frame.m; ++i) {
    A.at(2 * i, 2 * i) = 0;
    A.at(2 * i + 1, 2 * i + 1) = 0;
    A.at(2 * i, 2 * i + 1) = 1;
    A.at(2 * i + 1, 2 * i) = 1;
  }
  return {A, 0};
}

GroupElem block_swap(const SpaceFrame& frame, int l) {
  if (2 * l > frame.m) throw IllegalParameters("block swap needs 2l <= m");
  std::vector<int> perm(frame.n);
  for (int i = 0; i < frame.n; ++i) perm[i] = i;
  for (int i = 0; i < l; ++i)
    for (int s : {0, 1}) std::swap(perm[2 * i + s], perm[2 * (l + i) + s]);
  MatF A(frame.field, frame.n);
  for (int i = 0; i < frame.n; ++i) A.at(i, perm[i]) = 1;
  return {A, 0};
}

Subgroup gens_classical(const std::string& family, int n, long long q) {
  if (!is_classical_family(family) || starts_with(family, "P"))
    throw UnknownFamily("cannot realize family " + family);
  Subgroup s;
  s.recipe = family + "(" + std::to_string(n) + "," + std::to_string(q) + ")";
  s.frame = classical_frame(family, n, q);
  s.gens = omega_generators(s.frame);
  check_gens(s, true);
  const FieldPtr& F = s.frame.field;
  const Field& K = *F;
  bool semi = starts_with(family, "Sigma") || starts_with(family, "Gamma");
  if (family == "GL" || family == "GammaL") s.gens.push_back({diag_at(F, n, {{0, K.primitive()}}), 0});
  if (family == "GU" || family == "GammaU") {
    elem a = K.primitive();
    long long qq = q;
    if (n == 1) {
      s.gens.push_back({diag_at(F, 1, {{0, K.pow(a, qq - 1)}}), 0});
    } else {
      s.gens.push_back({diag_at(F, n, {{0, a}, {1, K.inv(K.pow(a, qq))}}), 0});
    }
  }
  bool full_o = starts_with(family, "GO") || starts_with(family, "GammaO");
  bool so = starts_with(family, "SO");
  if (full_o || so) {
    GroupElem r1 = reflection(s.frame, vec_add(K, unit(n, 0), unit(n, 1)));
    if (K.p() == 2) {
      s.gens.push_back(r1);
    } else {
      elem c = 0;
      for (elem x = 1; x < K.q(); ++x)
        if (!K.is_square(x)) {
          c = x;
          break;
        }
      GroupElem r2 = reflection(s.frame, vec_add(K, unit(n, 0), unit(n, 1, c)));
      if (full_o) {
        s.gens.push_back(r1);
        s.gens.push_back(r2);
      } else {
        s.gens.push_back(r1 * r2);
      }
    }
  }
  if (semi && K.f() > 1) {
    if (s.frame.has_form())
      s.gens.push_back(semilinear_isometry(s.frame.form));
    else
      s.gens.push_back(frobenius_elem(F, n, 1));
  }
  check_gens(s, false);
  s.expected = classical_order(family, n, q);
  return s;
}

GroupElem field_ext_blowup(const GroupElem& g, const TowerPtr& tower) {
  const Field& B = *tower->big();
  const FieldPtr& S = tower->small();
  if (g.field()->key() != B.key()) throw NoTower("element is not over the tower's top field");
  int b = tower->degree(), a = g.n(), N = a * b;
  int j = g.frob;
  MatF L(S, b);
  for (int k = 0; k < b; ++k) {
    const elem* c = tower->coords(B.frob(tower->basis(k), j));
    for (int l = 0; l < b; ++l) L.at(k, l) = c[l];
  }
  MatF M(S, N);
  for (int i = 0; i < a; ++i)
    for (int l = 0; l < a; ++l) {
      elem x = g.mat.at(i, l);
      if (x == 0) continue;
      for (int k = 0; k < b; ++k) {
        const elem* c = tower->coords(B.mul(tower->basis(k), x));
        for (int t = 0; t < b; ++t) M.at(i * b + k, l * b + t) = c[t];
      }
    }
  MatF Lb(S, N);
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < b; ++k)
      for (int l = 0; l < b; ++l) Lb.at(i * b + k, i * b + l) = L.at(k, l);
  return {Lb * M, j % S->f()};
}

std::vector<GroupElem> field_ext_blowup(const std::vector<GroupElem>& gens, const TowerPtr& tower) {
  std::vector<GroupElem> r;
  for (const auto& g : gens) r.push_back(field_ext_blowup(g, tower));
  return r;
}

Vec blow_vector(const Vec& v, const TowerPtr& tower) {
  int b = tower->degree();
  Vec r;
  for (elem x : v) {
    const elem* c = tower->coords(x);
    r.insert(r.end(), c, c + b);
  }
  return r;
}

FormSpec blown_trace_form(const FormSpec& form, const TowerPtr& tower) {
  const Field& B = *tower->big();
  if (form.kind == FormKind::hermitian) throw IllegalParameters("use blown_norm_form for Hermitian forms");
  int b = tower->degree(), a = form.n(), N = a * b;
  FormSpec r;
  r.kind = form.kind;
  r.gram = MatF(tower->small(), N);
  if (form.kind == FormKind::quadratic) r.qdiag.assign(N, 0);
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < b; ++k) {
      elem tk = tower->basis(k);
      if (form.kind == FormKind::quadratic)
        r.qdiag[i * b + k] = small_trace(tower, B.mul(B.mul(tk, tk), form.qdiag[i]));
      for (int j = 0; j < a; ++j)
        for (int l = 0; l < b; ++l)
          r.gram.at(i * b + k, j * b + l) = small_trace(tower, B.mul(B.mul(tk, tower->basis(l)), form.gram.at(i, j)));
    }
  return r;
}

FormSpec blown_norm_form(const FormSpec& herm, const TowerPtr& tower) {
  const Field& B = *tower->big();
  if (herm.kind != FormKind::hermitian || tower->degree() != 2) throw IllegalParameters("need a Hermitian form over a quadratic extension");
  int a = herm.n(), N = 2 * a;
  FormSpec r;
  r.kind = FormKind::quadratic;
  r.gram = MatF(tower->small(), N);
  r.qdiag.assign(N, 0);
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < 2; ++k) {
      elem tk = tower->basis(k);
      r.qdiag[i * 2 + k] = small_value(tower, B.mul(B.mul(tk, herm.gram.at(i, i)), herm.conj(tk)));
      for (int j = 0; j < a; ++j)
        for (int l = 0; l < 2; ++l)
          r.gram.at(i * 2 + k, j * 2 + l) =
              small_trace(tower, B.mul(B.mul(tk, herm.gram.at(i, j)), herm.conj(tower->basis(l))));
    }
  return r;
}

Subgroup to_canonical(const std::vector<GroupElem>& gens, const FormSpec& form, const std::string& recipe) {
  for (const auto& g : gens)
    if (!is_isometry(g, form)) throw NotAnIsometry(recipe + ": generator does not preserve the form");
  auto st = standardize(form);
  MatF Pinv = st.P.inverse();
  Subgroup s;
  s.recipe = recipe;
  s.frame = st.frame;
  for (const auto& g : gens) s.gens.push_back(change_basis(g, st.P, Pinv));
  check_gens(s, false);
  return s;
}

Subgroup sp_in_su(int m, long long q) {
  FieldPtr Fs = field_of_order(q);
  SpaceFrame sp = frame_symplectic(Fs, 2 * m);
  SpaceFrame su = frame_unitary(field_of_order(q * q), 2 * m);
  const TowerPtr& T = su.herm;
  const Field& B = *su.field;
  auto embed = [&](const MatF& A) {
    MatF r(su.field, A.n());
    for (int i = 0; i < A.n(); ++i)
      for (int j = 0; j < A.n(); ++j) r.at(i, j) = T->embed(A.at(i, j));
    return r;
  };
  std::vector<GroupElem> gens;
  for (const auto& g : omega_generators(sp)) gens.push_back({embed(g.mat), 0});
  elem mu = find_mu_norm_minus_one(T).value();
  MatF J = embed(sp.form.gram);
  FormSpec H;
  H.kind = FormKind::hermitian;
  H.gram = J;
  for (int i = 0; i < 2 * m; ++i)
    for (int j = 0; j < 2 * m; ++j) H.gram.at(i, j) = B.mul(mu, J.at(i, j));
  Subgroup s = to_canonical(gens, H, "sp_in_su(" + std::to_string(m) + "," + std::to_string(q) + ")");
  auto st = standardize(H);
  FormSpec alt;
  alt.kind = FormKind::alternating;
  alt.gram = st.P * J * st.P.transpose();
  s.extra_form = alt;
  for (const auto& g : s.gens)
    if (!is_isometry(g, alt)) throw VerificationFailed("sp_in_su: alternating form not preserved");
  check_gens(s, true);
  s.expected = classical_order("Sp", 2 * m, q);
  return s;
}

Subgroup su_in_omega(int m, long long q, FormSign sign) {
  FormSign want = m % 2 == 0 ? FormSign::plus : FormSign::minus;
  if (sign != want) throw SignParityMismatch("SU_m(q) lies in the " + std::string(want == FormSign::plus ? "plus" : "minus") + " type group");
  SpaceFrame su = frame_unitary(field_of_order(q * q), m);
  auto blown = field_ext_blowup(omega_generators(su), su.herm);
  FormSpec Q = blown_norm_form(su.form, su.herm);
  Subgroup s = to_canonical(blown, Q, "su_in_omega(" + std::to_string(m) + "," + std::to_string(q) + ")");
  if (s.frame.form.sign != sign) throw SignParityMismatch("norm form has the other sign");
  check_gens(s, true);
  s.expected = classical_order("SU", m, q);
  return s;
}

Subgroup ext_field_subgroup(const std::string& family, int n, int b, long long q) {
  FieldPtr Fs = field_of_order(q);
  if (b < 1) throw IllegalParameters("extension degree must be positive");
  long long Q = 1;
  for (int i = 0; i < b; ++i) Q *= q;
  Subgroup big = gens_classical(family, n, Q);
  if (is_unitary_family(family)) throw IllegalParameters("unitary field-extension subgroups are not built");
  TowerPtr T = Tower::get(Fs, big.frame.field);
  auto blown = field_ext_blowup(big.gens, T);
  std::string recipe = "ext_field(" + family + "," + std::to_string(n) + "," + std::to_string(b) + "," + std::to_string(q) + ")";
  Subgroup s;
  if (!big.frame.has_form()) {
    s.recipe = recipe;
    s.frame = frame_linear(Fs, n * b);
    s.gens = blown;
  } else {
    s = to_canonical(blown, blown_trace_form(big.frame.form, T), recipe);
  }
  s.expected = big.expected;
  return s;
}

Subgroup parabolic_p1_sp(int m, long long q, bool residual, std::uint64_t seed) {
  if (m < 2) throw IllegalParameters("P1 of Sp_2m needs m >= 2");
  if (residual && m == 2 && q <= 3) throw IllegalParameters("residual of P1 is not R:Sp_2m-2 for (m,q) = (2,2),(2,3)");
  FieldPtr F = field_of_order(q);
  const Field& K = *F;
  int n = 2 * m;
  Subgroup s;
  s.recipe = std::string(residual ? "p1_sp_residual(" : "p1_sp(") + std::to_string(m) + "," + std::to_string(q) + ")";
  s.frame = frame_symplectic(F, n);
  Vec zero(n, 0), e1 = unit(n, 0);
  for (elem t : prime_basis(K)) s.gens.push_back({eichler(s.frame.form, e1, zero, 1, t), 0});
  for (int j = 2; j < n; ++j)
    for (elem t : prime_basis(K)) s.gens.push_back({eichler(s.frame.form, e1, unit(n, j, t), 1, 0), 0});
  for (const auto& g : omega_generators(frame_symplectic(F, n - 2))) s.gens.push_back({embed_block(g.mat, n, 2), 0});
  if (q > 2) s.gens.push_back({diag_at(F, n, {{0, K.primitive()}, {1, K.inv(K.primitive())}}), 0});
  check_gens(s, true);
  BigInt qb = q;
  BigInt radical = big_pow(qb, 2 * m - 1);
  if (residual) {
    auto act = faithful_action(F, n);
    PermGroup R = solvable_residual(s.gens, act, seed);
    s.gens = R.gens;
    s.expected = radical * derived_classical_order("Sp", n - 2, qb);
  } else {
    s.expected = radical * classical_order("Sp", n - 2, qb) * (q - 1);
  }
  return s;
}

Subgroup pm_residual(const std::string& family, int m, long long q) {
  if (m < 1) throw IllegalParameters("m must be positive");
  Subgroup s;
  s.recipe = "pm_residual(" + family + "," + std::to_string(m) + "," + std::to_string(q) + ")";
  BigInt qb = q;
  if (family == "SL") {
    FieldPtr F = field_of_order(q);
    int n = 2 * m;
    s.frame = frame_linear(F, n);
    auto pb = prime_basis(*F);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (elem t : pb) s.gens.push_back({elementary(F, n, m + i, j, t), 0});
    for (const auto& g : omega_generators(frame_linear(F, m))) {
      s.gens.push_back({embed_block(g.mat, n, 0), 0});
      s.gens.push_back({embed_block(g.mat, n, m), 0});
    }
    BigInt sl = classical_order("SL", m, qb);
    s.expected = big_pow(qb, m * m) * sl * sl;
    check_gens(s, true);
    return s;
  }
  bool unitary = family == "SU";
  if (unitary)
    s.frame = frame_unitary(field_of_order(q * q), 2 * m);
  else if (family == "Sp")
    s.frame = frame_symplectic(field_of_order(q), 2 * m);
  else if (family == "Omega+")
    s.frame = frame_orthogonal(field_of_order(q), 2 * m, FormSign::plus);
  else if (family == "Omega")
    s.frame = frame_orthogonal(field_of_order(q), 2 * m + 1, FormSign::odd);
  else
    throw UnknownFamily("no P_m recipe for " + family);
  const FieldPtr& F = s.frame.field;
  const Field& K = *F;
  int n = s.frame.n;
  auto pb = prime_basis(K);
  auto E = [](int i) { return 2 * i; };
  auto Fi = [](int i) { return 2 * i + 1; };
  auto radical = [&](const std::vector<std::tuple<int, int, elem>>& entries) {
    MatF A = MatF::identity(F, n);
    for (auto [i, j, c] : entries) A.at(Fi(i), E(j)) = K.add(A.at(Fi(i), E(j)), c);
    s.gens.push_back({A, 0});
  };
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (elem t : pb) {
        if (family == "Sp") {
          if (i == j)
            radical({{i, i, t}});
          else
            radical({{i, j, t}, {j, i, t}});
        } else if (unitary) {
          if (i != j) radical({{i, j, t}, {j, i, K.neg(s.frame.form.conj(t))}});
        } else if (i != j) {
          radical({{i, j, t}, {j, i, K.neg(t)}});
        }
      }
  if (unitary) {
    elem zeta = trace_zero_elem(s.frame);
    const Field& S = *s.frame.herm->small();
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < S.f(); ++k) radical({{i, i, K.mul(zeta, s.frame.herm->embed(S.gexp(k)))}});
  }
  if (family == "Omega") {
    for (int i = 0; i < m; ++i)
      for (elem t : pb) {
        Vec w = unit(n, n - 1, t);
        s.gens.push_back({eichler(s.frame.form, unit(n, E(i)), w, K.neg(1), K.neg(form_eval(s.frame.form, w))), 0});
      }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      for (elem t : pb) {
        MatF A = MatF::identity(F, n);
        A.at(E(i), E(j)) = t;
        A.at(Fi(j), Fi(i)) = K.neg(unitary ? s.frame.form.conj(t) : t);
        s.gens.push_back({A, 0});
      }
    }
  check_gens(s, true);
  BigInt levi = classical_order("SL", m, unitary ? qb * qb : qb);
  long long e = 0;
  if (family == "Sp") e = m * (m + 1) / 2;
  if (unitary) e = m * m;
  if (family == "Omega+") e = m * (m - 1) / 2;
  if (family == "Omega") e = m * (m - 1) / 2 + m;
  s.expected = big_pow(qb, e) * levi;
  return s;
}

std::vector<GroupElem> adjoin(const std::vector<GroupElem>& base, const GroupElem& x,
                              const std::shared_ptr<const FaithfulAction>& check, std::uint64_t seed) {
  if (check) {
    PermGroup G = bsgs(base, check, seed);
    GroupElem xi = x.inverse();
    for (const auto& b : base)
      if (!G.contains(xi * b * x)) throw NotNormalizing("adjoined element does not normalize the group");
  }
  std::vector<GroupElem> r = base;
  if (!x.is_identity()) r.push_back(x);
  return r;
}

}  // namespace factorlab
