#include "factorlab/linalg.hpp"

#include <algorithm>

namespace factorlab {

MatF::MatF(FieldPtr field, int n) : field_(std::move(field)), n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

MatF MatF::identity(const FieldPtr& field, int n) {
  MatF m(field, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

MatF MatF::from_rows(const FieldPtr& field, const std::vector<Vec>& rows) {
  int n = static_cast<int>(rows.size());
  MatF m(field, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw DimensionMismatch("matrix must be square");
    m.set_row(i, rows[i]);
  }
  return m;
}

Vec MatF::row(int i) const { return Vec(a_.begin() + static_cast<std::ptrdiff_t>(i) * n_, a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * n_); }

void MatF::set_row(int i, const Vec& v) {
  if (static_cast<int>(v.size()) != n_) throw DimensionMismatch("row length");
  std::copy(v.begin(), v.end(), a_.begin() + static_cast<std::ptrdiff_t>(i) * n_);
}

MatF MatF::operator*(const MatF& o) const {
  if (n_ != o.n_) throw DimensionMismatch("matrix product");
  if (field_->key() != o.field_->key()) throw FieldMismatch("matrix product");
  const Field& F = *field_;
  MatF r(field_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      elem x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < n_; ++j) {
        elem y = o.at(k, j);
        if (y) r.at(i, j) = F.add(r.at(i, j), F.mul(x, y));
      }
    }
  return r;
}

MatF MatF::operator+(const MatF& o) const {
  MatF r(field_, n_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->add(a_[i], o.a_[i]);
  return r;
}

MatF MatF::operator-(const MatF& o) const {
  MatF r(field_, n_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->sub(a_[i], o.a_[i]);
  return r;
}

MatF MatF::frob(int j) const {
  MatF r(*this);
  for (auto& x : r.a_) x = field_->frob(x, j);
  return r;
}

MatF MatF::transpose() const {
  MatF r(field_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

MatF MatF::inverse() const {
  const Field& F = *field_;
  MatF a(*this), inv = identity(field_, n_);
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r)
      if (a.at(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) throw DivisionByZero("singular matrix");
    if (piv != c)
      for (int j = 0; j < n_; ++j) {
        std::swap(a.at(piv, j), a.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    elem s = F.inv(a.at(c, c));
    for (int j = 0; j < n_; ++j) {
      a.at(c, j) = F.mul(a.at(c, j), s);
      inv.at(c, j) = F.mul(inv.at(c, j), s);
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || a.at(r, c) == 0) continue;
      elem t = F.neg(a.at(r, c));
      for (int j = 0; j < n_; ++j) {
        a.at(r, j) = F.add(a.at(r, j), F.mul(t, a.at(c, j)));
        inv.at(r, j) = F.add(inv.at(r, j), F.mul(t, inv.at(c, j)));
      }
    }
  }
  return inv;
}

elem MatF::det() const {
  const Field& F = *field_;
  MatF a(*this);
  elem d = 1;
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r)
      if (a.at(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n_; ++j) std::swap(a.at(piv, j), a.at(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, a.at(c, c));
    elem s = F.inv(a.at(c, c));
    for (int r = c + 1; r < n_; ++r) {
      if (a.at(r, c) == 0) continue;
      elem t = F.neg(F.mul(a.at(r, c), s));
      for (int j = c; j < n_; ++j) a.at(r, j) = F.add(a.at(r, j), F.mul(t, a.at(c, j)));
    }
  }
  return d;
}

int rank_of_rows(const FieldPtr& field, std::vector<Vec> rows) {
  const Field& F = *field;
  if (rows.empty()) return 0;
  int ncols = static_cast<int>(rows[0].size());
  int rank = 0;
  for (int c = 0; c < ncols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][c]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    elem s = F.inv(rows[rank][c]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c] == 0) continue;
      elem t = F.neg(F.mul(rows[r][c], s));
      for (int j = c; j < ncols; ++j) rows[r][j] = F.add(rows[r][j], F.mul(t, rows[rank][j]));
    }
    ++rank;
  }
  return rank;
}

int MatF::rank() const {
  std::vector<Vec> rows;
  for (int i = 0; i < n_; ++i) rows.push_back(row(i));
  return rank_of_rows(field_, rows);
}

bool MatF::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

Vec vec_add(const Field& F, const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}

Vec vec_scale(const Field& F, elem c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
  return r;
}

Vec vec_frob(const Field& F, const Vec& a, int j) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.frob(a[i], j);
  return r;
}

Vec vec_mat(const Field& F, const Vec& v, const MatF& A) {
  int n = A.n();
  if (static_cast<int>(v.size()) != n) throw DimensionMismatch("vector times matrix");
  Vec r(n, 0);
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      elem y = A.at(i, j);
      if (y) r[j] = F.add(r[j], F.mul(v[i], y));
    }
  }
  return r;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](elem x) { return x == 0; });
}

std::uint64_t vec_index(const Field& F, const Vec& v) {
  std::uint64_t idx = 0;
  for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) idx = idx * F.q() + v[i];
  return idx;
}

Vec vec_from_index(const Field& F, int n, std::uint64_t idx) {
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = static_cast<elem>(idx % F.q());
    idx /= F.q();
  }
  return v;
}

GroupElem GroupElem::operator*(const GroupElem& o) const {
  int f = field()->f();
  return {mat.frob(o.frob) * o.mat, (frob + o.frob) % f};
}

GroupElem GroupElem::inverse() const {
  int f = field()->f();
  return {mat.frob(-frob).inverse(), (f - frob) % f};
}

Vec GroupElem::apply(const Vec& v) const {
  const Field& F = *field();
  if (frob == 0) return vec_mat(F, v, mat);
  return vec_mat(F, vec_frob(F, v, frob), mat);
}

GroupElem commutator(const GroupElem& a, const GroupElem& b) { return a.inverse() * b.inverse() * a * b; }

FormSpec FormSpec::frob(int j) const {
  FormSpec r(*this);
  r.gram = gram.frob(j);
  for (auto& x : r.qdiag) x = field()->frob(x, j);
  return r;
}

elem form_eval(const FormSpec& form, const Vec& u, const Vec& v) {
  int n = form.n();
  if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n) throw DimensionMismatch("form arguments");
  const Field& F = *form.field();
  elem acc = 0;
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    elem s = 0;
    for (int j = 0; j < n; ++j) {
      elem g = form.gram.at(i, j);
      if (g == 0 || v[j] == 0) continue;
      elem vj = form.kind == FormKind::hermitian ? form.conj(v[j]) : v[j];
      s = F.add(s, F.mul(g, vj));
    }
    acc = F.add(acc, F.mul(u[i], s));
  }
  return acc;
}

elem form_eval(const FormSpec& form, const Vec& u) {
  if (form.kind != FormKind::quadratic) return form_eval(form, u, u);
  int n = form.n();
  if (static_cast<int>(u.size()) != n) throw DimensionMismatch("form argument");
  const Field& F = *form.field();
  elem acc = 0;
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    acc = F.add(acc, F.mul(form.qdiag[i], F.mul(u[i], u[i])));
    for (int j = i + 1; j < n; ++j)
      if (u[j] && form.gram.at(i, j)) acc = F.add(acc, F.mul(form.gram.at(i, j), F.mul(u[i], u[j])));
  }
  return acc;
}

FormSpec transform_form(const FormSpec& form, const GroupElem& g) {
  // Q^g(v) = Q(v g^-1)^(sigma^i); for linear g this is Q(v g^-1)
  GroupElem gi = g.inverse();
  FormSpec tw = form.frob(g.frob);
  const MatF& B = gi.mat.frob(g.frob);
  int n = form.n();
  FormSpec r(form);
  std::vector<Vec> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = B.row(i);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r.gram.at(i, j) = form_eval(tw, rows[i], rows[j]);
    if (form.kind == FormKind::quadratic) r.qdiag[i] = form_eval(tw, rows[i]);
  }
  return r;
}

bool is_isometry(const GroupElem& g, const FormSpec& form) {
  int n = form.n();
  if (g.n() != n) throw DimensionMismatch("isometry test");
  const Field& F = *form.field();
  std::vector<Vec> img(n);
  for (int i = 0; i < n; ++i) img[i] = g.mat.row(i);  // e_i^g, basis vectors are Frobenius-fixed
  for (int i = 0; i < n; ++i) {
    if (form.kind == FormKind::quadratic && form_eval(form, img[i]) != F.frob(form.qdiag[i], g.frob)) return false;
    for (int j = 0; j < n; ++j)
      if (form_eval(form, img[i], img[j]) != F.frob(form.gram.at(i, j), g.frob)) return false;
  }
  return true;
}

int SpaceFrame::index_of(const std::string& label) const {
  for (int i = 0; i < n; ++i)
    if (labels[i] == label) return i;
  throw DimensionMismatch("no basis vector " + label);
}

Vec SpaceFrame::basis(const std::string& label) const { return basis(index_of(label)); }

Vec SpaceFrame::basis(int i) const {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

namespace {

std::vector<std::string> pair_labels(int m) {
  std::vector<std::string> l;
  for (int i = 1; i <= m; ++i) {
    l.push_back("e" + std::to_string(i));
    l.push_back("f" + std::to_string(i));
  }
  return l;
}

}  // namespace

SpaceFrame frame_linear(const FieldPtr& field, int n) {
  SpaceFrame fr;
  fr.kind = FrameKind::linear;
  fr.field = field;
  fr.n = n;
  for (int i = 1; i <= n; ++i) fr.labels.push_back("v" + std::to_string(i));
  fr.form.gram = MatF(field, n);
  return fr;
}

SpaceFrame frame_symplectic(const FieldPtr& field, int n) {
  if (n % 2) throw IllegalParameters("symplectic dimension must be even");
  SpaceFrame fr;
  fr.kind = FrameKind::symplectic;
  fr.field = field;
  fr.n = n;
  fr.m = n / 2;
  fr.labels = pair_labels(fr.m);
  fr.form.kind = FormKind::alternating;
  fr.form.gram = MatF(field, n);
  for (int i = 0; i < fr.m; ++i) {
    fr.form.gram.at(2 * i, 2 * i + 1) = 1;
    fr.form.gram.at(2 * i + 1, 2 * i) = field->neg(1);
  }
  return fr;
}

SpaceFrame frame_unitary(const FieldPtr& field, int n) {
  if (field->f() % 2) throw IllegalParameters("unitary frames live over GF(q^2)");
  SpaceFrame fr;
  fr.kind = FrameKind::unitary;
  fr.field = field;
  fr.n = n;
  fr.m = n / 2;
  fr.labels = pair_labels(fr.m);
  if (n % 2) fr.labels.push_back("d");
  fr.form.kind = FormKind::hermitian;
  fr.form.gram = MatF(field, n);
  for (int i = 0; i < fr.m; ++i) {
    fr.form.gram.at(2 * i, 2 * i + 1) = 1;
    fr.form.gram.at(2 * i + 1, 2 * i) = 1;
  }
  if (n % 2) fr.form.gram.at(n - 1, n - 1) = 1;
  fr.herm = Tower::get(Field::get(field->p(), field->f() / 2), field);
  fr.lambda = solve_trace_one(fr.herm).value();
  return fr;
}

SpaceFrame frame_orthogonal(const FieldPtr& field, int n, FormSign sign) {
  SpaceFrame fr;
  fr.field = field;
  fr.n = n;
  fr.form.kind = FormKind::quadratic;
  fr.form.sign = sign;
  fr.form.gram = MatF(field, n);
  fr.form.qdiag.assign(n, 0);
  const Field& F = *field;
  if (sign == FormSign::odd) {
    if (n % 2 == 0) throw IllegalParameters("odd orthogonal frame needs odd dimension");
    if (field->p() == 2) throw IllegalParameters("odd-dimensional orthogonal groups need q odd");
    fr.kind = FrameKind::orth_odd;
  } else if (sign == FormSign::plus || sign == FormSign::minus) {
    if (n % 2) throw IllegalParameters("orthogonal +/- frame needs even dimension");
    fr.kind = sign == FormSign::plus ? FrameKind::orth_plus : FrameKind::orth_minus;
  } else {
    throw IllegalParameters("orthogonal frame needs a sign");
  }
  fr.m = n / 2;
  fr.labels = pair_labels(fr.m);
  if (sign == FormSign::odd) fr.labels.push_back("d");
  for (int i = 0; i < fr.m; ++i) {
    fr.form.gram.at(2 * i, 2 * i + 1) = 1;
    fr.form.gram.at(2 * i + 1, 2 * i) = 1;
  }
  if (sign == FormSign::minus) {
    fr.mu = find_irreducible_mu(field).value();
    fr.form.qdiag[n - 2] = 1;
    fr.form.qdiag[n - 1] = fr.mu;
  }
  if (sign == FormSign::odd) fr.form.qdiag[n - 1] = 1;
  for (int i = 0; i < n; ++i) fr.form.gram.at(i, i) = F.add(fr.form.qdiag[i], fr.form.qdiag[i]);
  return fr;
}

SpaceFrame frame_for_form(const FormSpec& form) {
  switch (form.kind) {
    case FormKind::alternating:
      return frame_symplectic(form.field(), form.n());
    case FormKind::hermitian:
      return frame_unitary(form.field(), form.n());
    case FormKind::quadratic:
      return frame_orthogonal(form.field(), form.n(), form.sign);
    default:
      throw IllegalParameters("no canonical frame for a symmetric bilinear form");
  }
}

GroupElem reflection(const FormSpec& form, const Vec& w) {
  if (form.kind != FormKind::quadratic) throw IllegalParameters("reflections need a quadratic form");
  const Field& F = *form.field();
  elem qw = form_eval(form, w);
  if (qw == 0) throw SingularVector("Q(w) = 0");
  elem s = F.inv(qw);
  int n = form.n();
  MatF r = MatF::identity(form.field(), n);
  for (int i = 0; i < n; ++i) {
    Vec ei(n, 0);
    ei[i] = 1;
    elem coef = F.neg(F.mul(form_eval(form, ei, w), s));
    for (int j = 0; j < n; ++j) r.at(i, j) = F.add(r.at(i, j), F.mul(coef, w[j]));
  }
  return {r, 0};
}

GroupElem reflection(const SpaceFrame& frame, const Vec& w) { return reflection(frame.form, w); }

int dickson_invariant(const MatF& g, const SpaceFrame& frame) {
  if (frame.field->p() != 2) throw IllegalParameters("Dickson invariant needs characteristic 2");
  if (!is_isometry({g, 0}, frame.form)) throw NotAnIsometry("matrix does not preserve Q");
  return (g - MatF::identity(frame.field, frame.n)).rank() % 2;
}

SpinorClass spinor_norm_class(const MatF& g, const SpaceFrame& frame) {
  const Field& F = *frame.field;
  if (F.p() == 2) throw IllegalParameters("spinor norm needs odd characteristic");
  const FormSpec& Q = frame.form;
  if (!is_isometry({g, 0}, Q)) throw NotAnIsometry("matrix does not preserve Q");
  int n = frame.n;
  // discriminant of the Wall form [x(1-g), y(1-g)] = beta(x(1-g), y) on the image of 1-g
  MatF m = MatF::identity(frame.field, n) - g;
  std::vector<int> rows;
  std::vector<Vec> basis;
  for (int i = 0; i < n; ++i) {
    std::vector<Vec> trial = basis;
    trial.push_back(m.row(i));
    if (rank_of_rows(frame.field, trial) > static_cast<int>(basis.size())) {
      basis = std::move(trial);
      rows.push_back(i);
    }
  }
  int k = static_cast<int>(rows.size());
  if (k == 0) return SpinorClass::square;
  MatF wall(frame.field, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vec ej(n, 0);
      ej[rows[j]] = 1;
      wall.at(i, j) = form_eval(Q, basis[i], ej);
    }
  elem d = wall.det();
  if (d == 0) throw DecompositionFailure("degenerate Wall form");
  return F.is_square(d) ? SpinorClass::square : SpinorClass::nonsquare;
}

bool in_omega(const GroupElem& g, const SpaceFrame& frame) {
  if (g.frob != 0) return false;
  switch (frame.kind) {
    case FrameKind::linear:
      return g.mat.det() == 1;
    case FrameKind::symplectic:
      return is_isometry(g, frame.form);
    case FrameKind::unitary:
      return is_isometry(g, frame.form) && g.mat.det() == 1;
    default:
      if (!is_isometry(g, frame.form)) return false;
      if (frame.field->p() == 2) return dickson_invariant(g.mat, frame) == 0;
      return g.mat.det() == 1 && spinor_norm_class(g.mat, frame) == SpinorClass::square;
  }
}

namespace {

elem beta(const FormSpec& form, const Vec& u, const Vec& v) { return form_eval(form, u, v); }

bool isotropic(const FormSpec& form, const Vec& v) {
  if (form.kind == FormKind::quadratic) return form_eval(form, v) == 0;
  return form_eval(form, v, v) == 0;
}

Vec combo(const Field& F, const std::vector<Vec>& S, std::uint64_t idx, int n) {
  Vec v(n, 0);
  for (const auto& s : S) {
    elem c = static_cast<elem>(idx % F.q());
    idx /= F.q();
    if (c) v = vec_add(F, v, vec_scale(F, c, s));
  }
  return v;
}

}  // namespace

Standardized standardize(const FormSpec& form) {
  const FieldPtr& fp = form.field();
  const Field& F = *fp;
  int n = form.n();
  std::vector<Vec> S;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    S.push_back(e);
  }
  std::vector<Vec> out;
  TowerPtr herm;
  elem lambda = 0;
  if (form.kind == FormKind::hermitian) {
    herm = Tower::get(Field::get(F.p(), F.f() / 2), fp);
    lambda = solve_trace_one(herm).value();
  }
  elem fe_sign = form.kind == FormKind::alternating ? F.neg(1) : 1;  // beta(f,e)
  while (S.size() >= 2) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < S.size(); ++i) total *= F.q();
    Vec e;
    bool found = false;
    for (std::uint64_t idx = 1; idx < total && !found; ++idx) {
      Vec v = combo(F, S, idx, n);
      if (isotropic(form, v)) {
        e = v;
        found = true;
      }
    }
    if (!found) break;
    Vec f;
    found = false;
    for (const auto& s : S) {
      elem b = beta(form, e, s);
      if (b) {
        elem c = F.inv(b);
        if (form.kind == FormKind::hermitian) c = form.conj(c);
        f = vec_scale(F, c, s);
        found = true;
        break;
      }
    }
    if (!found) throw DegenerateForm("radical vector found");
    if (form.kind == FormKind::quadratic) {
      elem t = form_eval(form, f);
      f = vec_add(F, f, vec_scale(F, F.neg(t), e));
    } else if (form.kind == FormKind::hermitian) {
      elem t = form_eval(form, f, f);
      elem a = F.mul(t, lambda);
      f = vec_add(F, f, vec_scale(F, F.neg(a), e));
    } else if (form.kind == FormKind::symmetric) {
      throw IllegalParameters("symmetric bilinear forms are not standardized");
    }
    out.push_back(e);
    out.push_back(f);
    std::vector<Vec> rest;
    for (const auto& s : S) {
      elem alpha = beta(form, s, f);
      elem gamma = F.div(beta(form, s, e), fe_sign);
      Vec r = vec_add(F, s, vec_scale(F, F.neg(alpha), e));
      r = vec_add(F, r, vec_scale(F, F.neg(gamma), f));
      rest.push_back(r);
    }
    // keep an independent spanning set of the complement
    std::vector<Vec> basis;
    for (const auto& r : rest) {
      auto trial = basis;
      trial.push_back(r);
      if (rank_of_rows(fp, trial) == static_cast<int>(trial.size())) basis = trial;
    }
    S = basis;
  }
  FormSign sign = FormSign::none;
  if (form.kind == FormKind::alternating) {
    if (!S.empty()) throw DegenerateForm("alternating form is degenerate");
  } else if (form.kind == FormKind::hermitian) {
    if (S.size() == 1) {
      elem t = form_eval(form, S[0], S[0]);
      if (t == 0) throw DegenerateForm("hermitian form is degenerate");
      // c c^q t = 1
      bool ok = false;
      for (elem c = 1; c < F.q() && !ok; ++c)
        if (F.mul(F.mul(c, form.conj(c)), t) == 1) {
          out.push_back(vec_scale(F, c, S[0]));
          ok = true;
        }
      if (!ok) throw DegenerateForm("no unit vector");
    } else if (!S.empty()) {
      throw DegenerateForm("hermitian form is degenerate");
    }
  } else {
    if (S.empty()) {
      sign = FormSign::plus;
    } else if (S.size() == 1) {
      if (F.p() == 2) throw DegenerateForm("odd-dimensional form in characteristic 2");
      elem t = form_eval(form, S[0]);
      if (t == 0) throw DegenerateForm("degenerate quadratic form");
      if (!F.is_square(t)) throw DegenerateForm("odd form not isometric to the standard one");
      // c^2 t = 1
      elem c = 0;
      for (elem x = 1; x < F.q(); ++x)
        if (F.mul(F.mul(x, x), t) == 1) {
          c = x;
          break;
        }
      out.push_back(vec_scale(F, c, S[0]));
      sign = FormSign::odd;
    } else if (S.size() == 2) {
      elem mu = find_irreducible_mu(fp).value();
      std::uint64_t total = static_cast<std::uint64_t>(F.q()) * F.q();
      bool ok = false;
      for (std::uint64_t i = 1; i < total && !ok; ++i) {
        Vec e = combo(F, S, i, n);
        if (form_eval(form, e) != 1) continue;
        for (std::uint64_t j = 1; j < total && !ok; ++j) {
          Vec f = combo(F, S, j, n);
          if (form_eval(form, f) == mu && beta(form, e, f) == 1) {
            out.push_back(e);
            out.push_back(f);
            ok = true;
          }
        }
      }
      if (!ok) throw DegenerateForm("anisotropic plane not of minus type");
      sign = FormSign::minus;
    } else {
      throw DegenerateForm("anisotropic kernel too large");
    }
  }
  FormSpec shaped = form;
  shaped.sign = sign;
  Standardized r{MatF::from_rows(fp, out), frame_for_form(shaped)};
  return r;
}

MatF isometry_between(const FormSpec& form1, const FormSpec& form2) {
  auto s1 = standardize(form1);
  auto s2 = standardize(form2);
  if (s1.frame.kind != s2.frame.kind) throw NotAnIsometry("forms are not isometric");
  return s1.P.inverse() * s2.P;
}

GroupElem change_basis(const GroupElem& g, const MatF& P, const MatF& Pinv) {
  return {P.frob(g.frob) * g.mat * Pinv, g.frob};
}

}  // namespace factorlab
