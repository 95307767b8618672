#include "semivar/operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "semivar/error.hpp"

namespace semivar {

namespace {

double norm_of(const std::vector<double>& x, Norm n) {
  double s = 0.0;
  switch (n) {
    case Norm::l1:
      for (double v : x) s += std::abs(v);
      return s;
    case Norm::linf:
      for (double v : x) s = std::max(s, std::abs(v));
      return s;
    default:
      for (double v : x) s += v * v;
      return std::sqrt(s);
  }
}

// Unit vector (in norm n) maximizing <g, x>.
std::vector<double> maximizer(const std::vector<double>& g, Norm n) {
  std::vector<double> x(g.size(), 0.0);
  if (g.empty()) return x;
  switch (n) {
    case Norm::l2: {
      double s = norm_of(g, Norm::l2);
      if (s == 0.0) {
        x[0] = 1.0;
        return x;
      }
      for (std::size_t i = 0; i < g.size(); ++i) x[i] = g[i] / s;
      return x;
    }
    case Norm::linf:
      for (std::size_t i = 0; i < g.size(); ++i) x[i] = g[i] < 0 ? -1.0 : 1.0;
      return x;
    case Norm::l1: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < g.size(); ++i)
        if (std::abs(g[i]) > std::abs(g[best])) best = i;
      x[best] = g[best] < 0 ? -1.0 : 1.0;
      return x;
    }
  }
  return x;
}

constexpr int kMaxEnumerated = 24;

// max over s in {-1,1}^cols of |A s|_cod, Gray-code walk.
double sign_enumeration(const DenseMatrix& m, Norm cod, std::vector<double>* argmax) {
  const int n = m.cols;
  if (n > kMaxEnumerated) fail(ErrorCode::unsupported, "operator norm: too many columns to enumerate");
  std::vector<double> s(n, 1.0), y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < n; ++j) y[i] += m(i, j);
  double best = norm_of(y, cod);
  std::vector<double> best_s = s;
  const std::uint64_t total = std::uint64_t(1) << (n > 0 ? n - 1 : 0);
  for (std::uint64_t g = 1; g < total; ++g) {
    int j = std::countr_zero(g) + 1;  // column 0 stays +1
    s[j] = -s[j];
    for (int i = 0; i < m.rows; ++i) y[i] += 2.0 * s[j] * m(i, j);
    double v = norm_of(y, cod);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  if (argmax) *argmax = best_s;
  return best;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

std::vector<double> mat_vec(const DenseMatrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
  return y;
}

void check_same(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (!(a == b)) fail(ErrorCode::argument, std::string("space mismatch: ") + what);
}

DenseMatrix to_matrix(const Operator& A) {
  if (A.kind() == Operator::Kind::matrix) return A.mat();
  if (A.domain().kind != SpaceKind::euclidean || A.codomain().kind != SpaceKind::euclidean)
    fail(ErrorCode::unsupported, "operator is not between euclidean spaces");
  DenseMatrix m(A.codomain().dim, A.domain().dim);
  for (int j = 0; j < m.cols; ++j) {
    NormedVector col = A.apply(NormedVector::basis(A.domain(), j + 1));
    for (auto& [k, v] : col.coords()) m(int(k) - 1, j) = v;
  }
  return m;
}

std::vector<Operator::Term> merge_terms(const std::vector<Operator::Term>& in) {
  std::vector<Operator::Term> out;
  for (const auto& t : in) {
    if (t.f.is_zero() || t.v.is_zero()) continue;
    bool merged = false;
    for (auto& o : out) {
      if (o.f == t.f) {
        o.v = o.v + t.v;
        merged = true;
      } else if (o.v.coords() == t.v.coords() && o.v.tail() == t.v.tail()) {
        o.f = o.f + t.f;
        merged = true;
      }
      if (merged) break;
    }
    if (!merged) out.push_back(t);
  }
  std::erase_if(out, [](const Operator::Term& t) { return t.f.is_zero() || t.v.is_zero(); });
  return out;
}

}  // namespace

double matrix_norm(const DenseMatrix& m, Norm dom, Norm cod, std::vector<double>* argmax) {
  if (m.rows == 0 || m.cols == 0) {
    if (argmax) *argmax = std::vector<double>(std::max(m.cols, 1), 0.0);
    return 0.0;
  }
  if (m.cols == 1) dom = Norm::l1;
  if (m.rows == 1) cod = Norm::linf;
  if (dom == Norm::l1) {
    double best = -1.0;
    int bj = 0;
    for (int j = 0; j < m.cols; ++j) {
      std::vector<double> col(m.rows);
      for (int i = 0; i < m.rows; ++i) col[i] = m(i, j);
      double v = norm_of(col, cod);
      if (v > best) {
        best = v;
        bj = j;
      }
    }
    if (argmax) {
      argmax->assign(m.cols, 0.0);
      (*argmax)[bj] = 1.0;
    }
    return best;
  }
  if (cod == Norm::linf) {
    double best = -1.0;
    std::vector<double> brow;
    for (int i = 0; i < m.rows; ++i) {
      std::vector<double> row(m.a.begin() + std::ptrdiff_t(i) * m.cols, m.a.begin() + std::ptrdiff_t(i + 1) * m.cols);
      double v = norm_of(row, dual_norm_kind(dom));
      if (v > best) {
        best = v;
        brow = row;
      }
    }
    if (argmax) *argmax = maximizer(brow, dom);
    return best;
  }
  if (dom == Norm::l2 && cod == Norm::l2) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(m.a.data(), m.rows,
                                                                                              m.cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, argmax ? Eigen::ComputeThinV : 0);
    if (argmax) {
      Eigen::VectorXd v = svd.matrixV().col(0);
      argmax->assign(v.data(), v.data() + v.size());
    }
    return svd.singularValues()(0);
  }
  if (dom == Norm::linf) {
    // linf -> l1 is symmetric under transposition; enumerate the smaller side.
    if (cod == Norm::l1 && m.rows < m.cols) {
      std::vector<double> t;
      double v = sign_enumeration(transpose(m), Norm::l1, &t);
      if (argmax) *argmax = maximizer(mat_vec(transpose(m), t), Norm::linf);
      return v;
    }
    return sign_enumeration(m, cod, argmax);
  }
  // l2 -> l1: |A| = max_t |A^T t|_2 over sign vectors t.
  std::vector<double> t;
  DenseMatrix at = transpose(m);
  double v = sign_enumeration(at, Norm::l2, &t);
  if (argmax) *argmax = maximizer(mat_vec(at, t), Norm::l2);
  return v;
}

Operator Operator::matrix(DenseMatrix m, Norm dom, Norm cod) {
  if (m.rows < 1 || m.cols < 1 || m.a.size() != std::size_t(m.rows) * m.cols)
    fail(ErrorCode::argument, "malformed matrix");
  for (double v : m.a)
    if (!std::isfinite(v)) fail(ErrorCode::argument, "non-finite matrix entry");
  Operator A;
  A.dom_ = SpaceSpec::euclidean(m.cols, dom);
  A.cod_ = SpaceSpec::euclidean(m.rows, cod);
  A.rep_ = std::move(m);
  return A;
}

Operator Operator::scalar_to_vector(NormedVector v) {
  Operator A;
  A.dom_ = SpaceSpec::scalar();
  A.cod_ = v.space();
  A.rep_ = std::move(v);
  return A;
}

Operator Operator::rank_one(Functional f, NormedVector v) {
  SpaceSpec d = f.space(), c = v.space();
  return finite_rank(d, c, {Term{std::move(f), std::move(v)}});
}

Operator Operator::finite_rank(SpaceSpec dom, SpaceSpec cod, std::vector<Term> terms) {
  for (const auto& t : terms) {
    check_same(t.f.space(), dom, "finite-rank functional");
    check_same(t.v.space(), cod, "finite-rank vector");
  }
  if (dom.is_scalar()) {
    NormedVector v = NormedVector::zero(cod);
    for (const auto& t : terms)
      if (!t.f.is_zero()) v = v + t.v * t.f.coords().begin()->second;
    return scalar_to_vector(v);
  }
  Operator A;
  A.dom_ = dom;
  A.cod_ = cod;
  A.rep_ = merge_terms(terms);
  return A;
}

Operator Operator::zero(SpaceSpec dom, SpaceSpec cod) {
  if (dom.is_scalar()) return scalar_to_vector(NormedVector::zero(cod));
  Operator A;
  A.dom_ = dom;
  A.cod_ = cod;
  return A;
}

Operator Operator::identity(SpaceSpec euclid) {
  if (euclid.kind != SpaceKind::euclidean) fail(ErrorCode::unsupported, "identity needs a euclidean space");
  DenseMatrix m(euclid.dim, euclid.dim);
  for (int i = 0; i < euclid.dim; ++i) m(i, i) = 1.0;
  return matrix(std::move(m), euclid.norm, euclid.norm);
}

Operator::Kind Operator::kind() const {
  switch (rep_.index()) {
    case 0: return Kind::matrix;
    case 1: return Kind::scalar_to_vector;
    default: return Kind::finite_rank;
  }
}

NormedVector Operator::apply(const NormedVector& x) const {
  check_same(x.space(), dom_, "operator argument");
  switch (kind()) {
    case Kind::matrix: {
      const DenseMatrix& m = mat();
      Coords c;
      for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (auto& [k, v] : x.coords()) s += m(i, int(k) - 1) * v;
        if (s != 0.0) c[i + 1] = s;
      }
      return NormedVector(cod_, std::move(c));
    }
    case Kind::scalar_to_vector: return column() * x.coord(1);
    default: {
      NormedVector y = NormedVector::zero(cod_);
      for (const auto& t : terms()) {
        double s = dual_pair(t.f, x);
        if (s != 0.0) y = y + t.v * s;
      }
      return y;
    }
  }
}

NormedVector Operator::image_of_one() const {
  if (!dom_.is_scalar()) fail(ErrorCode::argument, "image_of_one needs a scalar domain");
  return apply(NormedVector::scalar(1.0));
}

bool Operator::is_zero() const {
  switch (kind()) {
    case Kind::matrix: return std::all_of(mat().a.begin(), mat().a.end(), [](double v) { return v == 0.0; });
    case Kind::scalar_to_vector: return column().is_zero();
    default: return terms().empty();
  }
}

Operator Operator::operator+(const Operator& o) const {
  check_same(dom_, o.dom_, "operator sum domain");
  check_same(cod_, o.cod_, "operator sum codomain");
  if (o.kind() == Kind::finite_rank && o.is_zero()) return *this;
  if (kind() == Kind::finite_rank && is_zero()) return o;
  if (kind() == Kind::scalar_to_vector && o.kind() == Kind::scalar_to_vector)
    return scalar_to_vector(column() + o.column());
  if (kind() == Kind::finite_rank && o.kind() == Kind::finite_rank) {
    std::vector<Term> t = terms();
    t.insert(t.end(), o.terms().begin(), o.terms().end());
    return finite_rank(dom_, cod_, std::move(t));
  }
  if (dom_.kind == SpaceKind::euclidean && cod_.kind == SpaceKind::euclidean) {
    DenseMatrix m = to_matrix(*this);
    DenseMatrix n = to_matrix(o);
    for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] += n.a[i];
    return matrix(std::move(m), dom_.norm, cod_.norm);
  }
  fail(ErrorCode::unsupported, "cannot add these operator representations");
}

Operator Operator::operator*(double s) const {
  switch (kind()) {
    case Kind::matrix: {
      DenseMatrix m = mat();
      for (double& v : m.a) v *= s;
      return matrix(std::move(m), dom_.norm, cod_.norm);
    }
    case Kind::scalar_to_vector: return scalar_to_vector(column() * s);
    default: {
      std::vector<Term> t = terms();
      for (auto& x : t) x.v = x.v * s;
      return finite_rank(dom_, cod_, std::move(t));
    }
  }
}

NormedVector op_apply(const Operator& A, const NormedVector& x) { return A.apply(x); }

double op_norm(const Operator& A) {
  switch (A.kind()) {
    case Operator::Kind::matrix: return matrix_norm(A.mat(), A.domain().norm, A.codomain().norm);
    case Operator::Kind::scalar_to_vector: return vec_norm(A.column());
    default: {
      const auto& t = A.terms();
      if (t.empty()) return 0.0;
      if (t.size() == 1) return dual_norm(t[0].f) * vec_norm(t[0].v);
      DenseBlocks d = to_dense({A});
      return matrix_norm(d.blocks[0], d.dom, d.cod);
    }
  }
}

NormedVector op_norm_witness(const Operator& A) {
  switch (A.kind()) {
    case Operator::Kind::matrix: {
      std::vector<double> x;
      matrix_norm(A.mat(), A.domain().norm, A.codomain().norm, &x);
      Coords c;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) c[Index(i) + 1] = x[i];
      return NormedVector(A.domain(), std::move(c));
    }
    case Operator::Kind::scalar_to_vector: return NormedVector::scalar(1.0);
    default: {
      const auto& t = A.terms();
      if (t.empty()) return NormedVector::basis(A.domain(), 1);
      if (t.size() == 1) return norming_vector(t[0].f);
      DenseBlocks d = to_dense({A});
      std::vector<double> x;
      matrix_norm(d.blocks[0], d.dom, d.cod, &x);
      return from_dense(A.domain(), d.dom_index, x);
    }
  }
}

Functional pullback(const Functional& y, const Operator& A) {
  check_same(y.space(), A.codomain(), "pullback");
  switch (A.kind()) {
    case Operator::Kind::matrix: {
      const DenseMatrix& m = A.mat();
      Coords c;
      for (int j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (auto& [k, v] : y.coords()) s += v * m(int(k) - 1, j);
        if (s != 0.0) c[j + 1] = s;
      }
      return Functional(A.domain(), std::move(c));
    }
    case Operator::Kind::scalar_to_vector: return Functional(A.domain(), Coords{{1, dual_pair(y, A.column())}});
    default: {
      Functional f(A.domain(), {});
      for (const auto& t : A.terms()) f = f + t.f * dual_pair(y, t.v);
      return f;
    }
  }
}

Operator compose(const Operator& A, const Operator& B) {
  check_same(B.codomain(), A.domain(), "composition");
  if (B.domain().is_scalar()) return Operator::scalar_to_vector(A.apply(B.image_of_one()));
  if (A.kind() == Operator::Kind::finite_rank) {
    std::vector<Operator::Term> t;
    for (const auto& x : A.terms()) t.push_back({pullback(x.f, B), x.v});
    return Operator::finite_rank(B.domain(), A.codomain(), std::move(t));
  }
  if (B.kind() == Operator::Kind::finite_rank) {
    std::vector<Operator::Term> t;
    for (const auto& x : B.terms()) t.push_back({x.f, A.apply(x.v)});
    return Operator::finite_rank(B.domain(), A.codomain(), std::move(t));
  }
  if (A.kind() == Operator::Kind::scalar_to_vector) {
    // B maps into R: x -> (Bx) v.
    Functional row = pullback(Functional::coordinate(B.codomain(), 1), B);
    return Operator::finite_rank(B.domain(), A.codomain(), {{row, A.column()}});
  }
  const DenseMatrix& a = A.mat();
  const DenseMatrix& b = B.mat();
  DenseMatrix m(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      double v = a(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) m(i, j) += v * b(k, j);
    }
  return Operator::matrix(std::move(m), B.domain().norm, A.codomain().norm);
}

DenseBlocks to_dense(const std::vector<Operator>& ops) {
  DenseBlocks d;
  if (ops.empty()) return d;
  const SpaceSpec dom = ops[0].domain(), cod = ops[0].codomain();
  d.dom = dom.is_scalar() ? Norm::l2 : dom.norm;
  d.cod = cod.is_scalar() ? Norm::l2 : cod.norm;
  std::set<Index> di, ci;
  auto add_vec = [&ci](const NormedVector& v) {
    if (v.tail()) fail(ErrorCode::unsupported, "dense restriction cannot hold a harmonic tail");
    for (auto& [k, x] : v.coords()) ci.insert(k);
  };
  for (const auto& A : ops) {
    check_same(A.domain(), dom, "dense block domain");
    check_same(A.codomain(), cod, "dense block codomain");
    switch (A.kind()) {
      case Operator::Kind::matrix: break;
      case Operator::Kind::scalar_to_vector: add_vec(A.column()); break;
      default:
        for (const auto& t : A.terms()) {
          for (auto& [k, x] : t.f.coords()) di.insert(k);
          add_vec(t.v);
        }
    }
  }
  if (dom.kind == SpaceKind::euclidean)
    for (int i = 1; i <= dom.dim; ++i) di.insert(i);
  if (cod.kind == SpaceKind::euclidean)
    for (int i = 1; i <= cod.dim; ++i) ci.insert(i);
  if (di.empty()) di.insert(1);
  if (ci.empty()) ci.insert(1);
  d.dom_index.assign(di.begin(), di.end());
  d.cod_index.assign(ci.begin(), ci.end());
  auto row_of = [&d](Index k) { return int(std::lower_bound(d.cod_index.begin(), d.cod_index.end(), k) - d.cod_index.begin()); };
  for (const auto& A : ops) {
    DenseMatrix m(int(d.cod_index.size()), int(d.dom_index.size()));
    switch (A.kind()) {
      case Operator::Kind::matrix: m = A.mat(); break;
      case Operator::Kind::scalar_to_vector:
        for (auto& [k, x] : A.column().coords()) m(row_of(k), 0) = x;
        break;
      default:
        for (const auto& t : A.terms())
          for (auto& [kv, xv] : t.v.coords())
            for (auto& [kf, xf] : t.f.coords()) {
              int j = int(std::lower_bound(d.dom_index.begin(), d.dom_index.end(), kf) - d.dom_index.begin());
              m(row_of(kv), j) += xv * xf;
            }
    }
    d.blocks.push_back(std::move(m));
  }
  return d;
}

NormedVector from_dense(const SpaceSpec& space, const std::vector<Index>& index, const std::vector<double>& x) {
  Coords c;
  for (std::size_t i = 0; i < x.size() && i < index.size(); ++i)
    if (x[i] != 0.0) c[index[i]] = x[i];
  return NormedVector(space, std::move(c));
}

}  // namespace semivar
