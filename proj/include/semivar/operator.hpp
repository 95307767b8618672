#pragma once

#include <variant>
#include <vector>

#include "semivar/normed.hpp"

namespace semivar {

struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;  // row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), 0.0) {}
  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

// Operator norm between finite-dimensional normed spaces. Exact for every
// norm pair; the l2->l1 and linf->{l1,l2} pairs enumerate sign vectors and
// need the enumerated side to have at most 24 entries. If argmax is given it
// receives a unit vector attaining the norm.
double matrix_norm(const DenseMatrix& m, Norm dom, Norm cod, std::vector<double>* argmax = nullptr);

class Operator {
 public:
  struct Term {
    Functional f;
    NormedVector v;
  };
  enum class Kind { matrix, scalar_to_vector, finite_rank };

  Operator() = default;

  static Operator matrix(DenseMatrix m, Norm dom = Norm::l2, Norm cod = Norm::l2);
  static Operator scalar_to_vector(NormedVector v);
  static Operator rank_one(Functional f, NormedVector v);
  static Operator finite_rank(SpaceSpec dom, SpaceSpec cod, std::vector<Term> terms);
  static Operator zero(SpaceSpec dom, SpaceSpec cod);
  static Operator identity(SpaceSpec euclid);

  Kind kind() const;
  const SpaceSpec& domain() const { return dom_; }
  const SpaceSpec& codomain() const { return cod_; }
  const DenseMatrix& mat() const { return std::get<DenseMatrix>(rep_); }
  const NormedVector& column() const { return std::get<NormedVector>(rep_); }
  const std::vector<Term>& terms() const { return std::get<std::vector<Term>>(rep_); }

  NormedVector apply(const NormedVector& x) const;
  // For operators on R: the image of 1.
  NormedVector image_of_one() const;
  bool is_zero() const;

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const { return *this + o * -1.0; }
  Operator operator*(double s) const;

 private:
  SpaceSpec dom_{}, cod_{};
  std::variant<DenseMatrix, NormedVector, std::vector<Term>> rep_{std::vector<Term>{}};
};

NormedVector op_apply(const Operator& A, const NormedVector& x);
double op_norm(const Operator& A);
// Unit vector x with |Ax| = |A|.
NormedVector op_norm_witness(const Operator& A);
// A o B.
Operator compose(const Operator& A, const Operator& B);
// y o A as a functional on A's domain.
Functional pullback(const Functional& y, const Operator& A);

// A list of operators with a common domain/codomain, restricted to the
// finitely many coordinates they touch. Unsupported for harmonic tails.
struct DenseBlocks {
  Norm dom = Norm::l2, cod = Norm::l2;
  std::vector<Index> dom_index, cod_index;  // 1-based original coordinates
  std::vector<DenseMatrix> blocks;
};
DenseBlocks to_dense(const std::vector<Operator>& ops);
NormedVector from_dense(const SpaceSpec& space, const std::vector<Index>& index, const std::vector<double>& x);

}  // namespace semivar
