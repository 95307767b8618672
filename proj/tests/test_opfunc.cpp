#include <cmath>
#include <numbers>

#include "doctest.h"
#include "instances.hpp"
#include "semivar/opfunc.hpp"

using namespace semivar;
using namespace semivar::testing;

namespace {

SpaceSpec seq2() { return SpaceSpec::sequence(Norm::l2); }
SpaceSpec seqinf() { return SpaceSpec::sequence(Norm::linf); }

OperatorFunction family(FamilyKind k, double a = 0.0, double b = 1.0) {
  Family f;
  f.kind = k;
  f.a = a;
  f.b = b;
  return OperatorFunction(f);
}

// max |Ax| over the vertices of the domain ball (l1 or linf) or a sphere sample (l2).
double norm_oracle(const DenseMatrix& m, Norm dom, Norm cod, Rng& rng) {
  auto image = [&](const std::vector<double>& x) {
    Coords c;
    for (int i = 0; i < m.rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
      c[i + 1] = s;
    }
    return vec_norm(NormedVector(SpaceSpec::euclidean(m.rows, cod), c));
  };
  double best = 0.0;
  std::vector<double> x(m.cols);
  if (dom == Norm::linf) {
    for (int mask = 0; mask < (1 << m.cols); ++mask) {
      for (int j = 0; j < m.cols; ++j) x[j] = (mask >> j) & 1 ? -1.0 : 1.0;
      best = std::max(best, image(x));
    }
  } else if (dom == Norm::l1) {
    for (int j = 0; j < m.cols; ++j) {
      std::fill(x.begin(), x.end(), 0.0);
      x[j] = 1.0;
      best = std::max(best, image(x));
    }
  } else if (cod == Norm::l1) {
    // max over sign vectors s of |A^T s|_2
    for (int mask = 0; mask < (1 << m.rows); ++mask) {
      double q = 0.0;
      for (int j = 0; j < m.cols; ++j) {
        double c = 0.0;
        for (int i = 0; i < m.rows; ++i) c += ((mask >> i) & 1 ? -1.0 : 1.0) * m(i, j);
        q += c * c;
      }
      best = std::max(best, std::sqrt(q));
    }
  } else if (cod == Norm::linf) {
    for (int i = 0; i < m.rows; ++i) {
      double q = 0.0;
      for (int j = 0; j < m.cols; ++j) q += m(i, j) * m(i, j);
      best = std::max(best, std::sqrt(q));
    }
  } else {
    // power iteration on A^T A
    std::vector<double> y(m.rows);
    for (auto& v : x) v = 1.0 + 0.1 * uniform(rng);
    for (int it = 0; it < 5000; ++it) {
      for (int i = 0; i < m.rows; ++i) {
        y[i] = 0.0;
        for (int j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
      }
      double n = 0.0;
      for (int j = 0; j < m.cols; ++j) {
        x[j] = 0.0;
        for (int i = 0; i < m.rows; ++i) x[j] += m(i, j) * y[i];
        n += x[j] * x[j];
      }
      if (n == 0.0) return 0.0;
      for (auto& v : x) v /= std::sqrt(n);
    }
    best = image(x);
  }
  return best;
}

}  // namespace

TEST_CASE("op_apply examples") {
  SpaceSpec e3 = SpaceSpec::euclidean(3);
  NormedVector x(e3, {{1, 1.0}, {2, -2.0}, {3, 0.5}});
  CHECK(vec_norm(op_apply(Operator::identity(e3), x) - x) == 0.0);
  NormedVector v(seq2(), {{4, 2.0}}, Tail{5, 1.0});
  CHECK(vec_norm(op_apply(Operator::scalar_to_vector(v), NormedVector::scalar(1.0)) - v) == 0.0);
  Operator r = Operator::rank_one(Functional::coordinate(seqinf(), 1), NormedVector::basis(seqinf(), 5));
  NormedVector y = op_apply(r, NormedVector(seqinf(), {{1, 2.0}}));
  CHECK(y.coords() == Coords{{5, 2.0}});
  CHECK_THROWS_AS(op_apply(Operator::identity(e3), NormedVector::scalar(1.0)), Error);
}

TEST_CASE("matrix norms against vertex and sphere oracles") {
  Rng rng(21);
  for (Norm dom : {Norm::l1, Norm::l2, Norm::linf})
    for (Norm cod : {Norm::l1, Norm::l2, Norm::linf})
      for (int i = 0; i < 30; ++i) {
        DenseMatrix m = random_matrix(rng, 1 + int(rng() % 4), 1 + int(rng() % 4));
        std::vector<double> arg;
        double n = matrix_norm(m, dom, cod, &arg);
        double o = norm_oracle(m, dom, cod, rng);
        CAPTURE(int(dom));
        CAPTURE(int(cod));
        CHECK(std::abs(n - o) < 1e-10);
        Coords xc;
        for (std::size_t j = 0; j < arg.size(); ++j) xc[Index(j) + 1] = arg[j];
        Operator A = Operator::matrix(m, dom, cod);
        NormedVector x(A.domain(), xc);
        CHECK(vec_norm(x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(vec_norm(A.apply(x)) == doctest::Approx(n).epsilon(1e-12));
      }
}

TEST_CASE("step evaluation conventions") {
  Rng rng(22);
  OpStep s = random_scalar_domain_step(rng, 4, 2);
  OperatorFunction f(s);
  auto same = [](const Operator& A, const Operator& B) { return A.column().coords() == B.column().coords(); };
  CHECK(same(f.eval(s.a(), Side::left), s.point[0]));
  CHECK(same(f.eval(s.b(), Side::right), s.point.back()));
  for (std::size_t j = 1; j + 1 < s.breaks.size(); ++j) {
    double t = s.breaks[j];
    double h = 1e-9;
    CHECK(same(f.eval(t, Side::left), f.eval(t - h)));
    CHECK(same(f.eval(t, Side::right), f.eval(t + h)));
    CHECK(same(f.eval(t), s.point[j]));
  }
  CHECK_THROWS_AS(f.eval(1.5), Error);
}

TEST_CASE("example families") {
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  Operator f1 = ex1.eval(1.0);
  CHECK(f1.column().coords() == Coords{{1, 1.0}});
  CHECK(std::abs(vec_norm(ex1.eval(0.0).column()) - std::sqrt(z2)) < 1e-12);
  CHECK(ex1.eval(1.0 / 3.0).column().coords().size() == 3);
  CHECK(ex1.eval(0.3).column().coords().size() == 3);
  CHECK(ex1.eval(1.0 / 3.0, Side::right).column().coords().size() == 2);

  auto inc = ex1.increments(Division({0.0, 1.0}));
  CHECK(std::abs(vec_norm(inc[0].column()) - std::sqrt(z2 - 1.0)) < 1e-12);
  auto half = ex1.increments(Division({0.5, 1.0}));
  CHECK(half[0].column().coords() == Coords{{2, -0.5}});
  CHECK(ex1.increment(0.6, 0.9).is_zero());

  OperatorFunction linf = family(FamilyKind::linf_shift);
  try {
    linf.eval(0.0, Side::right);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::limit_does_not_exist);
    CHECK(std::string(e.what()).find("one-sided limit does not exist") != std::string::npos);
  }
  CHECK(linf.eval(0.0).is_zero());
  NormedVector e1 = NormedVector::basis(seqinf(), 1);
  for (Index k = 1; k <= 1000; ++k) {
    Operator d = linf.increment(1.0 / double(k + 1), 1.0 / double(k));
    REQUIRE(vec_norm(d.apply(e1)) == 1.0);
  }

  OperatorFunction c0 = family(FamilyKind::c0_shift, 0.0, 2.0);
  const Family& fam = c0.family();
  for (Index k = 1; k <= 20; ++k) {
    Operator d = c0.increment(fam.level_point(k + 1), fam.level_point(k));
    REQUIRE(vec_norm(d.apply(e1)) >= 1.0);
    // S_k x = sum_{n<=k} x_n e_{2^k+n}
    NormedVector x(seqinf(), {{1, 3.0}, {Index(k) + 1, -1.0}});
    NormedVector y = c0.eval(fam.level_point(k)).apply(x);
    CHECK(y.coord((Index(1) << k) + 1) == 3.0);
    CHECK(y.coord((Index(1) << k) + k + 1) == 0.0);
    CHECK(y.coords().size() == 1);
  }
}

TEST_CASE("increments telescope") {
  Rng rng(23);
  NormedVector one = NormedVector::scalar(1.0);
  for (int i = 0; i < 200; ++i) {
    OpStep s = random_scalar_domain_step(rng, 5, 3);
    OperatorFunction f(s);
    Division d(random_breaks(rng, 7));
    NormedVector sum = NormedVector::zero(f.codomain());
    for (const auto& A : f.increments(d)) sum += A.apply(one);
    NormedVector direct = f.eval(1.0).apply(one) - f.eval(0.0).apply(one);
    REQUIRE(vec_norm(sum - direct) < 1e-14);
  }
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  Division d({0.0, 0.01, 0.1, 1.0 / 3.0, 0.5, 1.0});
  NormedVector sum = NormedVector::zero(ex1.codomain());
  for (const auto& A : ex1.increments(d)) sum += A.apply(one);
  CHECK(vec_norm(sum - (ex1.eval(1.0).apply(one) - ex1.eval(0.0).apply(one))) < 1e-15);
}

TEST_CASE("division union") {
  Division d({0.0, 0.5, 1.0});
  CHECK(division_union(d, d).points() == d.points());
  CHECK(division_union(Division({0.0, 1.0}), d).points() == d.points());
  CHECK(division_union(Division({0.0, 1.0 / 3.0, 1.0}), d).points() == std::vector<double>{0.0, 1.0 / 3.0, 0.5, 1.0});
  CHECK_THROWS_AS(division_union(Division({0.0, 2.0}), d), Error);
  CHECK_THROWS_AS(Division({0.0, 0.0}), Error);
}

TEST_CASE("gauges and fineness") {
  Gauge g = Gauge::forced_tag({0.5}, 0.01);
  CHECK(g(0.5) == 0.01);
  CHECK(g(0.7) == doctest::Approx(0.1));
  TaggedPartition p{{0.0, 0.4, 0.2}, {0.4, 0.6, 0.5}, {0.6, 1.0, 0.8}};
  CHECK(covers(p, 0.0, 1.0));
  CHECK(is_delta_fine(p, Gauge::constant(0.3)));
  CHECK(!is_delta_fine(p, Gauge::constant(0.2)));
  CHECK(!covers(TaggedPartition{{0.0, 0.4, 0.2}, {0.5, 1.0, 0.7}}, 0.0, 1.0));
  CHECK_THROWS_AS(Gauge::constant(0.0), Error);
}
