#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "instances.hpp"
#include "semivar/analysis.hpp"

using namespace semivar;
using namespace semivar::testing;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

OperatorFunction family(FamilyKind k, double a = 0.0, double b = 1.0) {
  Family f;
  f.kind = k;
  f.a = a;
  f.b = b;
  return OperatorFunction(f);
}

double zeta2_tail(int m) {
  double s = 0.0;
  for (int k = m; k >= 1; --k) s += 1.0 / (double(k) * k);
  return kZeta2 - s;
}

OpStep constant_step(const Operator& C, double a = 0.0, double b = 1.0) { return OpStep{{a, b}, {C}, {C, C}}; }

}  // namespace

TEST_CASE("helly traces") {
  Rng rng(11);
  SpaceSpec e2 = SpaceSpec::euclidean(2);
  for (int trial = 0; trial < 20; ++trial) {
    OpStep F = random_scalar_domain_step(rng, 3, 2);
    OpStep G = random_scalar_domain_step(rng, 2, 2);
    VectorStep g = random_vector_step(rng, 3, SpaceSpec::scalar());
    for (IntegralKind kind : {IntegralKind::F_dg, IntegralKind::dF_g}) {
      HellyReport r = helly_check(F, G, g, kind, 64);
      CHECK(r.pass);
      REQUIRE(r.trace.rows.size() == 64);
      for (const auto& row : r.trace.rows) CHECK(row.gap <= r.bound / row.n + 1e-12);
      const double svg = semivariation(OperatorFunction(G)).upper;
      if (kind == IntegralKind::dF_g)
        CHECK(std::abs(r.bound - svg * step_sup_norm(g)) < 1e-12);
    }
  }
  // Matrix values with a 2-dim domain go through the heuristic engine.
  for (int trial = 0; trial < 5; ++trial) {
    OpStep F = random_matrix_step(rng, 2, 2, 2);
    OpStep G = random_matrix_step(rng, 2, 2, 2);
    VectorStep g = random_vector_step(rng, 2, e2);
    HellyReport r = helly_check(F, G, g, IntegralKind::F_dg, 16);
    CHECK(r.pass);
  }

  OpStep F = random_scalar_domain_step(rng, 3, 2);
  OpStep Z = constant_step(Operator::zero(SpaceSpec::scalar(), e2));
  VectorStep g = random_vector_step(rng, 2, SpaceSpec::scalar());
  HellyReport z = helly_check(F, Z, g, IntegralKind::dF_g, 8);
  CHECK(z.pass);
  for (const auto& row : z.trace.rows) CHECK(row.gap == 0.0);
  CHECK_THROWS(helly_check(F, Z, g, IntegralKind::F_dg, 2));
}

TEST_CASE("step characterization of SV") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  OpStep half{{0.5, 1.0}, {ex1.eval(1.0)}, {ex1.eval(0.5), ex1.eval(1.0)}};
  CharacterizationReport h = sv_step_characterization(OperatorFunction(half), CharSearch::vertex_enumeration);
  CHECK(std::abs(h.value - 0.5) < 1e-12);
  CHECK(std::abs(h.sv - 0.5) < 1e-12);
  CHECK(std::abs(h.vertex_max - 0.5) < 1e-12);
  for (const auto& x : h.g_values) CHECK(std::abs(std::abs(x.coord(1)) - 1.0) < 1e-15);

  Operator C = Operator::scalar_to_vector(NormedVector::basis(SpaceSpec::euclidean(3), 2, 4.0));
  CharacterizationReport c = sv_step_characterization(OperatorFunction(constant_step(C)), CharSearch::witness_replay);
  CHECK(c.value == 0.0);
  CHECK(c.sv == 0.0);

  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Norm nm = std::array{Norm::l1, Norm::l2, Norm::linf}[trial % 3];
    OpStep F = random_scalar_domain_step(rng, 1 + trial % 6, 3, nm);
    OperatorFunction f(F);
    CharacterizationReport r = sv_step_characterization(f, CharSearch::vertex_enumeration);
    REQUIRE(r.exact);
    CHECK(std::abs(r.value - r.sv) < 1e-12);
    CHECK(std::abs(r.vertex_max - r.sv) < 1e-12);
    // g from the witness as an explicit left-continuous step
    VectorStep g = left_continuous_step(r.division, r.g_values);
    CHECK(g.eval(g.a()).is_zero());
    for (std::size_t j = 1; j < r.division.size(); ++j) {
      double t = r.division[j];
      CHECK(vec_norm(g.eval(t) - g.eval(t, Side::left)) == 0.0);
    }
  }

  OpStep M = random_matrix_step(rng, 2, 2, 2);
  CHECK_THROWS(sv_step_characterization(OperatorFunction(M), CharSearch::vertex_enumeration));
  CharacterizationReport m = sv_step_characterization(OperatorFunction(M), CharSearch::witness_replay);
  CHECK(m.value <= m.sv + 1e-12);
}

TEST_CASE("regulated limits") {
  Rng rng(3);
  OpStep F = random_matrix_step(rng, 4, 2, 2);
  double t = 0.5 * (F.breaks[1] + F.breaks[2]);
  double room = std::min(t - F.breaks[1], F.breaks[2] - t);
  std::vector<double> deltas{room / 2, room / 4, room / 8};
  LimitsReport s = regulated_limits_check(OperatorFunction(F), t, deltas, NormedVector::basis(SpaceSpec::euclidean(2), 1));
  CHECK(s.limits_exist);
  for (double v : s.left_tails) CHECK(v == 0.0);
  for (double v : s.right_tails) CHECK(v == 0.0);

  // at a breakpoint the one-sided tails still vanish
  LimitsReport sb = regulated_limits_check(OperatorFunction(F), F.breaks[2], deltas,
                                           NormedVector::basis(SpaceSpec::euclidean(2), 1));
  CHECK(sb.limits_exist);

  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  std::vector<double> sched;
  for (int m = 2; m <= 64; m *= 2) sched.push_back(1.0 / m);
  LimitsReport e = regulated_limits_check(ex1, 0.0, sched, NormedVector::scalar(1.0));
  CHECK(e.limits_exist);
  CHECK(e.left_tails.empty());
  REQUIRE(e.right_tails.size() == sched.size());
  for (std::size_t i = 0; i < sched.size(); ++i)
    CHECK(std::abs(e.right_tails[i] - std::sqrt(zeta2_tail(int(std::lround(1.0 / sched[i]))))) < 1e-12);

  OperatorFunction linf = family(FamilyKind::linf_shift);
  std::vector<double> ks;
  for (int k = 1; k <= 12; ++k) ks.push_back(1.0 / k);
  LimitsReport l = regulated_limits_check(linf, 0.0, ks, NormedVector::basis(SpaceSpec::sequence(Norm::linf), 1));
  CHECK_FALSE(l.limits_exist);
  CHECK(l.oscillation == 1.0);

  CHECK_THROWS(regulated_limits_check(ex1, 0.0, {0.5, 0.5}, NormedVector::scalar(1.0)));
  CHECK_THROWS(regulated_limits_check(ex1, 0.0, {}, NormedVector::scalar(1.0)));
}

TEST_CASE("series toolkit") {
  auto y = dr_sequence(100);
  SeriesReport a = series_check(y, SeriesMode::absolute, 0, 0, 5.0);
  double h = 0.0;
  for (int k = 1; k <= 100; ++k) h += 1.0 / k;
  CHECK(std::abs(a.max_value - h) < 1e-12);
  CHECK(a.divergent_trend);
  REQUIRE(a.first_exceeding);
  CHECK(*a.first_exceeding == 83);

  auto y2 = dr_sequence(300);
  SeriesReport s = series_check(y2, SeriesMode::sign_sample, 200, 7, 0.0);
  REQUIRE(s.trace.rows.size() == 200);
  double plus = 0.0;
  for (int k = 1; k <= 300; ++k) plus += 1.0 / (double(k) * k);
  for (const auto& row : s.trace.rows) {
    CHECK(row.value <= std::sqrt(kZeta2) + 1e-12);
    CHECK(row.value >= std::sqrt(plus) - 1e-12);
  }

  // orthogonal terms: every rearrangement has the same norm
  SeriesReport p = series_check(y2, SeriesMode::permutation_sample, 20, 1, 0.0);
  CHECK(p.spread < 1e-12);
  CHECK(std::abs(p.max_value - std::sqrt(plus)) < 1e-12);

  std::vector<Functional> fs{Functional::coordinate(SpaceSpec::sequence(Norm::l2), 1),
                             Functional::coordinate(SpaceSpec::sequence(Norm::l2), 50)};
  SeriesReport w = series_check(y, SeriesMode::weak_absolute, 0, 0, 0.5, fs);
  REQUIRE(w.trace.rows.size() == 2);
  CHECK(w.trace.rows[0].value == 1.0);
  CHECK(std::abs(w.trace.rows[1].value - 0.02) < 1e-15);
  CHECK(*w.first_exceeding == 1);

  for (SeriesMode m : {SeriesMode::absolute, SeriesMode::sign_sample, SeriesMode::permutation_sample,
                       SeriesMode::weak_absolute}) {
    SeriesReport e = series_check({}, m, 10, 0, 1.0, fs);
    CHECK(e.trace.rows.empty());
    CHECK(e.max_value == 0.0);
  }

  // the same seed replays the same trace
  SeriesReport s2 = series_check(y2, SeriesMode::sign_sample, 200, 7, 0.0);
  for (std::size_t i = 0; i < s.trace.rows.size(); ++i) CHECK(s.trace.rows[i].value == s2.trace.rows[i].value);
}

TEST_CASE("superadditivity and multipliers") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  SlackReport r = superadditivity_check(ex1, 0.5);
  CHECK(r.exact);
  const double margin = std::sqrt(kZeta2 - 1.25) + 0.5 - std::sqrt(kZeta2 - 1.0);
  CHECK(std::abs(r.slack - margin) < 1e-12);
  CHECK(r.slack > 0.32);
  CHECK_THROWS(superadditivity_check(ex1, 0.0));

  Operator C = Operator::scalar_to_vector(NormedVector::basis(SpaceSpec::euclidean(2), 1, 3.0));
  SlackReport c = superadditivity_check(OperatorFunction(constant_step(C)), 0.3);
  CHECK(c.slack == 0.0);

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    OpStep F = random_scalar_domain_step(rng, 3, 2);
    OperatorFunction f(F);
    double cut = uniform(rng, 0.05, 0.95);
    SlackReport sa = superadditivity_check(f, cut);
    CHECK(sa.slack >= -1e-12);

    SlackReport id = multiplier_check(F, constant_step(Operator::identity(SpaceSpec::scalar())));
    CHECK(std::abs(id.slack) < 1e-12);

    OpStep G = random_matrix_step(rng, 2, 1, 1);
    SlackReport m = multiplier_check(F, G);
    CHECK(m.slack >= -1e-12);

    OpStep A = random_matrix_step(rng, 2, 2, 2);
    OpStep B = random_matrix_step(rng, 2, 2, 2);
    SlackReport mm = multiplier_check(A, B);
    CHECK(mm.slack >= -1e-12);
  }
}
