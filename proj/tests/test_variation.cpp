#include <cmath>
#include <numbers>

#include "doctest.h"
#include "instances.hpp"
#include "semivar/variation.hpp"

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

// Direct sweep over all sign patterns with dense sums.
double brute_sign_sup(const std::vector<Operator>& incs) {
  const std::size_t nu = incs.size();
  double best = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << nu); ++m) {
    std::map<Index, double> y;
    for (std::size_t j = 0; j < nu; ++j) {
      const NormedVector d = incs[j].image_of_one();
      for (auto& [k, v] : d.coords()) y[k] += ((m >> j) & 1 ? -1.0 : 1.0) * v;
    }
    SpaceSpec sp = incs[0].codomain();
    best = std::max(best, vec_norm(NormedVector(sp, Coords(y.begin(), y.end()))));
  }
  return best;
}

OperatorFunction constant(SpaceSpec cod) {
  Operator C = Operator::scalar_to_vector(NormedVector::basis(cod, 1, 2.0));
  OpStep s{{0.0, 1.0}, {C}, {C, C}};
  return OperatorFunction(s);
}

}  // namespace

TEST_CASE("v_division examples") {
  SpaceSpec e2 = SpaceSpec::euclidean(2);
  std::vector<Operator> incs{Operator::scalar_to_vector(NormedVector(e2, {{1, 1.0}})),
                             Operator::scalar_to_vector(NormedVector(e2, {{2, 1.0}}))};
  VariationReport r = v_increments(incs, VMode::exact);
  CHECK(r.exact);
  CHECK(std::abs(r.value - std::sqrt(2.0)) < 1e-15);
  CHECK(r.witness[0].coord(1) == r.witness[1].coord(1));
  auto [lo, up] = v_bounds(incs);
  CHECK(lo == 1.0);
  CHECK(up == 2.0);

  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  VariationReport e = v_division(ex1, Division({0.0, 1.0}), VMode::exact);
  CHECK(std::abs(e.value - std::sqrt(kZeta2 - 1.0)) < 1e-12);

  VariationReport c = v_division(constant(e2), Division({0.0, 0.3, 1.0}));
  CHECK(c.value == 0.0);
  CHECK(v_bounds(constant(e2), Division({0.0, 0.3, 1.0})) == std::pair{0.0, 0.0});
}

TEST_CASE("exact mode agrees with a direct sweep") {
  Rng rng(31);
  for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) {
    for (int i = 0; i < 300; ++i) {
      OpStep s = random_scalar_domain_step(rng, 1 + rng() % 5, 1 + int(rng() % 3), n);
      OperatorFunction f(s);
      Division d(random_breaks(rng, 1 + rng() % 9));
      auto incs = f.increments(d);
      VariationReport r = v_division(f, d, VMode::exact);
      REQUIRE(std::abs(r.value - brute_sign_sup(incs)) < 1e-12);
      REQUIRE(std::abs(replay(incs, r.witness) - r.value) < 1e-12);
      auto [lo, up] = v_bounds(incs);
      REQUIRE(lo <= r.value + 1e-12);
      REQUIRE(r.value <= up + 1e-12);
    }
  }
}

TEST_CASE("exact mode rejects what it cannot enumerate") {
  Rng rng(32);
  OpStep s = random_matrix_step(rng, 3, 2, 2);
  CHECK_THROWS_AS(v_division(OperatorFunction(s), Division({0.0, 0.5, 1.0}), VMode::exact), Error);
  SpaceSpec e2 = SpaceSpec::euclidean(2);
  std::vector<Operator> many;
  for (int j = 0; j < 30; ++j) many.push_back(Operator::scalar_to_vector(NormedVector(e2, {{1, 1.0}, {2, 0.1 * j}})));
  CHECK_THROWS_AS(v_increments(many, VMode::exact), Error);
}

TEST_CASE("heuristic ascent stays between the bounds and the l1-domain optimum") {
  Rng rng(33);
  for (int i = 0; i < 100; ++i) {
    OpStep s = random_matrix_step(rng, 3, 3, 2, Norm::l1, Norm::l2);
    OperatorFunction f(s);
    Division d({0.0, 0.25, 0.5, 0.75, 1.0});
    auto incs = f.increments(d);
    VariationReport h = v_division(f, d, VMode::heuristic);
    // For an l1 domain the sup is attained at signed basis vectors.
    double opt = 0.0;
    std::vector<int> pick(incs.size(), 0);
    const int choices = 4;
    for (int m = 0; m < int(std::pow(choices, incs.size())); ++m) {
      int t = m;
      std::vector<NormedVector> x;
      for (std::size_t j = 0; j < incs.size(); ++j, t /= choices) {
        int c = t % choices;
        x.push_back(NormedVector::basis(SpaceSpec::euclidean(2, Norm::l1), 1 + c / 2, c % 2 ? -1.0 : 1.0));
      }
      opt = std::max(opt, replay(incs, x));
    }
    REQUIRE(h.value <= opt + 1e-12);
    REQUIRE(h.value >= 0.999 * opt);
    REQUIRE(h.upper >= opt - 1e-12);
    REQUIRE(std::abs(replay(incs, h.witness) - h.value) < 1e-12);
  }
}

TEST_CASE("ex1 semivariation values") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  VariationReport whole = semivariation(ex1);
  CHECK(whole.exact);
  CHECK(std::abs(whole.value - std::sqrt(kZeta2 - 1.0)) < 1e-12);
  CHECK(std::abs(semivariation(ex1, 0.0, 0.5).value - std::sqrt(kZeta2 - 1.25)) < 1e-12);
  CHECK(std::abs(semivariation(ex1, 0.5, 1.0).value - 0.5) < 1e-12);
  for (Index N = 1; N <= 50; ++N) {
    std::vector<double> pts{0.0};
    for (Index k = N + 1; k >= 1; --k) pts.push_back(1.0 / double(k));
    VariationReport r = v_division(ex1, Division(pts), VMode::exact);
    REQUIRE(std::abs(r.value - std::sqrt(kZeta2 - 1.0)) < 1e-12);
  }
}

TEST_CASE("ex1 variation over D_N is the harmonic block plus the tail") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  for (Index N : {1, 2, 10, 100, 1000}) {
    std::vector<double> pts{0.0};
    for (Index k = N + 1; k >= 1; --k) pts.push_back(1.0 / double(k));
    VariationReport r = variation(ex1, 0.0, 1.0, Division(pts));
    double oracle = std::sqrt(tail_remainder_zeta2(N + 1));
    for (Index k = 2; k <= N + 1; ++k) oracle += 1.0 / double(k);
    CHECK(r.divergent);
    CHECK(!r.exact);
    CHECK(std::isinf(r.upper));
    CHECK(std::abs(r.value - oracle) < 1e-12);
  }
  VariationReport inner = variation(ex1, 0.1, 1.0);
  CHECK(inner.exact);
  CHECK(std::abs(inner.value - (1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5 + 1.0 / 6 + 1.0 / 7 + 1.0 / 8 + 1.0 / 9 + 1.0 / 10)) <
        1e-15);
}

TEST_CASE("step variation") {
  SpaceSpec e2 = SpaceSpec::euclidean(2);
  CHECK(variation(constant(e2), 0.0, 1.0).value == 0.0);
  // One jump at 1/2: F = A on [0,1/2), J at 1/2, B on (1/2,1].
  Operator A = Operator::scalar_to_vector(NormedVector(e2, {{1, 1.0}}));
  Operator J = Operator::scalar_to_vector(NormedVector(e2, {{2, 2.0}}));
  Operator B = Operator::scalar_to_vector(NormedVector(e2, {{1, -1.0}}));
  OpStep s{{0.0, 0.5, 1.0}, {A, B}, {A, J, B}};
  VariationReport r = variation(OperatorFunction(s), 0.0, 1.0);
  CHECK(r.exact);
  CHECK(std::abs(r.value - 2.0 * std::sqrt(5.0)) < 1e-15);
}

TEST_CASE("half-open semivariation") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  auto sched = default_schedule(0.0, 1.0, HalfOpen::right_open_at_c, 20);
  auto vals = sv_halfopen(ex1, 0.0, 1.0, HalfOpen::right_open_at_c, sched);
  double sq = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    Index k = Index(i) + 1;
    if (k >= 2) sq += 1.0 / double(k * k);
    CHECK(std::abs(vals[i] - std::sqrt(sq)) < 1e-12);
    if (i > 0) CHECK(vals[i] >= vals[i - 1]);
    // cross-check against enumeration over the jump points
    std::vector<double> pts;
    for (Index m = k; m >= 1; --m) pts.push_back(1.0 / double(m));
    if (pts.size() >= 2) CHECK(std::abs(v_division(ex1, Division(pts), VMode::exact).value - vals[i]) < 1e-12);
  }
  VariationReport lim = sv_halfopen_limit(ex1, 0.0, 1.0, HalfOpen::right_open_at_c);
  CHECK(std::abs(lim.value - std::sqrt(kZeta2 - 1.0)) < 1e-12);

  auto zeros = sv_halfopen(constant(SpaceSpec::euclidean(2)), 0.0, 1.0, HalfOpen::left_open_at_d,
                           default_schedule(0.0, 1.0, HalfOpen::left_open_at_d, 5));
  for (double v : zeros) CHECK(v == 0.0);

  // Past the last breakpoint the left-open value drops the jump at d.
  Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    OpStep s = random_scalar_domain_step(rng, 4, 3);
    OperatorFunction f(s);
    double last = s.breaks[s.breaks.size() - 2];
    double mid = 0.5 * (last + 1.0);
    VariationReport l = sv_halfopen_limit(f, 0.0, 1.0, HalfOpen::left_open_at_d);
    CHECK(std::abs(l.value - semivariation(f, 0.0, mid).value) < 1e-12);
    auto tail = sv_halfopen(f, 0.0, 1.0, HalfOpen::left_open_at_d, {mid, 0.5 * (mid + 1.0), 1.0 - 1e-9});
    CHECK(std::abs(tail.back() - l.value) < 1e-12);
    CHECK(l.value <= semivariation(f).value + 1e-12);
  }
}

TEST_CASE("semivariation through functionals never exceeds V") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  Division d({0.0, 0.5, 1.0});
  VariationReport coord = sv_via_functionals(ex1, d, FunctionalSampler::coordinate);
  VariationReport exact = v_division(ex1, d, VMode::exact);
  CHECK(coord.value <= exact.value + 1e-12);
  CHECK(coord.value < exact.value);
  CHECK(coord.value >= 0.5 - 1e-15);

  SpaceSpec e3 = SpaceSpec::euclidean(3);
  Operator D = Operator::scalar_to_vector(NormedVector(e3, {{1, 3.0}, {2, 4.0}}));
  OpStep s{{0.0, 1.0}, {D}, {Operator::zero(SpaceSpec::scalar(), e3), D}};
  VariationReport single = sv_via_functionals(OperatorFunction(s), Division({0.0, 1.0}), FunctionalSampler::random, 8);
  CHECK(std::abs(single.value - 5.0) < 1e-12);

  Rng rng(35);
  for (int i = 0; i < 200; ++i) {
    OperatorFunction f(random_scalar_domain_step(rng, 4, 3));
    Division dd(random_breaks(rng, 6));
    double v = v_division(f, dd, VMode::exact).value;
    REQUIRE(sv_via_functionals(f, dd, FunctionalSampler::random, 32, {.seed = std::uint64_t(i)}).value <= v + 1e-12);
    REQUIRE(sv_via_functionals(f, dd, FunctionalSampler::coordinate).value <= v + 1e-12);
  }
}

TEST_CASE("V* with constructed and supplied contractions") {
  Rng rng(36);
  for (int i = 0; i < 200; ++i) {
    OperatorFunction f(random_scalar_domain_step(rng, 5, 2));
    Division d(random_breaks(rng, 1 + rng() % 8));
    VariationReport v = v_division(f, d, VMode::exact);
    VariationReport c = v_star_construct(f, d);
    REQUIRE(std::abs(c.value - v.value) < 1e-12);
    std::vector<Operator> id(d.nu(), Operator::identity(SpaceSpec::scalar()));
    VariationReport t = v_star(f, d, id);
    REQUIRE(std::abs(t.value - vec_norm((f.eval(1.0) - f.eval(0.0)).image_of_one())) < 1e-12);
    REQUIRE(t.value <= v.value + 1e-12);
  }
  // rank-one structure in a sequence space
  OperatorFunction linf = family(FamilyKind::linf_shift);
  Division d({0.1, 0.2, 0.3, 0.5, 1.0});
  VariationReport v = v_division(linf, d, VMode::exact);
  CHECK(std::abs(v_star_construct(linf, d).value - v.value) < 1e-12);
  DenseMatrix big(1, 1);
  big(0, 0) = 1.5;
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  CHECK_THROWS_AS(v_star(ex1, Division({0.0, 1.0}), {Operator::matrix(big)}), Error);
}

TEST_CASE("bv criterion and the SV norm") {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  VariationReport m = bv_criterion(ex1, Division({0.0, 0.5, 1.0}));
  CHECK(std::abs(m.value - (std::sqrt(kZeta2 - 1.25) + 0.5)) < 1e-12);
  CHECK(m.value > semivariation(ex1).value);
  CHECK(std::abs(sv_norm(ex1).value - (std::sqrt(kZeta2) + std::sqrt(kZeta2 - 1.0))) < 1e-12);

  SpaceSpec e2 = SpaceSpec::euclidean(2);
  CHECK(bv_criterion(constant(e2), Division({0.0, 0.4, 1.0})).value == 0.0);
  CHECK(sv_norm(constant(e2)).value == 2.0);

  Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    OpStep s = random_scalar_domain_step(rng, 4, 2);
    OperatorFunction f(s);
    REQUIRE(std::abs(bv_criterion(f, reduced_division(s, 0.0, 1.0)).value - variation(f, 0.0, 1.0).value) < 1e-12);
  }
}

TEST_CASE("shift families report bounds, not exact values") {
  OperatorFunction linf = family(FamilyKind::linf_shift);
  VariationReport r = semivariation(linf);
  CHECK(!r.exact);
  CHECK(r.upper == 2.0);
  CHECK(r.lower >= 1.0);
  CHECK(r.lower <= r.upper);
  OperatorFunction c0 = family(FamilyKind::c0_shift, 0.0, 1.0);
  VariationReport q = semivariation(c0);
  CHECK(q.upper == 3.0);
  CHECK(q.lower <= q.upper);
  CHECK(q.lower >= 1.0);
  CHECK(variation(linf, 0.1, 1.0).value == 9.0);
  CHECK(variation(linf, 0.0, 1.0).divergent);
}
