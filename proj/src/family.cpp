#include <cmath>
#include <limits>
#include <numbers>

#include "semivar/opfunc.hpp"

namespace semivar {

namespace {

constexpr double kSlack = 4.0 * std::numeric_limits<double>::epsilon();
constexpr Index kMaxShiftLevel = 60;

SpaceSpec seq_l2() { return SpaceSpec::sequence(Norm::l2); }
SpaceSpec seq_linf() { return SpaceSpec::sequence(Norm::linf); }

// sum_{lo < k <= hi} scale * e_k / k
NormedVector harmonic_block(Index lo, Index hi, double scale) {
  if (hi - lo > kMaxMaterialized) fail(ErrorCode::unsupported, "harmonic block exceeds the materialization cap");
  Coords c;
  for (Index k = lo + 1; k <= hi; ++k) c[k] = scale / double(k);
  return NormedVector(seq_l2(), std::move(c));
}

}  // namespace

const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::ex1_harmonic: return "ex1-harmonic";
    case FamilyKind::linf_shift: return "linf-shift";
    default: return "c0-shift";
  }
}

SpaceSpec Family::domain() const {
  return kind == FamilyKind::ex1_harmonic ? SpaceSpec::scalar() : seq_linf();
}

SpaceSpec Family::codomain() const { return kind == FamilyKind::ex1_harmonic ? seq_l2() : seq_linf(); }

Index Family::level(double t) const {
  if (!(t > a && t <= b)) fail(ErrorCode::argument, "family level needs t in (a,b]");
  const double len = b - a, h = t - a;
  double u = len / h;
  if (!(u < 4.0e18)) fail(ErrorCode::unsupported, "evaluation point too close to the left endpoint");
  Index n = std::max<Index>(1, Index(std::floor(u)));
  while (double(n + 1) * h <= len * (1.0 + kSlack)) ++n;
  while (n > 1 && double(n) * h > len * (1.0 + kSlack)) --n;
  return n;
}

double Family::level_point(Index n) const { return a + (b - a) / double(n); }

bool Family::at_level_point(double t) const {
  Index n = level(t);
  return std::abs(double(n) * (t - a) - (b - a)) <= kSlack * (b - a);
}

Operator Family::value_at_level(Index n) const {
  switch (kind) {
    case FamilyKind::ex1_harmonic: return Operator::scalar_to_vector(harmonic_block(0, n, 1.0));
    case FamilyKind::linf_shift:
      return Operator::rank_one(Functional::coordinate(seq_linf(), 1), NormedVector::basis(seq_linf(), n));
    default: {
      if (n > kMaxShiftLevel) fail(ErrorCode::unsupported, "c0-shift level beyond the representable index range");
      std::vector<Operator::Term> t;
      const Index base = Index(1) << n;
      for (Index j = 1; j <= n; ++j)
        t.push_back({Functional::coordinate(seq_linf(), j), NormedVector::basis(seq_linf(), base + j)});
      return Operator::finite_rank(seq_linf(), seq_linf(), std::move(t));
    }
  }
}

Operator Family::eval(double t, Side side) const {
  if (!(t >= a && t <= b)) fail(ErrorCode::argument, "evaluation point outside the family's interval");
  if (t == a) {
    if (kind == FamilyKind::ex1_harmonic) return Operator::scalar_to_vector(NormedVector(seq_l2(), {}, Tail{0, 1.0}));
    if (side == Side::right)
      fail(ErrorCode::limit_does_not_exist,
           std::string("one-sided limit does not exist: ") + family_name(kind) + " at its left endpoint");
    return Operator::zero(domain(), codomain());
  }
  Index n = level(t);
  if (side == Side::right && t < b && at_level_point(t)) return value_at_level(n - 1);
  return value_at_level(n);
}

Operator Family::increment(double s, double t) const {
  if (s > t) return increment(t, s) * -1.0;
  if (s == t) return Operator::zero(domain(), codomain());
  const Index nt = level(t);
  if (s == a) {
    if (kind == FamilyKind::ex1_harmonic)
      return Operator::scalar_to_vector(NormedVector(seq_l2(), {}, Tail{nt, -1.0}));
    return value_at_level(nt);
  }
  const Index ns = level(s);
  if (ns == nt) return Operator::zero(domain(), codomain());
  switch (kind) {
    case FamilyKind::ex1_harmonic: return Operator::scalar_to_vector(harmonic_block(nt, ns, -1.0));
    case FamilyKind::linf_shift:
      return Operator::rank_one(Functional::coordinate(seq_linf(), 1),
                                NormedVector::basis(seq_linf(), nt) - NormedVector::basis(seq_linf(), ns));
    default: return value_at_level(nt) - value_at_level(ns);
  }
}

std::vector<double> Family::jump_points(double c, double d, std::size_t max_count) const {
  std::vector<double> out;
  if (!(d > a)) return out;
  for (Index n = level(d) + 1; out.size() < max_count; ++n) {
    double p = level_point(n);
    if (!(p > c)) break;
    if (p < d) out.push_back(p);
  }
  return out;
}

double Family::sv_upper_bound() const {
  switch (kind) {
    case FamilyKind::ex1_harmonic: return std::sqrt(tail_remainder_zeta2(1));
    case FamilyKind::linf_shift: return 2.0;
    default: return 3.0;
  }
}

}  // namespace semivar
