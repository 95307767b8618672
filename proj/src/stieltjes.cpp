#include "semivar/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semivar {

const char* integral_name(IntegralKind k) {
  switch (k) {
    case IntegralKind::F_dg: return "F_dg";
    case IntegralKind::dF_g: return "dF_g";
    default: return "product_dt";
  }
}

NormedVector PiecewiseLinear::eval(double t) const {
  if (!(t >= knots.front() && t <= knots.back())) fail(ErrorCode::argument, "evaluation point outside the interval");
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  std::size_t k = std::size_t(it - knots.begin());
  if (k >= knots.size()) return values.back();
  --k;
  double w = (t - knots[k]) / (knots[k + 1] - knots[k]);
  if (w == 0.0) return values[k];
  return values[k] + (values[k + 1] - values[k]) * w;
}

PiecewiseLinear primitive(const VectorStep& g) {
  g.validate();
  PiecewiseLinear p;
  p.knots = g.breaks;
  p.values.push_back(NormedVector::zero(g.point[0].space()));
  for (std::size_t j = 0; j < g.pieces(); ++j)
    p.values.push_back(p.values.back() + g.open[j] * (g.breaks[j + 1] - g.breaks[j]));
  return p;
}

TaggedPartition cousin_partition(const Gauge& delta, double a, double b, int max_depth) {
  if (!(a < b)) fail(ErrorCode::argument, "cousin partition needs a < b");
  struct Job {
    double lo, hi;
    int depth;
  };
  TaggedPartition out;
  std::vector<Job> stack{{a, b, 0}};
  auto fine = [&](double lo, double hi, double tag) {
    double d = delta(tag);
    if (!(d > 0.0)) fail(ErrorCode::argument, "gauge must be positive, got " + std::to_string(d) + " at " + std::to_string(tag));
    return lo > tag - d && hi < tag + d;
  };
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    double mid = 0.5 * (j.lo + j.hi);
    std::optional<double> tag;
    for (double t : {j.lo, j.hi, mid})
      if (fine(j.lo, j.hi, t)) {
        tag = t;
        break;
      }
    if (tag) {
      out.push_back({j.lo, j.hi, *tag});
      continue;
    }
    if (j.depth >= max_depth || !(j.lo < mid && mid < j.hi))
      fail(ErrorCode::depth_exceeded, "cousin partition depth cap reached; uncovered interval [" +
                                          std::to_string(j.lo) + ", " + std::to_string(j.hi) + "]");
    double cut = mid;
    const auto& fp = delta.forced_points();
    if (auto it = std::upper_bound(fp.begin(), fp.end(), j.lo); it != fp.end() && *it < j.hi) cut = *it;
    stack.push_back({cut, j.hi, j.depth + 1});
    stack.push_back({j.lo, cut, j.depth + 1});
  }
  return out;
}

namespace {

void check_same_interval(const OperatorFunction& F, const VectorStep& g) {
  g.validate();
  if (F.a() != g.a() || F.b() != g.b()) fail(ErrorCode::argument, "F and g live on different intervals");
  if (!(g.point[0].space() == F.domain())) fail(ErrorCode::argument, "g must take values in the domain of F");
}

NormedVector tagged_sum(IntegralKind kind, const OperatorFunction& F, const VectorStep& g, const TaggedPartition& p) {
  NormedVector s = NormedVector::zero(F.codomain());
  for (const auto& iv : p) {
    switch (kind) {
      case IntegralKind::F_dg: s += F.eval(iv.tag).apply(g.eval(iv.hi) - g.eval(iv.lo)); break;
      case IntegralKind::dF_g: s += (F.eval(iv.hi) - F.eval(iv.lo)).apply(g.eval(iv.tag)); break;
      case IntegralKind::product_dt: s += F.eval(iv.tag).apply(g.eval(iv.tag)) * (iv.hi - iv.lo); break;
    }
  }
  return s;
}

}  // namespace

NumericIntegral kurzweil_numeric(IntegralKind kind, const OperatorFunction& F, const VectorStep& g, double tol,
                                 int max_iter) {
  if (!F.is_step()) fail(ErrorCode::unsupported, "numeric integration needs step data for F");
  check_same_interval(F, g);
  std::vector<double> B;
  std::set_union(F.step().breaks.begin(), F.step().breaks.end(), g.breaks.begin(), g.breaks.end(),
                 std::back_inserter(B));
  const double a = F.a(), b = F.b();
  double spacing = b - a;
  for (std::size_t k = 0; k + 1 < B.size(); ++k) spacing = std::min(spacing, B[k + 1] - B[k]);
  NumericIntegral r;
  int small = 0;
  for (int i = 1; i <= max_iter; ++i) {
    const double h = std::ldexp(b - a, -i);
    NormedVector v = tagged_sum(kind, F, g, cousin_partition(Gauge::forced_tag(B, h), a, b));
    r.iterations = i;
    if (i > 1) {
      r.gap = vec_norm(v - r.value);
      r.gaps.push_back(r.gap);
      small = r.gap < tol ? small + 1 : 0;
    }
    r.value = v;
    // Sums only settle once the breakpoint tags are finer than the data.
    if (small >= 2 && 2.0 * h < spacing) return r;
  }
  std::string msg = "kurzweil_numeric did not converge; gaps:";
  for (double gp : r.gaps) msg += " " + std::to_string(gp);
  fail(ErrorCode::no_convergence, msg);
}

NormedVector ks_F_dg_exact(const OperatorFunction& F, const VectorStep& g) {
  check_same_interval(F, g);
  NormedVector s = NormedVector::zero(F.codomain());
  for (double t : g.breaks) {
    NormedVector jump = g.eval(t, Side::right) - g.eval(t, Side::left);
    if (!jump.is_zero()) s += F.eval(t).apply(jump);
  }
  return s;
}

NormedVector ks_F_dg_exact(const OpStep& F, const PiecewiseLinear& g) {
  F.validate();
  if (F.a() != g.knots.front() || F.b() != g.knots.back()) fail(ErrorCode::argument, "F and g live on different intervals");
  NormedVector s = NormedVector::zero(F.point[0].codomain());
  NormedVector prev = g.eval(F.breaks[0]);
  for (std::size_t j = 0; j < F.pieces(); ++j) {
    NormedVector next = g.eval(F.breaks[j + 1]);
    s += F.open[j].apply(next - prev);
    prev = next;
  }
  return s;
}

NormedVector ks_dF_g_exact(const OperatorFunction& F, const VectorStep& g) {
  check_same_interval(F, g);
  NormedVector s = NormedVector::zero(F.codomain());
  const auto& br = g.breaks;
  for (std::size_t j = 0; j < br.size(); ++j) {
    Operator jump = F.eval(br[j], Side::right) - F.eval(br[j], Side::left);
    if (!jump.is_zero()) s += jump.apply(g.point[j]);
    if (j + 1 < br.size()) {
      Operator inner_inc = F.eval(br[j + 1], Side::left) - F.eval(br[j], Side::right);
      if (!inner_inc.is_zero()) s += inner_inc.apply(g.open[j]);
    }
  }
  return s;
}

NormedVector product_integral(const OpStep& F, const VectorStep& g) {
  F.validate();
  g.validate();
  if (F.a() != g.a() || F.b() != g.b()) fail(ErrorCode::argument, "F and g live on different intervals");
  std::vector<double> B;
  std::set_union(F.breaks.begin(), F.breaks.end(), g.breaks.begin(), g.breaks.end(), std::back_inserter(B));
  NormedVector s = NormedVector::zero(F.point[0].codomain());
  for (std::size_t k = 0; k + 1 < B.size(); ++k) {
    double m = 0.5 * (B[k] + B[k + 1]);
    s += F.eval(m).apply(g.eval(m)) * (B[k + 1] - B[k]);
  }
  return s;
}

ByParts hk_product_by_parts(const OpStep& F, const VectorStep& g) {
  return {product_integral(F, g), ks_F_dg_exact(F, primitive(g))};
}

double existence_bound(const OperatorFunction& F, const VectorStep& g, IntegralKind kind, const SearchOptions& opt) {
  const double sv = semivariation(F, opt).upper;
  const double gs = step_sup_norm(g);
  switch (kind) {
    case IntegralKind::F_dg: return (op_norm(F.eval(F.a())) + op_norm(F.eval(F.b())) + sv) * gs;
    case IntegralKind::dF_g: return sv * gs;
    default: fail(ErrorCode::unsupported, "no existence bound for product_dt");
  }
}

double estimate_bound(const OperatorFunction& F, const VectorStep& g, const SearchOptions& opt) {
  return vec_norm(F.eval(F.a()).apply(g.eval(g.a()))) + step_sup_norm(g) * semivariation(F, opt).upper;
}

}  // namespace semivar
