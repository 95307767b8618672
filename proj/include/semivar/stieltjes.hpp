#pragma once

#include <vector>

#include "semivar/opfunc.hpp"
#include "semivar/variation.hpp"

namespace semivar {

enum class IntegralKind { F_dg, dF_g, product_dt };

const char* integral_name(IntegralKind k);

// Continuous piecewise-linear X-valued function given by its knot values.
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<NormedVector> values;

  NormedVector eval(double t) const;
};

// t -> integral of g over [a,t].
PiecewiseLinear primitive(const VectorStep& g);

// Bisection: a subinterval is accepted as soon as its left end, right end or
// midpoint works as a tag. Intervals holding a forced point are split there
// instead of at the midpoint. Pieces come out left to right.
TaggedPartition cousin_partition(const Gauge& delta, double a, double b, int max_depth = 60);

struct NumericIntegral {
  NormedVector value;
  double gap = 0.0;
  int iterations = 0;
  std::vector<double> gaps;
};

// Tagged sums over Cousin partitions for the gauges delta_i = (b-a)/2^i, with
// every breakpoint of F and g forced as a tag. Step F only.
NumericIntegral kurzweil_numeric(IntegralKind kind, const OperatorFunction& F, const VectorStep& g, double tol,
                                 int max_iter = 48);

// sum over breakpoints of F(t)(g(t+) - g(t-)).
NormedVector ks_F_dg_exact(const OperatorFunction& F, const VectorStep& g);
// Step F against a continuous piecewise-linear integrator.
NormedVector ks_F_dg_exact(const OpStep& F, const PiecewiseLinear& g);
NormedVector ks_dF_g_exact(const OperatorFunction& F, const VectorStep& g);
// Lebesgue integral of F(t)g(t) for step data.
NormedVector product_integral(const OpStep& F, const VectorStep& g);

struct ByParts {
  NormedVector lhs, rhs;
};
ByParts hk_product_by_parts(const OpStep& F, const VectorStep& g);

double existence_bound(const OperatorFunction& F, const VectorStep& g, IntegralKind kind,
                       const SearchOptions& opt = {});
// |F(a)g(a)| + |g|_inf * SV(F)
double estimate_bound(const OperatorFunction& F, const VectorStep& g, const SearchOptions& opt = {});

}  // namespace semivar
