#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semivar/opfunc.hpp"

namespace semivar {

struct VariationReport {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  bool divergent = false;
  std::vector<double> division;          // the division the witness refers to
  std::vector<NormedVector> witness;     // x_j, one per subinterval
  std::vector<Operator> witness_ops;     // G_j for v_star
  std::optional<Functional> functional;  // best y* for sv_via_functionals
  std::string method;
};

enum class VMode { automatic, exact, heuristic };

struct SearchOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int max_iter = 1000;
};

// V for an explicit list of increments.
VariationReport v_increments(const std::vector<Operator>& incs, VMode mode = VMode::automatic,
                             const SearchOptions& opt = {});
VariationReport v_division(const OperatorFunction& f, const Division& d, VMode mode = VMode::automatic,
                           const SearchOptions& opt = {});

std::pair<double, double> v_bounds(const std::vector<Operator>& incs);
std::pair<double, double> v_bounds(const OperatorFunction& f, const Division& d);

// |sum_j incs[j] x[j]|
double replay(const std::vector<Operator>& incs, const std::vector<NormedVector>& x);

// Breakpoints of f inside (c,d), the endpoints, and one interior point per
// constancy interval.
Division reduced_division(const OpStep& f, double c, double d);

VariationReport semivariation(const OperatorFunction& f, double c, double d, const SearchOptions& opt = {});
VariationReport semivariation(const OperatorFunction& f, const SearchOptions& opt = {});

VariationReport variation(const OperatorFunction& f, double c, double d,
                          const std::optional<Division>& d_hint = std::nullopt, const SearchOptions& opt = {});

enum class HalfOpen { left_open_at_d, right_open_at_c };

// t_i = c + (d-c)/i (right-open) or d - (d-c)/i (left-open), i = 1..count.
std::vector<double> default_schedule(double c, double d, HalfOpen side, int count);
std::vector<double> sv_halfopen(const OperatorFunction& f, double c, double d, HalfOpen side,
                                const std::vector<double>& schedule, const SearchOptions& opt = {});
// The limit itself: exact on steps and ex1-harmonic, a lower bound otherwise.
VariationReport sv_halfopen_limit(const OperatorFunction& f, double c, double d, HalfOpen side,
                                  const SearchOptions& opt = {});

enum class FunctionalSampler { coordinate, random };

VariationReport sv_via_functionals(const OperatorFunction& f, const Division& d, FunctionalSampler sampler,
                                   int samples = 0, const SearchOptions& opt = {});

VariationReport v_star(const OperatorFunction& f, const Division& d, const std::vector<Operator>& contractions);
VariationReport v_star_construct(const OperatorFunction& f, const Division& d, const SearchOptions& opt = {});

VariationReport bv_criterion(const OperatorFunction& f, const Division& d, const SearchOptions& opt = {});
VariationReport sv_norm(const OperatorFunction& f, const SearchOptions& opt = {});

}  // namespace semivar
