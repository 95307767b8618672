#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semivar/stieltjes.hpp"

namespace semivar {

struct TraceRow {
  double n = 0, value = 0, target = 0, gap = 0;
};

struct ConvergenceTrace {
  std::string name;
  std::vector<TraceRow> rows;
};

struct HellyReport {
  ConvergenceTrace trace;
  double bound = 0.0;     // existence bound of (G, g)
  double sv_bound = 0.0;  // SV(F) + SV(G)
  double sv_limit = 0.0;  // SV(F)
  double worst_excess = 0.0;  // max_n gap_n - bound/n
  bool monotone = true;
  bool hypothesis_ok = true;  // SV(F_n) <= sv_bound at n = 1, 2, 4, ...
  bool pass = false;
};

// F_n = F + G/n against F for n = 1..n_max.
HellyReport helly_check(const OpStep& F, const OpStep& G, const VectorStep& g, IntegralKind kind, int n_max,
                        const SearchOptions& opt = {});

enum class CharSearch { witness_replay, vertex_enumeration };

struct CharacterizationReport {
  double value = 0.0;       // |F(b)g(b) - int F dg| for the constructed g
  double sv = 0.0;
  double vertex_max = -1.0; // sup over sign vertices, when enumerated
  bool exact = false;
  std::vector<double> division;
  std::vector<NormedVector> g_values;  // x_j on (alpha_{j-1}, alpha_j]
};

// Left-continuous step vanishing at a with value x_j on (alpha_{j-1}, alpha_j].
VectorStep left_continuous_step(const std::vector<double>& division, const std::vector<NormedVector>& x);
double characterization_value(const OperatorFunction& F, const VectorStep& g);
CharacterizationReport sv_step_characterization(const OperatorFunction& F, CharSearch search,
                                                const SearchOptions& opt = {});

struct LimitsReport {
  bool limits_exist = false;
  std::vector<double> deltas, left_tails, right_tails;
  double left_oscillation = 0.0, right_oscillation = 0.0;
  double oscillation = 0.0;  // lower bound when limits fail
};

LimitsReport regulated_limits_check(const OperatorFunction& F, double t, const std::vector<double>& deltas,
                                    const NormedVector& probe, const SearchOptions& opt = {});

enum class SeriesMode { absolute, sign_sample, permutation_sample, weak_absolute };

struct SeriesReport {
  ConvergenceTrace trace;
  double max_value = 0.0;
  double spread = 0.0;
  std::optional<std::size_t> first_exceeding;  // 1-based K with value > bound
  bool divergent_trend = false;
};

// y_k = e_k / k in l2, k = 1..K.
std::vector<NormedVector> dr_sequence(std::size_t K);

SeriesReport series_check(const std::vector<NormedVector>& seq, SeriesMode mode, std::size_t samples,
                          std::uint64_t seed, double bound, const std::vector<Functional>& functionals = {});

struct SlackReport {
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool exact = false;
};

// SV_a^b <= SV_a^c + SV_c^b
SlackReport superadditivity_check(const OperatorFunction& F, double c, const SearchOptions& opt = {});
// SV(FG) <= |F|_inf var(G) + |G|_inf SV(F)
SlackReport multiplier_check(const OpStep& F, const OpStep& G, const SearchOptions& opt = {});

}  // namespace semivar
