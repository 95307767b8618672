#include "semivar/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace semivar {

namespace {

NormedVector integral_of(IntegralKind kind, const OperatorFunction& F, const VectorStep& g) {
  switch (kind) {
    case IntegralKind::F_dg: return ks_F_dg_exact(F, g);
    case IntegralKind::dF_g: return ks_dF_g_exact(F, g);
    default: return product_integral(F.step(), g);
  }
}

// Nonincreasing (up to 1e-12) and at least halved over the schedule.
bool tends_to_zero(const std::vector<double>& v) {
  if (v.empty()) return true;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + 1e-12) return false;
  return v.back() <= std::max(1e-12, v.front() / 2.0);
}

double max_pairwise(const std::vector<NormedVector>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) m = std::max(m, vec_norm(v[i] - v[j]));
  return m;
}

// Right-hand sides use upper bounds when the value is only a search result.
double certified(const VariationReport& r) { return r.exact ? r.value : r.upper; }

}  // namespace

HellyReport helly_check(const OpStep& F, const OpStep& G, const VectorStep& g, IntegralKind kind, int n_max,
                        const SearchOptions& opt) {
  if (n_max < 3) fail(ErrorCode::argument, "helly_check needs n_max >= 3");
  HellyReport r;
  r.trace.name = std::string("helly-") + integral_name(kind);
  const OperatorFunction f(F), gg(G);
  const NormedVector I = integral_of(kind, f, g);
  const double target = vec_norm(I);
  r.bound = existence_bound(gg, g, kind, opt);
  r.sv_limit = semivariation(f, opt).value;
  r.sv_bound = semivariation(f, opt).upper + semivariation(gg, opt).upper;
  r.worst_excess = -std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    OperatorFunction fn(step_add(F, step_scale(G, 1.0 / n)));
    if (std::has_single_bit(unsigned(n)) && semivariation(fn, opt).value > r.sv_bound + 1e-12)
      r.hypothesis_ok = false;
    NormedVector In = integral_of(kind, fn, g);
    double gap = vec_norm(In - I);
    r.trace.rows.push_back({double(n), vec_norm(In), target, gap});
    r.worst_excess = std::max(r.worst_excess, gap - r.bound / n);
    if (gap > prev + 1e-12) r.monotone = false;
    prev = gap;
  }
  r.pass = r.monotone && r.hypothesis_ok && r.worst_excess <= 1e-12 && r.sv_limit <= r.sv_bound + 1e-12;
  return r;
}

VectorStep left_continuous_step(const std::vector<double>& division, const std::vector<NormedVector>& x) {
  if (division.size() < 2 || x.size() + 1 != division.size())
    fail(ErrorCode::argument, "need one value per subinterval");
  VectorStep g;
  g.breaks = division;
  g.open = x;
  g.point.push_back(NormedVector::zero(x[0].space()));
  for (const auto& v : x) g.point.push_back(v);
  g.validate();
  return g;
}

double characterization_value(const OperatorFunction& F, const VectorStep& g) {
  return vec_norm(F.eval(F.b()).apply(g.eval(g.b())) - ks_F_dg_exact(F, g));
}

CharacterizationReport sv_step_characterization(const OperatorFunction& F, CharSearch search,
                                                const SearchOptions& opt) {
  CharacterizationReport r;
  VariationReport sv = semivariation(F, opt);
  r.sv = sv.value;
  r.division = sv.division;
  r.exact = sv.exact;
  if (sv.witness.empty()) {
    // Constant on the interval: g = 0 is optimal.
    r.value = 0.0;
    r.exact = sv.exact;
    return r;
  }
  r.g_values = sv.witness;
  r.value = characterization_value(F, left_continuous_step(sv.division, sv.witness));
  if (search == CharSearch::vertex_enumeration) {
    if (!F.domain().is_scalar()) fail(ErrorCode::unsupported, "vertex enumeration needs a scalar domain");
    const std::size_t nu = sv.witness.size();
    if (nu > 20) fail(ErrorCode::unsupported, "vertex enumeration limited to 20 subintervals");
    std::vector<NormedVector> x(nu, NormedVector::scalar(1.0));
    double best = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << nu); ++m) {
      for (std::size_t j = 0; j < nu; ++j) x[j] = NormedVector::scalar((m >> j) & 1 ? -1.0 : 1.0);
      best = std::max(best, characterization_value(F, left_continuous_step(sv.division, x)));
    }
    r.vertex_max = best;
  }
  return r;
}

LimitsReport regulated_limits_check(const OperatorFunction& F, double t, const std::vector<double>& deltas,
                                    const NormedVector& probe, const SearchOptions& opt) {
  if (deltas.empty()) fail(ErrorCode::argument, "empty schedule");
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
      fail(ErrorCode::argument, "schedule must decrease strictly to 0");
  LimitsReport r;
  r.deltas = deltas;
  std::vector<NormedVector> lv, rv;
  for (double d : deltas) {
    if (t > F.a()) {
      double lo = std::max(F.a(), t - d);
      r.left_tails.push_back(sv_halfopen_limit(F, lo, t, HalfOpen::left_open_at_d, opt).value);
      lv.push_back(F.eval(lo).apply(probe));
    }
    if (t < F.b()) {
      double hi = std::min(F.b(), t + d);
      r.right_tails.push_back(sv_halfopen_limit(F, t, hi, HalfOpen::right_open_at_c, opt).value);
      rv.push_back(F.eval(hi).apply(probe));
    }
  }
  r.left_oscillation = max_pairwise(lv);
  r.right_oscillation = max_pairwise(rv);
  r.limits_exist = tends_to_zero(r.left_tails) && tends_to_zero(r.right_tails);
  r.oscillation = r.limits_exist ? 0.0 : std::max(r.left_oscillation, r.right_oscillation);
  return r;
}

std::vector<NormedVector> dr_sequence(std::size_t K) {
  std::vector<NormedVector> y;
  const SpaceSpec sp = SpaceSpec::sequence(Norm::l2);
  for (std::size_t k = 1; k <= K; ++k) y.push_back(NormedVector::basis(sp, Index(k), 1.0 / double(k)));
  return y;
}

SeriesReport series_check(const std::vector<NormedVector>& seq, SeriesMode mode, std::size_t samples,
                          std::uint64_t seed, double bound, const std::vector<Functional>& functionals) {
  SeriesReport r;
  if (seq.empty()) return r;
  const SpaceSpec sp = seq[0].space();
  for (const auto& v : seq)
    if (!(v.space() == sp)) fail(ErrorCode::argument, "series terms live in different spaces");
  auto push = [&](double n, double v) {
    r.trace.rows.push_back({n, v, bound, std::abs(v - bound)});
    r.max_value = std::max(r.max_value, v);
  };
  std::mt19937_64 rng(seed);

  switch (mode) {
    case SeriesMode::absolute: {
      r.trace.name = "absolute";
      double s = 0.0;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        s += vec_norm(seq[k]);
        push(double(k + 1), s);
        if (!r.first_exceeding && s > bound) r.first_exceeding = k + 1;
      }
      r.divergent_trend = r.first_exceeding.has_value();
      break;
    }
    case SeriesMode::sign_sample: {
      r.trace.name = "sign-sample";
      const bool l2 = sp.is_scalar() || sp.norm == Norm::l2;
      std::vector<double> sq;
      for (const auto& v : seq) {
        if (v.tail()) fail(ErrorCode::unsupported, "sign sampling needs finitely supported terms");
        sq.push_back(l2 ? inner(v, v) : 0.0);
      }
      std::bernoulli_distribution coin;
      for (std::size_t s = 0; s < samples; ++s) {
        Coords y;
        long double q = 0.0L;
        double best = 0.0;
        for (std::size_t k = 0; k < seq.size(); ++k) {
          const double lam = coin(rng) ? 1.0 : -1.0;
          long double cross = 0.0L;
          for (auto& [i, v] : seq[k].coords()) {
            double& yi = y[i];
            cross += (long double)yi * v;
            yi += lam * v;
          }
          double norm;
          if (l2) {
            q += 2.0L * lam * cross + sq[k];
            norm = std::sqrt(double(std::max(q, 0.0L)));
          } else {
            norm = vec_norm(NormedVector(sp, y));
          }
          best = std::max(best, norm);
        }
        push(double(s + 1), best);
      }
      break;
    }
    case SeriesMode::permutation_sample: {
      r.trace.name = "permutation-sample";
      std::vector<std::size_t> order(seq.size());
      std::iota(order.begin(), order.end(), 0);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t s = 0; s < samples; ++s) {
        std::shuffle(order.begin(), order.end(), rng);
        Coords y;
        for (std::size_t k : order) {
          if (seq[k].tail()) fail(ErrorCode::unsupported, "permutation sampling needs finitely supported terms");
          for (auto& [i, v] : seq[k].coords()) y[i] += v;
        }
        double n = vec_norm(NormedVector(sp, std::move(y)));
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        push(double(s + 1), n);
      }
      r.spread = samples ? hi - lo : 0.0;
      break;
    }
    case SeriesMode::weak_absolute: {
      r.trace.name = "weak-absolute";
      for (std::size_t i = 0; i < functionals.size(); ++i) {
        double s = 0.0;
        for (const auto& v : seq) s += std::abs(dual_pair(functionals[i], v));
        push(double(i + 1), s);
        if (!r.first_exceeding && s > bound) r.first_exceeding = i + 1;
      }
      r.divergent_trend = r.first_exceeding.has_value();
      break;
    }
  }
  return r;
}

SlackReport superadditivity_check(const OperatorFunction& F, double c, const SearchOptions& opt) {
  if (!(c > F.a() && c < F.b())) fail(ErrorCode::argument, "split point must be interior");
  VariationReport whole = semivariation(F, opt), left = semivariation(F, F.a(), c, opt),
                  right = semivariation(F, c, F.b(), opt);
  SlackReport r;
  r.lhs = whole.value;
  r.rhs = certified(left) + certified(right);
  r.slack = r.rhs - r.lhs;
  r.exact = whole.exact && left.exact && right.exact;
  return r;
}

SlackReport multiplier_check(const OpStep& F, const OpStep& G, const SearchOptions& opt) {
  OperatorFunction fg(step_compose(F, G)), f(F), g(G);
  VariationReport lhs = semivariation(fg, opt), svf = semivariation(f, opt);
  VariationReport varg = variation(g, G.a(), G.b(), std::nullopt, opt);
  SlackReport r;
  r.lhs = lhs.value;
  r.rhs = step_sup_norm(F) * certified(varg) + step_sup_norm(G) * certified(svf);
  r.slack = r.rhs - r.lhs;
  r.exact = lhs.exact && svf.exact && varg.exact;
  return r;
}

}  // namespace semivar
