#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "semivar/error.hpp"
#include "semivar/operator.hpp"

namespace semivar {

enum class Side { at, left, right };

class Division {
 public:
  Division() = default;
  explicit Division(std::vector<double> pts);

  double a() const { return pts_.front(); }
  double b() const { return pts_.back(); }
  std::size_t nu() const { return pts_.size() - 1; }
  const std::vector<double>& points() const { return pts_; }
  double operator[](std::size_t j) const { return pts_[j]; }

 private:
  std::vector<double> pts_{0.0, 1.0};
};

Division division_union(const Division& d1, const Division& d2);

// Piecewise data on [breaks.front(), breaks.back()]: open[j] holds on
// (breaks[j], breaks[j+1]) and point[j] at breaks[j].
template <class V>
struct Step {
  std::vector<double> breaks;
  std::vector<V> open;
  std::vector<V> point;

  double a() const { return breaks.front(); }
  double b() const { return breaks.back(); }
  std::size_t pieces() const { return open.size(); }

  void validate() const {
    if (breaks.size() < 2) fail(ErrorCode::argument, "step function needs at least two breakpoints");
    for (std::size_t j = 1; j < breaks.size(); ++j)
      if (!(breaks[j - 1] < breaks[j])) fail(ErrorCode::argument, "breakpoints must be strictly increasing");
    if (open.size() != breaks.size() - 1 || point.size() != breaks.size())
      fail(ErrorCode::argument, "step function value counts do not match breakpoints");
  }

  const V& eval(double t, Side side = Side::at) const {
    if (!(t >= a() && t <= b())) fail(ErrorCode::argument, "evaluation point outside the interval");
    auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
    std::size_t j = std::size_t(it - breaks.begin());
    if (it != breaks.end() && *it == t) {
      switch (side) {
        case Side::at: return point[j];
        case Side::left: return j == 0 ? point[0] : open[j - 1];
        case Side::right: return j + 1 == breaks.size() ? point[j] : open[j];
      }
    }
    return open[j - 1];
  }
};

using OpStep = Step<Operator>;
using VectorStep = Step<NormedVector>;

// Combine two step functions on the same interval over the union of their
// breakpoints.
template <class A, class B, class Fn>
auto combine(const Step<A>& f, const Step<B>& g, Fn fn) -> Step<decltype(fn(f.point[0], g.point[0]))> {
  using R = decltype(fn(f.point[0], g.point[0]));
  if (f.a() != g.a() || f.b() != g.b()) fail(ErrorCode::argument, "step functions live on different intervals");
  Step<R> out;
  std::set_union(f.breaks.begin(), f.breaks.end(), g.breaks.begin(), g.breaks.end(), std::back_inserter(out.breaks));
  for (std::size_t j = 0; j < out.breaks.size(); ++j) {
    double t = out.breaks[j];
    out.point.push_back(fn(f.eval(t), g.eval(t)));
    if (j + 1 < out.breaks.size()) {
      double m = 0.5 * (t + out.breaks[j + 1]);
      out.open.push_back(fn(f.eval(m), g.eval(m)));
    }
  }
  return out;
}

template <class V, class Fn>
auto map_values(const Step<V>& f, Fn fn) -> Step<decltype(fn(f.point[0]))> {
  Step<decltype(fn(f.point[0]))> out;
  out.breaks = f.breaks;
  for (const auto& v : f.open) out.open.push_back(fn(v));
  for (const auto& v : f.point) out.point.push_back(fn(v));
  return out;
}

enum class FamilyKind { ex1_harmonic, linf_shift, c0_shift };

const char* family_name(FamilyKind k);

// The closed-form example families. ex1-harmonic and linf-shift live on
// [0,1]; c0-shift on [a,b] with t_k = a + (b-a)/k.
struct Family {
  FamilyKind kind = FamilyKind::ex1_harmonic;
  double a = 0.0, b = 1.0;
  Index truncation = 1000;

  SpaceSpec domain() const;
  SpaceSpec codomain() const;
  // Level n (resp. k) of the constancy interval containing t > a.
  Index level(double t) const;
  // Right end t_n of the constancy interval (t_{n+1}, t_n] of level n.
  double level_point(Index n) const;
  // True when t is the right end of its constancy interval.
  bool at_level_point(double t) const;
  Operator value_at_level(Index n) const;
  Operator eval(double t, Side side = Side::at) const;
  // F(t) - F(s), exact and tail-aware.
  Operator increment(double s, double t) const;
  // Level points inside (c,d), right to left, at most max_count of them.
  std::vector<double> jump_points(double c, double d, std::size_t max_count) const;
  // Certified bound on the semivariation over the whole interval, or a
  // negative value if none is available.
  double sv_upper_bound() const;
};

class OperatorFunction {
 public:
  OperatorFunction(OpStep s);
  OperatorFunction(Family f) : rep_(f) {}

  bool is_step() const { return rep_.index() == 0; }
  const OpStep& step() const { return std::get<OpStep>(rep_); }
  const Family& family() const { return std::get<Family>(rep_); }

  double a() const;
  double b() const;
  SpaceSpec domain() const;
  SpaceSpec codomain() const;
  Operator eval(double t, Side side = Side::at) const;
  Operator increment(double s, double t) const;
  std::vector<Operator> increments(const Division& d) const;

 private:
  std::variant<OpStep, Family> rep_;
};

Operator step_eval(const OperatorFunction& f, double t, Side side = Side::at);
std::vector<Operator> family_increments(const Family& fam, const Division& d);

// Pointwise operations on operator-valued steps.
OpStep step_add(const OpStep& f, const OpStep& g);
OpStep step_scale(const OpStep& f, double s);
OpStep step_compose(const OpStep& f, const OpStep& g);
double step_sup_norm(const OpStep& f);
double step_sup_norm(const VectorStep& g);

class Gauge {
 public:
  enum class Kind { constant, piecewise, forced_tag, callable };

  static Gauge constant(double delta);
  // values[j] on (breaks[j], breaks[j+1]); the smaller neighbour at breaks.
  static Gauge piecewise(std::vector<double> breaks, std::vector<double> values);
  // delta at the listed points, max(dist(t, points)/2, floor) elsewhere.
  static Gauge forced_tag(std::vector<double> points, double delta, double floor = 0.0);
  static Gauge callable(std::function<double(double)> fn);

  Kind kind() const { return kind_; }
  // Points a forced-tag gauge pins as tags (empty for other kinds).
  const std::vector<double>& forced_points() const;
  double operator()(double t) const;

 private:
  Kind kind_ = Kind::constant;
  double delta_ = 1.0, floor_ = 0.0;
  std::vector<double> pts_, vals_;
  std::function<double(double)> fn_;
};

struct TaggedInterval {
  double lo, hi, tag;
};
using TaggedPartition = std::vector<TaggedInterval>;

bool is_delta_fine(const TaggedPartition& p, const Gauge& delta);
bool covers(const TaggedPartition& p, double a, double b);

}  // namespace semivar
