#include <cmath>
#include <limits>

#include "semivar/opfunc.hpp"

namespace semivar {

Division::Division(std::vector<double> pts) : pts_(std::move(pts)) {
  if (pts_.size() < 2) fail(ErrorCode::argument, "a division needs at least two points");
  for (std::size_t j = 1; j < pts_.size(); ++j)
    if (!(pts_[j - 1] < pts_[j])) fail(ErrorCode::argument, "division points must be strictly increasing");
}

Division division_union(const Division& d1, const Division& d2) {
  if (d1.a() != d2.a() || d1.b() != d2.b()) fail(ErrorCode::argument, "divisions of different intervals");
  std::vector<double> u;
  std::set_union(d1.points().begin(), d1.points().end(), d2.points().begin(), d2.points().end(),
                 std::back_inserter(u));
  return Division(std::move(u));
}

OperatorFunction::OperatorFunction(OpStep s) : rep_(std::move(s)) {
  const OpStep& f = step();
  f.validate();
  const SpaceSpec d = f.point[0].domain(), c = f.point[0].codomain();
  auto check = [&](const Operator& A) {
    if (!(A.domain() == d) || !(A.codomain() == c))
      fail(ErrorCode::argument, "step values must share domain and codomain");
  };
  for (const auto& A : f.open) check(A);
  for (const auto& A : f.point) check(A);
}

double OperatorFunction::a() const { return is_step() ? step().a() : family().a; }
double OperatorFunction::b() const { return is_step() ? step().b() : family().b; }

SpaceSpec OperatorFunction::domain() const { return is_step() ? step().point[0].domain() : family().domain(); }
SpaceSpec OperatorFunction::codomain() const {
  return is_step() ? step().point[0].codomain() : family().codomain();
}

Operator OperatorFunction::eval(double t, Side side) const {
  return is_step() ? step().eval(t, side) : family().eval(t, side);
}

Operator OperatorFunction::increment(double s, double t) const {
  if (!is_step()) return family().increment(s, t);
  return step().eval(t) - step().eval(s);
}

std::vector<Operator> OperatorFunction::increments(const Division& d) const {
  if (d.a() < a() || d.b() > b()) fail(ErrorCode::argument, "division leaves the function's interval");
  if (!is_step()) return family_increments(family(), d);
  std::vector<Operator> out;
  out.reserve(d.nu());
  for (std::size_t j = 1; j <= d.nu(); ++j) out.push_back(increment(d[j - 1], d[j]));
  return out;
}

Operator step_eval(const OperatorFunction& f, double t, Side side) { return f.eval(t, side); }

std::vector<Operator> family_increments(const Family& fam, const Division& d) {
  if (d.a() < fam.a || d.b() > fam.b) fail(ErrorCode::argument, "division leaves the family's interval");
  std::vector<Operator> out;
  out.reserve(d.nu());
  for (std::size_t j = 1; j <= d.nu(); ++j) out.push_back(fam.increment(d[j - 1], d[j]));
  return out;
}

OpStep step_add(const OpStep& f, const OpStep& g) {
  return combine(f, g, [](const Operator& x, const Operator& y) { return x + y; });
}

OpStep step_scale(const OpStep& f, double s) {
  return map_values(f, [s](const Operator& x) { return x * s; });
}

OpStep step_compose(const OpStep& f, const OpStep& g) {
  return combine(f, g, [](const Operator& x, const Operator& y) { return compose(x, y); });
}

double step_sup_norm(const OpStep& f) {
  double m = 0.0;
  for (const auto& A : f.open) m = std::max(m, op_norm(A));
  for (const auto& A : f.point) m = std::max(m, op_norm(A));
  return m;
}

double step_sup_norm(const VectorStep& g) {
  double m = 0.0;
  for (const auto& v : g.open) m = std::max(m, vec_norm(v));
  for (const auto& v : g.point) m = std::max(m, vec_norm(v));
  return m;
}

Gauge Gauge::constant(double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::argument, "gauge must be positive");
  Gauge g;
  g.kind_ = Kind::constant;
  g.delta_ = delta;
  return g;
}

Gauge Gauge::piecewise(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.size() < 2 || values.size() + 1 != breaks.size())
    fail(ErrorCode::argument, "piecewise gauge needs one value per segment");
  for (double v : values)
    if (!(v > 0.0)) fail(ErrorCode::argument, "gauge must be positive");
  Gauge g;
  g.kind_ = Kind::piecewise;
  g.pts_ = std::move(breaks);
  g.vals_ = std::move(values);
  return g;
}

Gauge Gauge::forced_tag(std::vector<double> points, double delta, double floor) {
  if (!(delta > 0.0) || floor < 0.0) fail(ErrorCode::argument, "gauge must be positive");
  std::sort(points.begin(), points.end());
  Gauge g;
  g.kind_ = Kind::forced_tag;
  g.pts_ = std::move(points);
  g.delta_ = delta;
  g.floor_ = floor;
  return g;
}

Gauge Gauge::callable(std::function<double(double)> fn) {
  Gauge g;
  g.kind_ = Kind::callable;
  g.fn_ = std::move(fn);
  return g;
}

const std::vector<double>& Gauge::forced_points() const {
  static const std::vector<double> none;
  return kind_ == Kind::forced_tag ? pts_ : none;
}

double Gauge::operator()(double t) const {
  switch (kind_) {
    case Kind::constant: return delta_;
    case Kind::piecewise: {
      auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
      std::size_t j = std::size_t(it - pts_.begin());
      if (it != pts_.end() && *it == t) {
        double l = j > 0 ? vals_[j - 1] : vals_.front();
        double r = j < vals_.size() ? vals_[j] : vals_.back();
        return std::min(l, r);
      }
      if (j == 0) return vals_.front();
      if (j > vals_.size()) return vals_.back();
      return vals_[j - 1];
    }
    case Kind::forced_tag: {
      if (pts_.empty()) return std::max(floor_, delta_);
      auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
      if (it != pts_.end() && *it == t) return delta_;
      double dist = std::numeric_limits<double>::infinity();
      if (it != pts_.end()) dist = *it - t;
      if (it != pts_.begin()) dist = std::min(dist, t - *(it - 1));
      return std::max(0.5 * dist, floor_);
    }
    case Kind::callable: {
      double v = fn_(t);
      if (!(v > 0.0)) fail(ErrorCode::argument, "gauge evaluated to a non-positive value");
      return v;
    }
  }
  return delta_;
}

bool is_delta_fine(const TaggedPartition& p, const Gauge& delta) {
  for (const auto& s : p) {
    if (!(s.lo <= s.tag && s.tag <= s.hi)) return false;
    double d = delta(s.tag);
    if (!(s.lo > s.tag - d && s.hi < s.tag + d)) return false;
  }
  return true;
}

bool covers(const TaggedPartition& p, double a, double b) {
  if (p.empty() || p.front().lo != a || p.back().hi != b) return false;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p[j].lo < p[j].hi)) return false;
    if (j > 0 && p[j].lo != p[j - 1].hi) return false;
  }
  return true;
}

}  // namespace semivar
