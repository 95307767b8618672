#include "semivar/normed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "semivar/error.hpp"

namespace semivar {

SpaceSpec SpaceSpec::euclidean(int dim, Norm norm) {
  if (dim < 1) fail(ErrorCode::argument, "euclidean space needs dim >= 1");
  return SpaceSpec{SpaceKind::euclidean, dim, norm};
}

SpaceSpec SpaceSpec::sequence(Norm norm) {
  if (norm == Norm::l1) fail(ErrorCode::argument, "sequence spaces carry l2 or linf only");
  return SpaceSpec{SpaceKind::sequence, 0, norm};
}

bool SpaceSpec::operator==(const SpaceSpec& o) const {
  if (kind != o.kind) return false;
  if (kind == SpaceKind::sequence) return norm == o.norm;
  // On R every norm is |x|.
  return dim == o.dim && (dim == 1 || norm == o.norm);
}

Norm dual_norm_kind(Norm n) {
  switch (n) {
    case Norm::l1: return Norm::linf;
    case Norm::linf: return Norm::l1;
    default: return Norm::l2;
  }
}

const char* norm_name(Norm n) {
  switch (n) {
    case Norm::l1: return "l1";
    case Norm::linf: return "linf";
    default: return "l2";
  }
}

namespace {

void check_index(const SpaceSpec& s, Index k) {
  if (k < 1) fail(ErrorCode::argument, "coordinate indices start at 1, got " + std::to_string(k));
  if (s.kind == SpaceKind::euclidean && k > s.dim)
    fail(ErrorCode::argument, "coordinate " + std::to_string(k) + " outside dimension " + std::to_string(s.dim));
}

void check_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (!(a == b)) fail(ErrorCode::argument, std::string("space mismatch in ") + what);
}

// Neumaier compensated accumulator.
struct Compensated {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// Shift tail start from t.start to new_start by spelling out the coordinates.
void advance_tail(Coords& coords, Tail& t, Index new_start) {
  if (new_start <= t.start) return;
  if (new_start - t.start > kMaxMaterialized)
    fail(ErrorCode::unsupported, "tail shift exceeds the materialization cap");
  for (Index k = t.start + 1; k <= new_start; ++k) coords[k] += t.scale / double(k);
  t.start = new_start;
}

}  // namespace

NormedVector::NormedVector(SpaceSpec space, Coords coords, std::optional<Tail> tail)
    : space_(space), coords_(std::move(coords)), tail_(tail) {
  for (auto& [k, v] : coords_) {
    check_index(space_, k);
    if (!std::isfinite(v)) fail(ErrorCode::argument, "non-finite coordinate");
  }
  if (tail_) {
    if (space_.kind != SpaceKind::sequence || space_.norm != Norm::l2)
      fail(ErrorCode::unsupported, "unsupported representation: harmonic tail requires sequence l2");
    if (tail_->start < 0) fail(ErrorCode::argument, "tail start must be nonnegative");
  }
  normalize();
}

NormedVector NormedVector::basis(SpaceSpec space, Index k, double value) {
  return NormedVector(space, Coords{{k, value}});
}

void NormedVector::normalize() {
  if (tail_ && tail_->scale == 0.0) tail_.reset();
  if (tail_ && !coords_.empty() && coords_.rbegin()->first > tail_->start)
    advance_tail(coords_, *tail_, coords_.rbegin()->first);
  std::erase_if(coords_, [](const auto& kv) { return kv.second == 0.0; });
}

double NormedVector::coord(Index k) const {
  double v = 0.0;
  if (auto it = coords_.find(k); it != coords_.end()) v = it->second;
  if (tail_ && k > tail_->start) v += tail_->scale / double(k);
  return v;
}

NormedVector NormedVector::operator+(const NormedVector& o) const {
  check_space(space_, o.space_, "vector addition");
  Coords c = coords_;
  std::optional<Tail> t = tail_;
  Coords oc = o.coords_;
  std::optional<Tail> ot = o.tail_;
  if (t && ot) {
    Index s = std::max(t->start, ot->start);
    advance_tail(c, *t, s);
    advance_tail(oc, *ot, s);
    t->scale += ot->scale;
  } else if (ot) {
    t = ot;
  }
  for (auto& [k, v] : oc) c[k] += v;
  return NormedVector(space_, std::move(c), t);
}

NormedVector NormedVector::operator-(const NormedVector& o) const { return *this + o * -1.0; }

NormedVector NormedVector::operator*(double s) const {
  Coords c = coords_;
  for (auto& [k, v] : c) v *= s;
  std::optional<Tail> t = tail_;
  if (t) t->scale *= s;
  return NormedVector(space_, std::move(c), t);
}

double vec_norm(const NormedVector& v) {
  const auto& c = v.coords();
  switch (v.space().norm) {
    case Norm::l1: {
      if (v.tail()) fail(ErrorCode::unsupported, "unsupported representation: tail in l1");
      Compensated s;
      for (auto& [k, x] : c) s.add(std::abs(x));
      return s.value();
    }
    case Norm::linf: {
      if (v.tail()) fail(ErrorCode::unsupported, "unsupported representation: tail in linf");
      double m = 0.0;
      for (auto& [k, x] : c) m = std::max(m, std::abs(x));
      return m;
    }
    default: {
      Compensated s;
      for (auto& [k, x] : c) s.add(x * x);
      if (v.tail()) s.add(v.tail()->scale * v.tail()->scale * tail_remainder_zeta2(v.tail()->start));
      return std::sqrt(std::max(0.0, s.value()));
    }
  }
}

double inner(const NormedVector& u, const NormedVector& v) {
  check_space(u.space(), v.space(), "inner product");
  if (u.space().norm != Norm::l2 && !u.space().is_scalar())
    fail(ErrorCode::unsupported, "inner product needs an l2 space");
  Compensated s;
  const auto& a = u.coords();
  const auto& b = v.coords();
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      s.add(ia->second * ib->second);
      ++ia;
      ++ib;
    }
  }
  auto cross = [&s](const Coords& c, const std::optional<Tail>& t) {
    if (!t) return;
    for (auto it = c.upper_bound(t->start); it != c.end(); ++it) s.add(it->second * t->scale / double(it->first));
  };
  cross(a, v.tail());
  cross(b, u.tail());
  if (u.tail() && v.tail())
    s.add(u.tail()->scale * v.tail()->scale * tail_remainder_zeta2(std::max(u.tail()->start, v.tail()->start)));
  return s.value();
}

double tail_remainder_zeta2(Index K) {
  if (K < 0) fail(ErrorCode::argument, "tail_remainder_zeta2 needs K >= 0");
  constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  if (K <= 1000) {
    Compensated s;
    for (Index k = K; k >= 1; --k) s.add(1.0 / (double(k) * double(k)));
    return zeta2 - s.value();
  }
  // Trigamma asymptotics at x = K + 1; relative truncation error below x^-10.
  double x = double(K) + 1.0;
  double x2 = 1.0 / (x * x);
  double odd = x2 * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)));
  return 1.0 / x + 0.5 * x2 + odd / x;
}

double harmonic_number(Index K) {
  if (K < 0) fail(ErrorCode::argument, "harmonic_number needs K >= 0");
  Compensated s;
  for (Index k = K; k >= 1; --k) s.add(1.0 / double(k));
  return s.value();
}

Functional::Functional(SpaceSpec space, Coords coords) : space_(space), coords_(std::move(coords)) {
  for (auto& [k, v] : coords_) {
    check_index(space_, k);
    if (!std::isfinite(v)) fail(ErrorCode::argument, "non-finite functional coordinate");
  }
  std::erase_if(coords_, [](const auto& kv) { return kv.second == 0.0; });
}

Functional Functional::coordinate(SpaceSpec space, Index k, double value) {
  return Functional(space, Coords{{k, value}});
}

Functional Functional::operator+(const Functional& o) const {
  check_space(space_, o.space_, "functional addition");
  Coords c = coords_;
  for (auto& [k, v] : o.coords_) c[k] += v;
  return Functional(space_, std::move(c));
}

Functional Functional::operator*(double s) const {
  Coords c = coords_;
  for (auto& [k, v] : c) v *= s;
  return Functional(space_, std::move(c));
}

double dual_norm(const Functional& f) {
  Norm dn = f.space().is_scalar() ? Norm::l2 : dual_norm_kind(f.space().norm);
  SpaceSpec ds = f.space();
  ds.norm = dn;
  return vec_norm(NormedVector(ds, f.coords()));
}

double dual_pair(const Functional& f, const NormedVector& v) {
  check_space(f.space(), v.space(), "dual pairing");
  Compensated s;
  for (auto& [k, fk] : f.coords()) s.add(fk * v.coord(k));
  return s.value();
}

NormedVector norming_vector(const Functional& f) {
  const SpaceSpec& sp = f.space();
  if (f.is_zero()) return NormedVector::basis(sp, 1);
  Coords c;
  double n = dual_norm(f);
  switch (sp.is_scalar() ? Norm::l2 : sp.norm) {
    case Norm::l2:
      for (auto& [k, v] : f.coords()) c[k] = v / n;
      break;
    case Norm::linf:
      for (auto& [k, v] : f.coords()) c[k] = v > 0 ? 1.0 : -1.0;
      break;
    case Norm::l1: {
      auto best = f.coords().begin();
      for (auto it = f.coords().begin(); it != f.coords().end(); ++it)
        if (std::abs(it->second) > std::abs(best->second)) best = it;
      c[best->first] = best->second > 0 ? 1.0 : -1.0;
      break;
    }
  }
  return NormedVector(sp, std::move(c));
}

Functional norming_functional(const NormedVector& v, Index window) {
  const SpaceSpec& sp = v.space();
  if (v.is_zero()) return Functional(sp, {});
  Coords c = v.coords();
  if (v.tail()) {
    const Tail& t = *v.tail();
    for (Index k = t.start + 1; k <= t.start + window; ++k) c[k] += t.scale / double(k);
  }
  std::erase_if(c, [](const auto& kv) { return kv.second == 0.0; });
  if (c.empty()) return Functional(sp, {});
  switch (sp.is_scalar() ? Norm::l2 : sp.norm) {
    case Norm::l2: {
      double n = vec_norm(NormedVector(sp, c));
      for (auto& [k, x] : c) x /= n;
      break;
    }
    case Norm::l1:
      for (auto& [k, x] : c) x = x > 0 ? 1.0 : -1.0;
      break;
    case Norm::linf: {
      auto best = c.begin();
      for (auto it = c.begin(); it != c.end(); ++it)
        if (std::abs(it->second) > std::abs(best->second)) best = it;
      Coords one{{best->first, best->second > 0 ? 1.0 : -1.0}};
      c = std::move(one);
      break;
    }
  }
  return Functional(sp, std::move(c));
}

}  // namespace semivar
