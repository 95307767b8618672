#pragma once

#include <cstdint>
#include <map>
#include <optional>

namespace semivar {

enum class SpaceKind { euclidean, sequence };
enum class Norm { l1, l2, linf };

using Index = std::int64_t;
using Coords = std::map<Index, double>;

struct SpaceSpec {
  SpaceKind kind = SpaceKind::euclidean;
  int dim = 1;
  Norm norm = Norm::l2;

  static SpaceSpec euclidean(int dim, Norm norm = Norm::l2);
  static SpaceSpec sequence(Norm norm);
  static SpaceSpec scalar() { return euclidean(1); }

  bool is_scalar() const { return kind == SpaceKind::euclidean && dim == 1; }
  bool operator==(const SpaceSpec& o) const;
};

// Conjugate exponent norm: l1 <-> linf, l2 <-> l2.
Norm dual_norm_kind(Norm n);
const char* norm_name(Norm n);

// Harmonic l2 tail: scale * sum_{k > start} e_k / k.
struct Tail {
  Index start = 1;
  double scale = 1.0;
  bool operator==(const Tail&) const = default;
};

// Largest number of coordinates materialized when a tail is shifted or a
// partial sum is spelled out.
inline constexpr Index kMaxMaterialized = Index(1) << 22;

class NormedVector {
 public:
  NormedVector() = default;
  explicit NormedVector(SpaceSpec space, Coords coords = {}, std::optional<Tail> tail = std::nullopt);

  static NormedVector zero(SpaceSpec space) { return NormedVector(space); }
  static NormedVector basis(SpaceSpec space, Index k, double value = 1.0);
  static NormedVector scalar(double x) { return basis(SpaceSpec::scalar(), 1, x); }

  const SpaceSpec& space() const { return space_; }
  const Coords& coords() const { return coords_; }
  const std::optional<Tail>& tail() const { return tail_; }

  // Coordinate value including any tail contribution.
  double coord(Index k) const;
  bool is_zero() const { return coords_.empty() && !tail_; }
  // Largest index with a finite coordinate (0 if none).
  Index max_index() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }

  NormedVector operator+(const NormedVector& o) const;
  NormedVector operator-(const NormedVector& o) const;
  NormedVector operator-() const { return *this * -1.0; }
  NormedVector operator*(double s) const;
  NormedVector& operator+=(const NormedVector& o) { return *this = *this + o; }

 private:
  void normalize();

  SpaceSpec space_{};
  Coords coords_;
  std::optional<Tail> tail_;
};

inline NormedVector operator*(double s, const NormedVector& v) { return v * s; }

double vec_norm(const NormedVector& v);

// l2 inner product, tail-aware.
double inner(const NormedVector& u, const NormedVector& v);

// pi^2/6 - sum_{k<=K} 1/k^2.
double tail_remainder_zeta2(Index K);
// sum_{k<=K} 1/k.
double harmonic_number(Index K);

class Functional {
 public:
  Functional() = default;
  Functional(SpaceSpec space, Coords coords);

  static Functional coordinate(SpaceSpec space, Index k, double value = 1.0);

  const SpaceSpec& space() const { return space_; }
  const Coords& coords() const { return coords_; }

  Functional operator+(const Functional& o) const;
  Functional operator*(double s) const;
  bool operator==(const Functional& o) const { return space_ == o.space_ && coords_ == o.coords_; }
  bool is_zero() const { return coords_.empty(); }

 private:
  SpaceSpec space_{};
  Coords coords_;
};

double dual_norm(const Functional& f);
double dual_pair(const Functional& f, const NormedVector& v);

// Unit vector x with f(x) = dual_norm(f).
NormedVector norming_vector(const Functional& f);
// Unit-dual-norm functional with f(v) close to |v|; tails are cut at index
// `window` past their start.
Functional norming_functional(const NormedVector& v, Index window = 64);

}  // namespace semivar
