#include "semivar/variation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "semivar/parallel.hpp"

namespace semivar {

namespace {

constexpr std::size_t kMaxComponent = 24;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

std::vector<std::vector<std::size_t>> components(UnionFind& uf, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<long> slot(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t r = uf.find(j);
    if (slot[r] < 0) {
      slot[r] = long(out.size());
      out.emplace_back();
    }
    out[std::size_t(slot[r])].push_back(j);
  }
  for (const auto& c : out)
    if (c.size() > kMaxComponent)
      fail(ErrorCode::unsupported, "exact mode: " + std::to_string(c.size()) +
                                       " coupled increments exceed the enumeration limit of 24");
  return out;
}

// Signs s maximizing |sum_j s_j d_j|. Increments split into groups that are
// mutually orthogonal (l2) or have disjoint supports (l1, linf); each group is
// enumerated on its own.
std::vector<double> max_sign_pattern(const std::vector<NormedVector>& d) {
  const std::size_t n = d.size();
  std::vector<double> signs(n, 1.0);
  if (n == 0) return signs;
  const SpaceSpec sp = d[0].space();
  const bool l2 = sp.is_scalar() || sp.norm == Norm::l2;
  UnionFind uf(n);

  if (l2) {
    std::vector<long double> G(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double g = inner(d[i], d[j]);
        G[i * n + j] = G[j * n + i] = g;
        if (i != j && g != 0.0) uf.unite(i, j);
      }
    for (const auto& comp : components(uf, n)) {
      const std::size_t c = comp.size();
      std::vector<double> s(c, 1.0), best_s = s;
      std::vector<long double> r(c, 0.0L);
      for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) r[i] += G[comp[i] * n + comp[j]];
      long double q = 0.0L;
      for (std::size_t i = 0; i < c; ++i) q += r[i];
      long double best = q;
      const std::uint64_t total = std::uint64_t(1) << (c - 1);
      for (std::uint64_t g = 1; g < total; ++g) {
        std::size_t p = std::size_t(std::countr_zero(g)) + 1;
        long double sp_old = s[p];
        q += -4.0L * sp_old * r[p] + 4.0L * G[comp[p] * n + comp[p]];
        for (std::size_t i = 0; i < c; ++i) r[i] -= 2.0L * sp_old * G[comp[i] * n + comp[p]];
        s[p] = -s[p];
        if (q > best) {
          best = q;
          best_s = s;
        }
      }
      for (std::size_t i = 0; i < c; ++i) signs[comp[i]] = best_s[i];
    }
    return signs;
  }

  std::map<Index, std::size_t> owner;
  for (std::size_t j = 0; j < n; ++j)
    for (auto& [k, v] : d[j].coords()) {
      auto [it, fresh] = owner.emplace(k, j);
      if (!fresh) uf.unite(j, it->second);
    }
  for (const auto& comp : components(uf, n)) {
    const std::size_t c = comp.size();
    std::vector<Index> support;
    for (std::size_t j : comp)
      for (auto& [k, v] : d[j].coords()) support.push_back(k);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const std::size_t m = support.size();
    std::vector<double> dense(c * m, 0.0), y(m, 0.0);
    for (std::size_t i = 0; i < c; ++i)
      for (auto& [k, v] : d[comp[i]].coords()) {
        std::size_t col = std::size_t(std::lower_bound(support.begin(), support.end(), k) - support.begin());
        dense[i * m + col] = v;
        y[col] += v;
      }
    auto norm_y = [&] {
      double s = 0.0;
      for (double v : y) s = sp.norm == Norm::l1 ? s + std::abs(v) : std::max(s, std::abs(v));
      return s;
    };
    std::vector<double> s(c, 1.0), best_s = s;
    double best = norm_y();
    const std::uint64_t total = std::uint64_t(1) << (c - 1);
    for (std::uint64_t g = 1; g < total; ++g) {
      std::size_t p = std::size_t(std::countr_zero(g)) + 1;
      for (std::size_t k = 0; k < m; ++k) y[k] -= 2.0 * s[p] * dense[p * m + k];
      s[p] = -s[p];
      double v = norm_y();
      if (v > best) {
        best = v;
        best_s = s;
      }
    }
    for (std::size_t i = 0; i < c; ++i) signs[comp[i]] = best_s[i];
  }
  return signs;
}

// All nonzero increments of the form f_j (x) v_j with f_j proportional to one
// functional f: returns f and fills d_j with the rescaled vectors.
std::optional<Functional> common_functional(const std::vector<Operator>& incs, std::vector<NormedVector>& d) {
  std::optional<Functional> f;
  d.clear();
  for (const auto& A : incs) {
    if (A.is_zero()) {
      d.push_back(NormedVector::zero(A.codomain()));
      continue;
    }
    if (A.kind() != Operator::Kind::finite_rank || A.terms().size() != 1) return std::nullopt;
    const auto& t = A.terms()[0];
    if (!f) {
      f = t.f;
      d.push_back(t.v);
      continue;
    }
    if (t.f.coords().size() != f->coords().size()) return std::nullopt;
    const auto& [k0, f0] = *f->coords().begin();
    auto it0 = t.f.coords().find(k0);
    if (it0 == t.f.coords().end()) return std::nullopt;
    const double ratio = it0->second / f0;
    for (auto& [k, fk] : f->coords()) {
      auto it = t.f.coords().find(k);
      if (it == t.f.coords().end() || std::abs(it->second - ratio * fk) > 1e-15 * std::abs(it->second))
        return std::nullopt;
    }
    d.push_back(t.v * ratio);
  }
  return f;
}

double safe_op_norm(const Operator& A) {
  try {
    return op_norm(A);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::unsupported) throw;
    // |Ax| <= sum_j |x_j| |A e_j| and |x_j| <= |x| for l1, l2 and linf.
    DenseBlocks b = to_dense({A});
    double s = 0.0;
    const DenseMatrix& m = b.blocks[0];
    for (int j = 0; j < m.cols; ++j) {
      std::vector<double> col(m.rows);
      for (int i = 0; i < m.rows; ++i) col[i] = m(i, j);
      double c = 0.0;
      for (double v : col) c = b.cod == Norm::l1 ? c + std::abs(v) : b.cod == Norm::linf ? std::max(c, std::abs(v)) : c + v * v;
      s += b.cod == Norm::l2 ? std::sqrt(c) : c;
    }
    return s;
  }
}

double dense_norm(const std::vector<double>& y, Norm n) {
  double s = 0.0;
  for (double v : y) s = n == Norm::l1 ? s + std::abs(v) : n == Norm::linf ? std::max(s, std::abs(v)) : s + v * v;
  return n == Norm::l2 ? std::sqrt(s) : s;
}

// Unit vector in norm n maximizing <g, x>.
void unit_maximizer(const std::vector<double>& g, Norm n, double* x) {
  const std::size_t m = g.size();
  switch (n) {
    case Norm::l2: {
      double s = dense_norm(g, Norm::l2);
      for (std::size_t i = 0; i < m; ++i) x[i] = s > 0 ? g[i] / s : (i == 0 ? 1.0 : 0.0);
      break;
    }
    case Norm::linf:
      for (std::size_t i = 0; i < m; ++i) x[i] = g[i] < 0 ? -1.0 : 1.0;
      break;
    case Norm::l1: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < m; ++i)
        if (std::abs(g[i]) > std::abs(g[best])) best = i;
      for (std::size_t i = 0; i < m; ++i) x[i] = 0.0;
      x[best] = g[best] < 0 ? -1.0 : 1.0;
      break;
    }
  }
}

// Unit functional (dual norm) attaining |y|.
std::vector<double> dense_norming(const std::vector<double>& y, Norm n) {
  std::vector<double> f(y.size(), 0.0);
  unit_maximizer(y, dual_norm_kind(n), f.data());
  return f;
}

struct Ascent {
  double value = -1.0;
  std::vector<double> x;  // nu * cols
};

Ascent block_ascent(const DenseBlocks& B, std::vector<double> x, const SearchOptions& opt) {
  const std::size_t nu = B.blocks.size();
  const int R = B.blocks[0].rows, C = B.blocks[0].cols;
  auto image = [&](const std::vector<double>& xs) {
    std::vector<double> y(R, 0.0);
    for (std::size_t j = 0; j < nu; ++j) {
      const DenseMatrix& A = B.blocks[j];
      for (int i = 0; i < R; ++i) {
        double s = 0.0;
        for (int k = 0; k < C; ++k) s += A(i, k) * xs[j * C + k];
        y[i] += s;
      }
    }
    return y;
  };
  std::vector<double> y = image(x);
  double val = dense_norm(y, B.cod);
  std::vector<double> g(C);
  for (int it = 0; it < opt.max_iter; ++it) {
    std::vector<double> ys = dense_norming(y, B.cod);
    std::vector<double> nx(x.size());
    for (std::size_t j = 0; j < nu; ++j) {
      const DenseMatrix& A = B.blocks[j];
      for (int k = 0; k < C; ++k) {
        double s = 0.0;
        for (int i = 0; i < R; ++i) s += A(i, k) * ys[i];
        g[k] = s;
      }
      unit_maximizer(g, B.dom, nx.data() + j * C);
    }
    std::vector<double> ny = image(nx);
    double nval = dense_norm(ny, B.cod);
    if (nval <= val) break;
    bool done = nval - val < opt.tol;
    x = std::move(nx);
    y = std::move(ny);
    val = nval;
    if (done) break;
  }
  return {val, std::move(x)};
}

VariationReport heuristic(const std::vector<Operator>& incs, const SearchOptions& opt) {
  DenseBlocks B = to_dense(incs);
  const std::size_t nu = incs.size();
  const int C = B.blocks[0].cols;
  const SpaceSpec dom = incs[0].domain();
  const std::size_t restarts = std::size_t(std::max(1, opt.restarts));

  // Restart 0 starts from a norm-attaining vector of the largest increment.
  std::vector<double> start0(nu * C, 0.0);
  {
    std::size_t best_j = 0;
    double best_n = -1.0;
    std::vector<double> bx;
    for (std::size_t j = 0; j < nu; ++j) {
      std::vector<double> x;
      double n;
      try {
        n = matrix_norm(B.blocks[j], B.dom, B.cod, &x);
      } catch (const Error&) {
        continue;
      }
      if (n > best_n) {
        best_n = n;
        best_j = j;
        bx = x;
      }
    }
    if (!bx.empty()) std::copy(bx.begin(), bx.end(), start0.begin() + std::ptrdiff_t(best_j * C));
  }

  std::vector<Ascent> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    std::vector<double> x(nu * C);
    if (r == 0) {
      x = start0;
    } else {
      std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ULL * (r + 1)));
      std::normal_distribution<double> normal;
      std::vector<double> g(C);
      for (std::size_t j = 0; j < nu; ++j) {
        for (auto& v : g) v = normal(rng);
        unit_maximizer(g, B.dom, x.data() + j * C);
      }
    }
    runs[r] = block_ascent(B, std::move(x), opt);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].value > runs[best].value) best = r;

  VariationReport rep;
  for (std::size_t j = 0; j < nu; ++j) {
    std::vector<double> xj(runs[best].x.begin() + std::ptrdiff_t(j * C), runs[best].x.begin() + std::ptrdiff_t((j + 1) * C));
    rep.witness.push_back(from_dense(dom, B.dom_index, xj));
  }
  rep.value = replay(incs, rep.witness);
  rep.lower = rep.value;
  double up = 0.0;
  for (const auto& A : incs) up += safe_op_norm(A);
  rep.upper = std::max(up, rep.value);
  rep.exact = false;
  rep.method = "block-ascent";
  return rep;
}

NormedVector unit_of(const SpaceSpec& dom) { return NormedVector::basis(dom, 1); }

void check_subinterval(const OperatorFunction& f, double c, double d) {
  if (!(f.a() <= c && c <= d && d <= f.b())) fail(ErrorCode::argument, "interval must lie inside the domain of F");
}

VariationReport zero_report(double c, double d) {
  VariationReport r;
  r.exact = true;
  r.division = {c, d};
  r.method = "degenerate";
  return r;
}

Division family_search_division(const Family& fam, double c, double d, std::size_t budget) {
  std::vector<double> pts = fam.jump_points(c, d, budget);
  pts.push_back(c);
  pts.push_back(d);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Division(std::move(pts));
}

// Number of level changes of a shift family on [c,d], c > a.
double shift_variation(const Family& fam, double c, double d) { return double(fam.level(c) - fam.level(d)); }

VariationReport family_semivariation(const Family& fam, double c, double d, const SearchOptions& opt) {
  OperatorFunction f(fam);
  if (fam.kind == FamilyKind::ex1_harmonic) {
    VariationReport r;
    Operator inc = fam.increment(c, d);
    r.witness = {NormedVector::scalar(1.0)};
    r.division = {c, d};
    r.value = r.lower = r.upper = vec_norm(inc.column());
    r.exact = true;
    r.method = "closed-form";
    return r;
  }
  VariationReport best;
  best.value = -1.0;
  for (std::size_t budget : {2u, 6u, 11u, 22u}) {
    Division D = family_search_division(fam, c, d, budget);
    VariationReport r = v_division(f, D, VMode::automatic, opt);
    r.division = D.points();
    if (r.value > best.value) best = r;
  }
  best.lower = best.value;
  best.upper = fam.sv_upper_bound();
  if (c > fam.a) best.upper = std::min(best.upper, shift_variation(fam, c, d));
  best.upper = std::max(best.upper, best.value);
  best.exact = false;
  best.method = "division-search";
  return best;
}

}  // namespace

double replay(const std::vector<Operator>& incs, const std::vector<NormedVector>& x) {
  if (incs.size() != x.size()) fail(ErrorCode::argument, "witness length does not match the increments");
  if (incs.empty()) return 0.0;
  NormedVector y = NormedVector::zero(incs[0].codomain());
  for (std::size_t j = 0; j < incs.size(); ++j) y = y + incs[j].apply(x[j]);
  return vec_norm(y);
}

std::pair<double, double> v_bounds(const std::vector<Operator>& incs) {
  double lo = 0.0, up = 0.0;
  for (const auto& A : incs) {
    double n = op_norm(A);
    lo = std::max(lo, n);
    up += n;
  }
  return {lo, up};
}

std::pair<double, double> v_bounds(const OperatorFunction& f, const Division& d) { return v_bounds(f.increments(d)); }

VariationReport v_increments(const std::vector<Operator>& incs, VMode mode, const SearchOptions& opt) {
  VariationReport r;
  if (incs.empty()) {
    r.exact = true;
    return r;
  }
  const SpaceSpec dom = incs[0].domain(), cod = incs[0].codomain();
  const std::size_t nu = incs.size();

  if (mode != VMode::heuristic) {
    std::vector<NormedVector> d;
    std::optional<NormedVector> w;
    if (dom.is_scalar()) {
      for (const auto& A : incs) d.push_back(A.image_of_one());
      w = NormedVector::scalar(1.0);
    } else if (auto f = common_functional(incs, d)) {
      const double fn = dual_norm(*f);
      for (auto& v : d) v = v * fn;
      w = norming_vector(*f);
    } else if (std::all_of(incs.begin(), incs.end(), [](const Operator& A) { return A.is_zero(); })) {
      w = unit_of(dom);
      d.assign(nu, NormedVector::zero(cod));
    }
    if (w) {
      std::vector<double> s = max_sign_pattern(d);
      for (std::size_t j = 0; j < nu; ++j) r.witness.push_back(*w * s[j]);
      r.value = r.lower = r.upper = replay(incs, r.witness);
      r.exact = true;
      r.method = "sign-enumeration";
      return r;
    }
    if (cod.kind == SpaceKind::euclidean && cod.dim == 1) {
      for (const auto& A : incs) {
        NormedVector x = op_norm_witness(A);
        if (A.apply(x).coord(1) < 0) x = -x;
        r.witness.push_back(x);
      }
      r.value = r.lower = r.upper = replay(incs, r.witness);
      r.exact = true;
      r.method = "scalar-codomain";
      return r;
    }
    if (mode == VMode::exact)
      fail(ErrorCode::unsupported, "exact mode needs a scalar domain, a common rank-one functional or a scalar codomain");
  }
  return heuristic(incs, opt);
}

VariationReport v_division(const OperatorFunction& f, const Division& d, VMode mode, const SearchOptions& opt) {
  VariationReport r = v_increments(f.increments(d), mode, opt);
  r.division = d.points();
  return r;
}

Division reduced_division(const OpStep& f, double c, double d) {
  std::vector<double> pts{c};
  for (double b : f.breaks)
    if (b > c && b < d) pts.push_back(b);
  pts.push_back(d);
  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    out.push_back(pts[j]);
    out.push_back(0.5 * (pts[j] + pts[j + 1]));
  }
  out.push_back(d);
  return Division(std::move(out));
}

VariationReport semivariation(const OperatorFunction& f, double c, double d, const SearchOptions& opt) {
  check_subinterval(f, c, d);
  if (c == d) return zero_report(c, d);
  if (!f.is_step()) return family_semivariation(f.family(), c, d, opt);
  Division D = reduced_division(f.step(), c, d);
  VariationReport r = v_division(f, D, VMode::automatic, opt);
  r.method = "reduced-division/" + r.method;
  return r;
}

VariationReport semivariation(const OperatorFunction& f, const SearchOptions& opt) {
  return semivariation(f, f.a(), f.b(), opt);
}

VariationReport variation(const OperatorFunction& f, double c, double d, const std::optional<Division>& d_hint,
                          const SearchOptions& opt) {
  (void)opt;
  check_subinterval(f, c, d);
  if (c == d) return zero_report(c, d);
  if (d_hint && (d_hint->a() != c || d_hint->b() != d))
    fail(ErrorCode::argument, "supplied division does not match the interval");
  VariationReport r;
  auto sum_over = [&](const Division& D) {
    r.division = D.points();
    r.value = 0.0;
    r.witness.clear();
    for (const auto& A : f.increments(D)) {
      r.value += op_norm(A);
      r.witness.push_back(op_norm_witness(A));
    }
  };
  if (f.is_step()) {
    Division D = reduced_division(f.step(), c, d);
    if (d_hint) D = division_union(D, *d_hint);
    sum_over(D);
    r.lower = r.upper = r.value;
    r.exact = true;
    r.method = "reduced-division";
    return r;
  }
  const Family& fam = f.family();
  if (c > fam.a) {
    if (fam.kind == FamilyKind::ex1_harmonic) {
      double s = 0.0;
      const Index hi = fam.level(c), lo = fam.level(d);
      if (hi - lo > kMaxMaterialized) fail(ErrorCode::unsupported, "variation: too many levels in the interval");
      for (Index k = hi; k > lo; --k) s += 1.0 / double(k);
      r.value = s;
    } else {
      r.value = shift_variation(fam, c, d);
    }
    r.division = {c, d};
    r.lower = r.upper = r.value;
    r.exact = true;
    r.method = "closed-form";
    return r;
  }
  Division D = d_hint ? *d_hint : family_search_division(fam, c, d, std::size_t(fam.truncation));
  sum_over(D);
  r.lower = r.value;
  r.upper = kInf;
  r.exact = false;
  r.divergent = true;
  r.method = "divergent-lower-bound";
  return r;
}

std::vector<double> default_schedule(double c, double d, HalfOpen side, int count) {
  std::vector<double> t;
  for (int i = 1; i <= count; ++i)
    t.push_back(side == HalfOpen::right_open_at_c ? c + (d - c) / i : d - (d - c) / i);
  return t;
}

std::vector<double> sv_halfopen(const OperatorFunction& f, double c, double d, HalfOpen side,
                                const std::vector<double>& schedule, const SearchOptions& opt) {
  std::vector<double> out;
  double running = 0.0;
  for (double t : schedule) {
    if (!(t >= c && t <= d)) fail(ErrorCode::argument, "schedule point outside [c,d]");
    VariationReport r = side == HalfOpen::left_open_at_d ? semivariation(f, c, t, opt) : semivariation(f, t, d, opt);
    // Lower bounds from a search are made monotone; exact values already are.
    running = r.exact ? r.value : std::max(running, r.value);
    out.push_back(running);
  }
  return out;
}

VariationReport sv_halfopen_limit(const OperatorFunction& f, double c, double d, HalfOpen side,
                                  const SearchOptions& opt) {
  check_subinterval(f, c, d);
  if (c == d) return zero_report(c, d);
  if (!f.is_step() && f.family().kind == FamilyKind::ex1_harmonic) {
    const Family& fam = f.family();
    Operator inc = side == HalfOpen::left_open_at_d ? fam.eval(d, Side::left) - fam.eval(c)
                                                    : fam.eval(d) - fam.eval(c, Side::right);
    VariationReport r;
    r.value = r.lower = r.upper = vec_norm(inc.column());
    r.exact = true;
    r.division = {c, d};
    r.witness = {NormedVector::scalar(1.0)};
    r.method = "closed-form";
    return r;
  }
  // Pull the open end inside the last constancy interval.
  std::vector<double> jumps;
  if (f.is_step()) {
    for (double b : f.step().breaks)
      if (b > c && b < d) jumps.push_back(b);
  } else {
    jumps = f.family().jump_points(c, d, 1u << 20);
  }
  std::sort(jumps.begin(), jumps.end());
  if (side == HalfOpen::left_open_at_d) {
    double last = jumps.empty() ? c : jumps.back();
    return semivariation(f, c, 0.5 * (last + d), opt);
  }
  if (!f.is_step() && c == f.family().a) {
    const Family& fam = f.family();
    double s = fam.level_point(fam.level(d) + 12);
    VariationReport r = semivariation(f, s, d, opt);
    r.upper = std::max(fam.sv_upper_bound(), r.value);
    r.exact = false;
    r.method = "monotone-limit-lower-bound";
    return r;
  }
  double first = jumps.empty() ? d : jumps.front();
  return semivariation(f, 0.5 * (c + first), d, opt);
}

VariationReport sv_via_functionals(const OperatorFunction& f, const Division& d, FunctionalSampler sampler,
                                   int samples, const SearchOptions& opt) {
  const std::vector<Operator> incs = f.increments(d);
  const SpaceSpec cod = f.codomain();
  constexpr Index kWindow = 64;
  std::set<Index> idx;
  if (cod.kind == SpaceKind::euclidean) {
    for (int i = 1; i <= cod.dim; ++i) idx.insert(i);
  } else {
    auto add = [&](const NormedVector& v) {
      for (auto& [k, x] : v.coords()) idx.insert(k);
      if (v.tail())
        for (Index k = v.tail()->start + 1; k <= v.tail()->start + kWindow; ++k) idx.insert(k);
    };
    for (const auto& A : incs) {
      if (A.kind() == Operator::Kind::scalar_to_vector) add(A.column());
      if (A.kind() == Operator::Kind::finite_rank)
        for (const auto& t : A.terms()) add(t.v);
    }
  }
  if (idx.empty()) idx.insert(1);

  std::vector<Functional> cands;
  if (sampler == FunctionalSampler::coordinate) {
    for (Index k : idx) cands.push_back(Functional::coordinate(cod, k));
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    const Norm dn = cod.is_scalar() ? Norm::l2 : dual_norm_kind(cod.norm);
    for (int s = 0; s < samples; ++s) {
      std::vector<double> g;
      for (std::size_t i = 0; i < idx.size(); ++i) g.push_back(normal(rng));
      double n = dense_norm(g, dn);
      Coords c;
      std::size_t i = 0;
      for (Index k : idx) c[k] = g[i++] / n;
      cands.emplace_back(cod, std::move(c));
    }
    for (const auto& A : incs)
      if (A.domain().is_scalar() && !A.is_zero()) cands.push_back(norming_functional(A.image_of_one(), kWindow));
  }

  VariationReport r;
  r.value = -1.0;
  for (const auto& y : cands) {
    double dn = dual_norm(y);
    if (dn == 0.0) continue;
    double v = 0.0;
    for (const auto& A : incs) v += dual_norm(pullback(y, A));
    v /= dn;
    if (v > r.value) {
      r.value = v;
      r.functional = y * (1.0 / dn);
    }
  }
  r.value = std::max(r.value, 0.0);
  r.lower = r.value;
  r.upper = std::max(r.value, v_bounds(incs).second);
  r.division = d.points();
  r.exact = false;
  r.method = sampler == FunctionalSampler::coordinate ? "coordinate-functionals" : "random-functionals";
  return r;
}

VariationReport v_star(const OperatorFunction& f, const Division& d, const std::vector<Operator>& contractions) {
  const std::vector<Operator> incs = f.increments(d);
  if (contractions.size() != incs.size()) fail(ErrorCode::argument, "need one contraction per subinterval");
  const SpaceSpec X = f.domain();
  Operator T = Operator::zero(X, f.codomain());
  for (std::size_t j = 0; j < incs.size(); ++j) {
    const Operator& G = contractions[j];
    if (!(G.domain() == X) || !(G.codomain() == X)) fail(ErrorCode::argument, "contractions must act on the domain of F");
    if (op_norm(G) > 1.0 + 1e-12) fail(ErrorCode::argument, "contraction has operator norm above 1");
    T = T + compose(incs[j], G);
  }
  VariationReport r;
  r.value = r.lower = r.upper = op_norm(T);
  r.exact = true;
  r.division = d.points();
  r.witness_ops = contractions;
  r.method = "v-star-supplied";
  return r;
}

VariationReport v_star_construct(const OperatorFunction& f, const Division& d, const SearchOptions& opt) {
  VariationReport base = v_division(f, d, VMode::automatic, opt);
  const SpaceSpec X = f.domain();
  std::vector<Operator> G;
  for (const auto& x : base.witness) {
    if (X.is_scalar()) {
      DenseMatrix m(1, 1);
      m(0, 0) = x.coord(1);
      G.push_back(Operator::matrix(std::move(m)));
    } else {
      // G x = phi(x) x_j with phi = e_1^*, w = e_1.
      G.push_back(Operator::rank_one(Functional::coordinate(X, 1), x));
    }
  }
  VariationReport r = v_star(f, d, G);
  r.exact = base.exact;
  r.lower = base.lower;
  r.upper = base.upper;
  r.witness = base.witness;
  r.method = "v-star-construct";
  return r;
}

VariationReport bv_criterion(const OperatorFunction& f, const Division& d, const SearchOptions& opt) {
  VariationReport r;
  r.exact = true;
  r.division = d.points();
  for (std::size_t j = 1; j <= d.nu(); ++j) {
    VariationReport s = semivariation(f, d[j - 1], d[j], opt);
    r.value += s.value;
    r.lower += s.lower;
    r.upper += s.upper;
    r.exact = r.exact && s.exact;
  }
  r.method = "sum-of-semivariations";
  return r;
}

VariationReport sv_norm(const OperatorFunction& f, const SearchOptions& opt) {
  VariationReport r = semivariation(f, opt);
  double fa = op_norm(f.eval(f.a()));
  r.value += fa;
  r.lower += fa;
  r.upper += fa;
  r.method = "norm-at-a+" + r.method;
  return r;
}

}  // namespace semivar
