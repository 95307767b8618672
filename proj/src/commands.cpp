#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace semivar::commands {

using json_io::json;
using json_io::Node;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

class Report {
 public:
  void output(const std::string& name, json value, bool exact) {
    value["label"] = exact ? "exact" : "estimated";
    outputs_[name] = std::move(value);
  }
  void number(const std::string& name, double v, bool exact) { output(name, json{{"value", v}}, exact); }

  // computed <= bound + slack
  void le(const std::string& name, double computed, double bound, double slack = 0.0) {
    add(name, computed <= bound + slack, fmt(computed) + " <= " + fmt(bound) + slack_text(slack),
        {{"computed", computed}, {"bound", bound}});
  }
  // computed >= bound - slack
  void ge(const std::string& name, double computed, double bound, double slack = 0.0) {
    add(name, computed >= bound - slack, fmt(computed) + " >= " + fmt(bound) + slack_text(-slack),
        {{"computed", computed}, {"bound", bound}});
  }
  // |computed - expected| <= tol
  void near(const std::string& name, double computed, double expected, double tol) {
    add(name, std::abs(computed - expected) <= tol,
        "|" + fmt(computed) + " - " + fmt(expected) + "| <= " + fmt(tol),
        {{"computed", computed}, {"expected", expected}, {"tol", tol}});
  }
  void truth(const std::string& name, bool ok, const std::string& relation) { add(name, ok, relation, json::object()); }

  void trace(const ConvergenceTrace& t) { traces_.push_back(json_io::to_json(t)); }

  json finish(const std::string& command, std::uint64_t digest) const {
    bool pass = true;
    for (const auto& a : assertions_) pass = pass && a["pass"].get<bool>();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
    return {{"command", command}, {"inputs_digest", hex},   {"outputs", outputs_},
            {"assertions", assertions_}, {"pass", pass}, {"traces", traces_}};
  }

 private:
  static std::string slack_text(double s) { return s == 0.0 ? "" : (s > 0 ? " + " : " - ") + fmt(std::abs(s)); }

  void add(const std::string& name, bool ok, const std::string& relation, json values) {
    json a{{"name", name}, {"pass", ok}, {"relation", relation}};
    for (auto& [k, v] : values.items()) a[k] = v;
    if (!ok) a["violated"] = relation;
    assertions_.push_back(std::move(a));
  }

  json outputs_ = json::object();
  json assertions_ = json::array();
  json traces_ = json::array();
};

OperatorFunction family(FamilyKind k, double a = 0.0, double b = 1.0) {
  Family f;
  f.kind = k;
  f.a = a;
  f.b = b;
  return OperatorFunction(f);
}

SearchOptions options(const Settings& s) {
  SearchOptions o;
  o.seed = s.seed;
  return o;
}

// 0 < 1/(N+1) < ... < 1/2 < 1
Division harmonic_division(int N) {
  std::vector<double> p{0.0};
  for (int n = N + 1; n >= 1; --n) p.push_back(1.0 / n);
  return Division(p);
}

void reproduce_ex1(Report& r, const Settings& s) {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  const double expected = std::sqrt(kZeta2 - 1.0);
  VariationReport sv = semivariation(ex1, options(s));
  r.output("sv_0_1", json_io::to_json(sv), sv.exact);
  r.number("expected_sv_0_1", expected, true);
  r.near("sv_0_1 = sqrt(pi^2/6 - 1)", sv.value, expected, 1e-12);
  r.truth("sv_0_1 exact", sv.exact, "exact path used");

  double worst = 0.0;
  bool all_exact = true;
  for (int N = 1; N <= 50; ++N) {
    VariationReport v = v_division(ex1, harmonic_division(N), VMode::exact, options(s));
    worst = std::max(worst, std::abs(v.value - expected));
    all_exact = all_exact && v.exact;
  }
  r.number("max_error_v_D_N", worst, all_exact);
  r.le("V(F, D_N) = sqrt(pi^2/6 - 1) for N <= 50", worst, 1e-12);

  VectorStep one{{0.0, 1.0}, {NormedVector::scalar(1.0)}, {NormedVector::scalar(1.0), NormedVector::scalar(1.0)}};
  double bound = existence_bound(ex1, one, IntegralKind::dF_g, options(s));
  r.number("dF_g_existence_bound", bound, true);
  r.near("dF_g bound with |g| = 1 is sqrt(pi^2/6 - 1)", bound, expected, 1e-12);

  VariationReport var = variation(ex1, 0.0, 1.0, harmonic_division(1000), options(s));
  r.output("var_0_1", json_io::to_json(var), false);
  r.truth("var_0_1 diverges", var.divergent && std::isinf(var.upper), "var upper bound is infinite");
  double h = harmonic_number(1001) - 1.0;
  r.ge("var over D_1000 >= H_1001 - 1", var.lower, h, 1e-12);
}

void reproduce_ex_add(Report& r, const Settings& s) {
  OperatorFunction ex1 = family(FamilyKind::ex1_harmonic);
  VariationReport left = semivariation(ex1, 0.0, 0.5, options(s));
  VariationReport right = semivariation(ex1, 0.5, 1.0, options(s));
  r.output("sv_0_half", json_io::to_json(left), left.exact);
  r.output("sv_half_1", json_io::to_json(right), right.exact);
  r.near("sv_0_half = sqrt(pi^2/6 - 5/4)", left.value, std::sqrt(kZeta2 - 1.25), 1e-12);
  r.near("sv_half_1 = 1/2", right.value, 0.5, 1e-12);
  SlackReport sa = superadditivity_check(ex1, 0.5, options(s));
  r.output("superadditivity", json{{"lhs", sa.lhs}, {"rhs", sa.rhs}, {"margin", sa.slack}}, sa.exact);
  r.ge("strict superadditivity margin > 0", sa.slack, 0.0);
  r.truth("margin positive", sa.slack > 0.0, fmt(sa.slack) + " > 0");
}

void reproduce_ex_linf(Report& r, const Settings& s) {
  OperatorFunction linf = family(FamilyKind::linf_shift);
  std::vector<double> sched;
  for (int k = 1; k <= 20; ++k) sched.push_back(1.0 / k);
  LimitsReport lim = regulated_limits_check(linf, 0.0, sched, NormedVector::basis(linf.domain(), 1), options(s));
  r.output("limits_at_0", json{{"limits_exist", lim.limits_exist}, {"oscillation", lim.oscillation},
                                {"right_tails", lim.right_tails}},
           true);
  r.truth("one-sided limit at 0 fails", !lim.limits_exist, "limits_exist == false");
  r.near("oscillation lower bound at 0 is 1", lim.oscillation, 1.0, 1e-12);
  VariationReport sv = semivariation(linf, options(s));
  r.output("sv_0_1", json_io::to_json(sv), sv.exact);
  r.le("certified SV upper bound <= 2", sv.upper, 2.0);
  r.le("SV lower bound <= upper bound", sv.lower, sv.upper, 1e-12);
}

void reproduce_ex_c0(Report& r, const Settings& s) {
  OperatorFunction c0 = family(FamilyKind::c0_shift);
  const Family& fam = c0.family();
  const NormedVector e1 = NormedVector::basis(c0.domain(), 1);
  double least = std::numeric_limits<double>::infinity();
  for (Index k = 1; k <= 20; ++k) {
    Operator d = fam.eval(fam.level_point(k)) - fam.eval(fam.level_point(k + 1));
    least = std::min(least, vec_norm(d.apply(e1)));
  }
  r.number("min_jump_e1_k_le_20", least, true);
  r.ge("|[F(t_k) - F(t_k+1)] e_1| >= 1 for k <= 20", least, 1.0);
  VariationReport sv = semivariation(c0, options(s));
  r.output("sv_a_b", json_io::to_json(sv), sv.exact);
  r.le("certified SV upper bound <= 3", sv.upper, 3.0);
  r.le("SV lower bound <= upper bound", sv.lower, sv.upper, 1e-12);
}

void reproduce_dr(Report& r, const Settings& s) {
  auto y = dr_sequence(1000);
  SeriesReport abs = series_check(std::vector<NormedVector>(y.begin(), y.begin() + 100), SeriesMode::absolute, 0,
                                  s.seed, 5.0);
  r.trace(abs.trace);
  r.number("absolute_partial_sum_K100", abs.max_value, true);
  r.truth("absolute partial sums exceed 5", abs.divergent_trend, "divergence trend flagged");
  // first K with H_K > 5, from the harmonic sums directly
  std::size_t crossing = 1;
  while (harmonic_number(Index(crossing)) <= 5.0) ++crossing;
  r.number("harmonic_crossing", double(crossing), true);
  r.truth("absolute sums exceed 5 at the harmonic crossing",
          abs.first_exceeding && *abs.first_exceeding == crossing && crossing <= 83,
          "first_exceeding == " + std::to_string(crossing) + " <= 83");

  SeriesReport sign = series_check(y, SeriesMode::sign_sample, 1000, s.seed, std::sqrt(kZeta2));
  r.trace(sign.trace);
  r.number("sign_sample_max", sign.max_value, false);
  r.le("sign-sample prefix norms <= sqrt(pi^2/6)", sign.max_value, std::sqrt(kZeta2), 1e-12);

  SeriesReport perm = series_check(y, SeriesMode::permutation_sample, 100, s.seed, 0.0);
  r.number("permutation_spread", perm.spread, false);
  r.le("rearrangements leave the sum norm unchanged", perm.spread, 1e-12);

  std::vector<Functional> fs;
  for (Index k = 1; k <= 10; ++k) fs.push_back(Functional::coordinate(SpaceSpec::sequence(Norm::l2), k));
  SeriesReport weak = series_check(y, SeriesMode::weak_absolute, 0, s.seed, 1.0, fs);
  r.trace(weak.trace);
  r.number("weak_absolute_max", weak.max_value, true);
  r.le("coordinate functionals give finite absolute sums", weak.max_value, 1.0, 1e-15);
}

std::pair<double, double> interval_of(const Node& req, const OperatorFunction& f) {
  if (!req.has("interval")) return {f.a(), f.b()};
  Node iv = req.at("interval");
  if (iv.array().size() != 2) iv.error("expected [c, d]");
  double c = iv.at(std::size_t(0)).number(), d = iv.at(1).number();
  if (!(f.a() <= c && c < d && d <= f.b())) iv.error("need a <= c < d <= b");
  return {c, d};
}

void run_sv(Report& r, const Node& req, const Settings& s) {
  OperatorFunction f = json_io::parse_function(req.at("function"));
  auto [c, d] = interval_of(req, f);
  VariationReport sv = semivariation(f, c, d, options(s));
  r.output("sv", json_io::to_json(sv), sv.exact);
  r.le("lower <= value", sv.lower, sv.value, 1e-12);
  r.le("value <= upper", sv.value, sv.upper, 1e-12);
}

void run_var(Report& r, const Node& req, const Settings& s) {
  OperatorFunction f = json_io::parse_function(req.at("function"));
  auto [c, d] = interval_of(req, f);
  VariationReport var = variation(f, c, d, std::nullopt, options(s));
  r.output("var", json_io::to_json(var), var.exact);
  r.le("lower <= upper", var.lower, var.upper, 1e-12);
  VariationReport sv = semivariation(f, c, d, options(s));
  r.output("sv", json_io::to_json(sv), sv.exact);
  r.le("SV <= var", sv.lower, var.upper, 1e-12);
}

void run_characterize(Report& r, const Node& req, const Settings& s) {
  OperatorFunction f = json_io::parse_function(req.at("function"));
  if (!f.is_step()) req.at("function").error("characterize needs step data");
  CharSearch search = f.domain().is_scalar() ? CharSearch::vertex_enumeration : CharSearch::witness_replay;
  if (req.has("search")) {
    std::string m = req.at("search").string();
    if (m == "witness-replay") search = CharSearch::witness_replay;
    else if (m == "vertex-enumeration") search = CharSearch::vertex_enumeration;
    else req.at("search").error("unknown search \"" + m + "\"");
  }
  CharacterizationReport c = sv_step_characterization(f, search, options(s));
  json g = json::array();
  for (const auto& x : c.g_values) g.push_back(json_io::to_json(x));
  json out{{"value", c.value}, {"sv", c.sv}, {"division", c.division}, {"g_values", g}};
  if (c.vertex_max >= 0.0) out["vertex_max"] = c.vertex_max;
  r.output("characterization", out, c.exact);
  r.le("characterization <= SV", c.value, c.sv, 1e-12);
  if (c.exact) r.near("characterization = SV", c.value, c.sv, 1e-12);
  if (c.vertex_max >= 0.0) r.near("sign-vertex sup = SV", c.vertex_max, c.sv, 1e-12);
}

void run_integrate(Report& r, const Node& req, const Settings& s) {
  IntegralKind kind = json_io::parse_integral_kind(req.at("integral"));
  OperatorFunction F = json_io::parse_function(req.at("F"));
  VectorStep g = json_io::parse_vector_step(req.at("g"));
  const double tol = req.has("tol") ? req.at("tol").number() : s.tol;
  if (!(tol > 0.0)) req.at("tol").error("tol must be positive");
  NormedVector value;
  switch (kind) {
    case IntegralKind::F_dg: value = ks_F_dg_exact(F, g); break;
    case IntegralKind::dF_g: value = ks_dF_g_exact(F, g); break;
    default:
      if (!F.is_step()) req.at("F").error("product_dt needs step data");
      value = product_integral(F.step(), g);
  }
  r.output("value", json_io::to_json(value), true);
  r.number("norm", vec_norm(value), true);
  if (kind != IntegralKind::product_dt) {
    double bound = existence_bound(F, g, kind, options(s));
    r.number("bound", bound, true);
    r.le("|integral| <= existence bound", vec_norm(value), bound, 1e-12);
  } else {
    ByParts bp = hk_product_by_parts(F.step(), g);
    double gap = vec_norm(bp.lhs - bp.rhs);
    r.number("by_parts_gap", gap, true);
    r.le("integral of F g dt = integral of F d[primitive g]", gap, 1e-12);
  }
  if (F.is_step()) {
    NumericIntegral num = kurzweil_numeric(kind, F, g, tol);
    double gap = vec_norm(num.value - value);
    r.number("oracle_gap", gap, false);
    r.output("oracle", json{{"value", json_io::to_json(num.value)}, {"cauchy_gap", num.gap},
                            {"iterations", num.iterations}},
             false);
    r.le("exact formula matches the tagged-sum oracle", gap, std::max(tol, 1e-9));
  }
}

void run_helly(Report& r, const Node& req, const Settings& s) {
  IntegralKind kind = json_io::parse_integral_kind(req.at("kind"));
  if (kind == IntegralKind::product_dt) req.at("kind").error("helly supports F_dg and dF_g");
  OpStep F = json_io::parse_op_step(req.at("F"));
  OpStep G = json_io::parse_op_step(req.at("G"));
  VectorStep g = json_io::parse_vector_step(req.at("g"));
  long long n_max = req.has("n_max") ? req.at("n_max").integer() : 64;
  if (n_max < 3 || n_max > 1 << 16) req.at("n_max").error("n_max must lie in [3, 65536]");
  HellyReport h = helly_check(F, G, g, kind, int(n_max), options(s));
  r.trace(h.trace);
  r.output("helly", json{{"bound", h.bound}, {"sv_bound", h.sv_bound}, {"sv_limit", h.sv_limit},
                         {"worst_excess", h.worst_excess}, {"final_gap", h.trace.rows.back().gap}},
           true);
  r.le("gap_n <= bound / n", h.worst_excess, 0.0, 1e-12);
  r.truth("gaps nonincreasing", h.monotone, "gap_{n+1} <= gap_n + 1e-12");
  r.truth("SV(F_n) <= SV(F) + SV(G)", h.hypothesis_ok, "checked at n = 1, 2, 4, ...");
}

void run_series(Report& r, const Node& req, const Settings& s) {
  std::vector<NormedVector> seq;
  Node sq = req.at("sequence");
  if (sq.j.is_string()) {
    if (sq.string() != "dr-sequence") sq.error("unknown sequence \"" + sq.string() + "\"");
    long long K = req.has("K") ? req.at("K").integer() : 1000;
    if (K < 0 || K > 1000000) req.at("K").error("K must lie in [0, 10^6]");
    seq = dr_sequence(std::size_t(K));
  } else {
    for (std::size_t i = 0; i < sq.array().size(); ++i) seq.push_back(json_io::parse_vector(sq.at(i)));
  }
  std::string m = req.has("mode") ? req.at("mode").string() : "absolute";
  SeriesMode mode;
  if (m == "absolute") mode = SeriesMode::absolute;
  else if (m == "sign-sample") mode = SeriesMode::sign_sample;
  else if (m == "permutation-sample") mode = SeriesMode::permutation_sample;
  else if (m == "weak-absolute") mode = SeriesMode::weak_absolute;
  else req.at("mode").error("unknown mode \"" + m + "\"");
  long long samples = req.has("samples") ? req.at("samples").integer() : 1000;
  if (samples < 0) req.at("samples").error("samples must be nonnegative");
  double bound = req.has("bound") ? req.at("bound").number() : std::numeric_limits<double>::infinity();
  std::vector<Functional> fs;
  if (req.has("functionals")) {
    Node fn = req.at("functionals");
    for (std::size_t i = 0; i < fn.array().size(); ++i) fs.push_back(json_io::parse_functional(fn.at(i)));
  }
  SeriesReport sr = series_check(seq, mode, std::size_t(samples), s.seed, bound, fs);
  r.trace(sr.trace);
  json out{{"max_value", sr.max_value}, {"spread", sr.spread}, {"divergent_trend", sr.divergent_trend}};
  if (sr.first_exceeding) out["first_exceeding"] = *sr.first_exceeding;
  r.output("series", out, mode == SeriesMode::absolute || mode == SeriesMode::weak_absolute);
  if (std::isfinite(bound) && (mode == SeriesMode::sign_sample || mode == SeriesMode::permutation_sample))
    r.le("sampled norms <= bound", sr.max_value, bound, 1e-12);
}

}  // namespace

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json run(const std::string& command, const json& request, const Settings& s) {
  Node req = json_io::root(request);
  Report r;
  std::string name = command;
  if (command == "reproduce") {
    std::string ex = req.at("example").string();
    name += " " + ex;
    if (ex == "ex1") reproduce_ex1(r, s);
    else if (ex == "ex-add") reproduce_ex_add(r, s);
    else if (ex == "ex-linf") reproduce_ex_linf(r, s);
    else if (ex == "ex-c0") reproduce_ex_c0(r, s);
    else if (ex == "dr-series") reproduce_dr(r, s);
    else req.at("example").error("unknown example \"" + ex + "\"");
  } else if (command == "sv") {
    run_sv(r, req, s);
  } else if (command == "var") {
    run_var(r, req, s);
  } else if (command == "characterize") {
    run_characterize(r, req, s);
  } else if (command == "integrate") {
    run_integrate(r, req, s);
  } else if (command == "helly") {
    run_helly(r, req, s);
  } else if (command == "series") {
    run_series(r, req, s);
  } else {
    fail(ErrorCode::argument, "unknown command \"" + command + "\"");
  }
  const std::string key = command + "\n" + request.dump() + "\n" + std::to_string(s.seed) + "\n" + fmt(s.tol);
  return r.finish(name, fnv1a(key));
}

}  // namespace semivar::commands
