#include "json_io.hpp"

#include <cmath>

namespace semivar::json_io {

namespace {

const char* type_name(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

Norm parse_norm(const Node& n) {
  std::string s = n.string();
  if (s == "l1") return Norm::l1;
  if (s == "l2") return Norm::l2;
  if (s == "linf") return Norm::linf;
  n.error("unknown norm \"" + s + "\" (expected l1, l2 or linf)");
}

Index parse_index(const Node& n, const std::string& key) {
  std::size_t used = 0;
  long long k = 0;
  try {
    k = std::stoll(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || k < 1) n.error("coordinate key \"" + key + "\" is not a positive integer");
  return Index(k);
}

Coords parse_coords(const Node& n) {
  Coords c;
  if (n.j.is_array()) {
    for (std::size_t i = 0; i < n.j.size(); ++i)
      if (double v = n.at(i).number(); v != 0.0) c[Index(i + 1)] = v;
    return c;
  }
  for (auto& [key, val] : n.object().items()) {
    Node child{val, n.path + "." + key};
    if (double v = child.number(); v != 0.0) c[parse_index(n, key)] = v;
  }
  return c;
}

template <class V, class Parse>
Step<V> parse_step(const Node& n, Parse parse) {
  n.object();
  Step<V> s;
  Node iv = n.at("interval");
  if (iv.array().size() != 2) iv.error("expected [a, b]");
  const double a = iv.at(std::size_t(0)).number(), b = iv.at(1).number();
  if (!(a < b)) iv.error("need a < b");
  std::vector<double> br;
  if (n.has("breakpoints")) {
    Node bn = n.at("breakpoints");
    for (std::size_t i = 0; i < bn.array().size(); ++i) br.push_back(bn.at(i).number());
  }
  // Either the full list a = t_0 < ... < t_m = b or only the interior points.
  if (br.empty() || br.front() != a) br.insert(br.begin(), a);
  if (br.back() != b) br.push_back(b);
  s.breaks = br;
  Node ov = n.at("open_values"), pv = n.at("point_values");
  for (std::size_t i = 0; i < ov.array().size(); ++i) s.open.push_back(parse(ov.at(i)));
  for (std::size_t i = 0; i < pv.array().size(); ++i) s.point.push_back(parse(pv.at(i)));
  if (s.open.size() + 1 != s.breaks.size())
    ov.error("expected " + std::to_string(s.breaks.size() - 1) + " open values, got " + std::to_string(s.open.size()));
  if (s.point.size() != s.breaks.size())
    pv.error("expected " + std::to_string(s.breaks.size()) + " point values, got " + std::to_string(s.point.size()));
  try {
    s.validate();
  } catch (const Error& e) {
    n.error(e.what());
  }
  return s;
}

}  // namespace

Node Node::at(const char* key) const {
  object();
  if (!j.contains(key)) error(std::string("missing field \"") + key + "\"");
  return Node{j.at(key), path + "." + key};
}

Node Node::at(std::size_t i) const {
  array();
  if (i >= j.size()) error("index " + std::to_string(i) + " out of range");
  return Node{j.at(i), path + "[" + std::to_string(i) + "]"};
}

void Node::error(const std::string& what) const { fail(ErrorCode::parse, path + ": " + what); }

double Node::number() const {
  if (!j.is_number()) error(std::string("expected a number, got ") + type_name(j));
  double v = j.get<double>();
  if (!std::isfinite(v)) error("expected a finite number");
  return v;
}

long long Node::integer() const {
  if (!j.is_number_integer()) error(std::string("expected an integer, got ") + type_name(j));
  return j.get<long long>();
}

std::string Node::string() const {
  if (!j.is_string()) error(std::string("expected a string, got ") + type_name(j));
  return j.get<std::string>();
}

bool Node::boolean() const {
  if (!j.is_boolean()) error(std::string("expected a boolean, got ") + type_name(j));
  return j.get<bool>();
}

const json& Node::array() const {
  if (!j.is_array()) error(std::string("expected an array, got ") + type_name(j));
  return j;
}

const json& Node::object() const {
  if (!j.is_object()) error(std::string("expected an object, got ") + type_name(j));
  return j;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, std::string("$: malformed JSON: ") + e.what());
  }
}

SpaceSpec parse_space(const Node& n) {
  if (n.j.is_string() && n.j.get<std::string>() == "scalar") return SpaceSpec::scalar();
  std::string kind = n.at("kind").string();
  Norm norm = n.has("norm") ? parse_norm(n.at("norm")) : Norm::l2;
  if (kind == "sequence") return SpaceSpec::sequence(norm);
  if (kind == "scalar") return SpaceSpec::scalar();
  if (kind != "euclidean") n.at("kind").error("unknown space kind \"" + kind + "\"");
  long long dim = n.at("dim").integer();
  if (dim < 1 || dim > 4096) n.at("dim").error("dimension out of range");
  return SpaceSpec::euclidean(int(dim), norm);
}

NormedVector parse_vector(const Node& n, const SpaceSpec* expect) {
  // Bare numbers are scalars.
  if (n.j.is_number()) {
    NormedVector v = NormedVector::scalar(n.number());
    if (expect && !(*expect == v.space())) n.error("scalar given where a vector is expected");
    return v;
  }
  SpaceSpec sp = n.has("space") ? parse_space(n.at("space")) : (expect ? *expect : SpaceSpec::scalar());
  if (expect && !(*expect == sp)) n.error("vector lives in the wrong space");
  Coords c = n.has("coords") ? parse_coords(n.at("coords")) : Coords{};
  std::optional<Tail> tail;
  if (n.has("tail")) {
    Node t = n.at("tail");
    std::string fam = t.at("family").string();
    if (fam != "harmonic-l2") t.at("family").error("unknown tail family \"" + fam + "\"");
    Tail tl;
    if (t.has("start")) tl.start = Index(t.at("start").integer());
    if (t.has("scale")) tl.scale = t.at("scale").number();
    tail = tl;
  }
  try {
    return NormedVector(sp, std::move(c), tail);
  } catch (const Error& e) {
    n.error(e.what());
  }
}

Functional parse_functional(const Node& n) {
  SpaceSpec sp = n.has("space") ? parse_space(n.at("space")) : SpaceSpec::scalar();
  try {
    return Functional(sp, n.has("coords") ? parse_coords(n.at("coords")) : Coords{});
  } catch (const Error& e) {
    n.error(e.what());
  }
}

Operator parse_operator(const Node& n) {
  if (n.j.is_number()) return Operator::scalar_to_vector(NormedVector::scalar(n.number()));
  std::string kind = n.at("kind").string();
  try {
    if (kind == "matrix") {
      Node d = n.at("data");
      std::size_t rows = d.array().size();
      if (rows == 0) d.error("empty matrix");
      std::size_t cols = d.at(std::size_t(0)).array().size();
      DenseMatrix m{int(rows), int(cols)};
      for (std::size_t i = 0; i < rows; ++i) {
        Node row = d.at(i);
        if (row.array().size() != cols) row.error("ragged matrix row");
        for (std::size_t k = 0; k < cols; ++k) m(int(i), int(k)) = row.at(k).number();
      }
      Norm dom = n.has("domain_norm") ? parse_norm(n.at("domain_norm")) : Norm::l2;
      Norm cod = n.has("codomain_norm") ? parse_norm(n.at("codomain_norm")) : Norm::l2;
      return Operator::matrix(std::move(m), dom, cod);
    }
    if (kind == "scalar_to_vector") return Operator::scalar_to_vector(parse_vector(n.at("vector")));
    if (kind == "rank_one") return Operator::rank_one(parse_functional(n.at("functional")), parse_vector(n.at("vector")));
    if (kind == "finite_rank") {
      SpaceSpec dom = parse_space(n.at("domain")), cod = parse_space(n.at("codomain"));
      Node ts = n.at("terms");
      std::vector<Operator::Term> terms;
      for (std::size_t i = 0; i < ts.array().size(); ++i)
        terms.push_back({parse_functional(ts.at(i).at("functional")), parse_vector(ts.at(i).at("vector"), &cod)});
      return Operator::finite_rank(dom, cod, std::move(terms));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    n.error(e.what());
  }
  n.at("kind").error("unknown operator kind \"" + kind + "\"");
}

OpStep parse_op_step(const Node& n) { return parse_step<Operator>(n, [](const Node& v) { return parse_operator(v); }); }

VectorStep parse_vector_step(const Node& n) {
  return parse_step<NormedVector>(n, [](const Node& v) { return parse_vector(v); });
}

OperatorFunction parse_function(const Node& n) {
  if (!n.has("family")) return OperatorFunction(parse_op_step(n));
  std::string name = n.at("family").string();
  Family f;
  if (name == "ex1-harmonic") f.kind = FamilyKind::ex1_harmonic;
  else if (name == "linf-shift") f.kind = FamilyKind::linf_shift;
  else if (name == "c0-shift") f.kind = FamilyKind::c0_shift;
  else n.at("family").error("unknown family \"" + name + "\"");
  if (n.has("truncation")) {
    long long k = n.at("truncation").integer();
    if (k < 1) n.at("truncation").error("truncation must be positive");
    f.truncation = Index(k);
  }
  if (n.has("interval")) {
    Node iv = n.at("interval");
    if (iv.array().size() != 2) iv.error("expected [a, b]");
    f.a = iv.at(std::size_t(0)).number();
    f.b = iv.at(1).number();
    if (!(f.a < f.b)) iv.error("need a < b");
    if (f.kind != FamilyKind::c0_shift && (f.a != 0.0 || f.b != 1.0)) iv.error(name + " lives on [0, 1]");
  }
  return OperatorFunction(f);
}

IntegralKind parse_integral_kind(const Node& n) {
  std::string s = n.string();
  if (s == "F_dg") return IntegralKind::F_dg;
  if (s == "dF_g") return IntegralKind::dF_g;
  if (s == "product_dt") return IntegralKind::product_dt;
  n.error("unknown integral \"" + s + "\" (expected F_dg, dF_g or product_dt)");
}

json to_json(const SpaceSpec& s) {
  if (s.kind == SpaceKind::sequence) return {{"kind", "sequence"}, {"norm", norm_name(s.norm)}};
  return {{"kind", "euclidean"}, {"dim", s.dim}, {"norm", norm_name(s.norm)}};
}

json to_json(const NormedVector& v) {
  json c = json::object();
  for (auto& [k, x] : v.coords()) c[std::to_string(k)] = x;
  json out{{"space", to_json(v.space())}, {"coords", c}};
  if (v.tail()) out["tail"] = {{"family", "harmonic-l2"}, {"start", v.tail()->start}, {"scale", v.tail()->scale}};
  return out;
}

json to_json(const Functional& f) {
  json c = json::object();
  for (auto& [k, x] : f.coords()) c[std::to_string(k)] = x;
  return {{"space", to_json(f.space())}, {"coords", c}};
}

json to_json(const Operator& A) {
  switch (A.kind()) {
    case Operator::Kind::matrix: {
      const DenseMatrix& m = A.mat();
      json rows = json::array();
      for (int i = 0; i < m.rows; ++i) {
        json r = json::array();
        for (int k = 0; k < m.cols; ++k) r.push_back(m(i, k));
        rows.push_back(r);
      }
      return {{"kind", "matrix"}, {"data", rows}, {"domain_norm", norm_name(A.domain().norm)},
              {"codomain_norm", norm_name(A.codomain().norm)}};
    }
    case Operator::Kind::scalar_to_vector: return {{"kind", "scalar_to_vector"}, {"vector", to_json(A.column())}};
    default: {
      json ts = json::array();
      for (const auto& t : A.terms()) ts.push_back({{"functional", to_json(t.f)}, {"vector", to_json(t.v)}});
      return {{"kind", "finite_rank"}, {"domain", to_json(A.domain())}, {"codomain", to_json(A.codomain())},
              {"terms", ts}};
    }
  }
}

json to_json(const VariationReport& r) {
  json w = json::array();
  for (const auto& x : r.witness) w.push_back(to_json(x));
  json out{{"value", r.value},   {"exact", r.exact},         {"lower", r.lower},   {"upper", r.upper},
           {"divergent", r.divergent}, {"method", r.method}, {"division", r.division}, {"witness", w}};
  if (!r.witness_ops.empty()) {
    json ops = json::array();
    for (const auto& G : r.witness_ops) ops.push_back(to_json(G));
    out["witness_ops"] = ops;
  }
  if (r.functional) out["functional"] = to_json(*r.functional);
  return out;
}

json to_json(const ConvergenceTrace& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({r.n, r.value, r.target, r.gap});
  return {{"name", t.name}, {"columns", {"n", "value", "target", "gap"}}, {"rows", rows}};
}

}  // namespace semivar::json_io
