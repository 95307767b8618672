#pragma once

#include <string>

#include "json.hpp"
#include "semivar/analysis.hpp"

namespace semivar::json_io {

using nlohmann::json;

// A JSON node together with its location, for schema errors like
// "$.F.open_values[2].data: expected an array".
struct Node {
  const json& j;
  std::string path;

  Node at(const char* key) const;
  Node at(std::size_t i) const;
  bool has(const char* key) const { return j.is_object() && j.contains(key); }
  [[noreturn]] void error(const std::string& what) const;

  double number() const;
  long long integer() const;
  std::string string() const;
  bool boolean() const;
  const json& array() const;
  const json& object() const;
};

inline Node root(const json& j) { return Node{j, "$"}; }

json parse_text(const std::string& text);

SpaceSpec parse_space(const Node& n);
NormedVector parse_vector(const Node& n, const SpaceSpec* expect = nullptr);
Functional parse_functional(const Node& n);
Operator parse_operator(const Node& n);
// Step or closed-form family.
OperatorFunction parse_function(const Node& n);
OpStep parse_op_step(const Node& n);
VectorStep parse_vector_step(const Node& n);
IntegralKind parse_integral_kind(const Node& n);

json to_json(const SpaceSpec& s);
json to_json(const NormedVector& v);
json to_json(const Functional& f);
json to_json(const Operator& A);
json to_json(const VariationReport& r);
json to_json(const ConvergenceTrace& t);

}  // namespace semivar::json_io
