#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json_io.hpp"

namespace semivar::commands {

struct Settings {
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

std::uint64_t fnv1a(std::string_view s);

// {command, inputs_digest, outputs, assertions, pass, traces}. Throws
// semivar::Error on bad requests.
json_io::json run(const std::string& command, const json_io::json& request, const Settings& s);

}  // namespace semivar::commands
