#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semivar/semivar_c.h"

using nlohmann::json;

namespace {

struct Options {
  std::string example, input, spec, csv_dir;
  std::vector<double> interval;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": $: malformed JSON: " + e.what());
  }
}

void write_csv(const std::string& dir, const json& trace) {
  std::filesystem::create_directories(dir);
  std::string path = (std::filesystem::path(dir) / (trace["name"].get<std::string>() + ".csv")).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "n,value,target,gap\n";
  char buf[128];
  for (const auto& row : trace["rows"]) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row[0].get<double>(), row[1].get<double>(),
                  row[2].get<double>(), row[3].get<double>());
    out << buf;
  }
}

int run(const std::string& command, const json& request, const Options& o) {
  semivar_context* ctx = nullptr;
  if (semivar_context_create(&ctx) != SEMIVAR_OK) return 2;
  semivar_context_set_seed(ctx, o.seed);
  if (semivar_context_set_tol(ctx, o.tol) != SEMIVAR_OK) {
    std::cerr << "error: " << semivar_last_error(ctx) << "\n";
    semivar_context_destroy(ctx);
    return 2;
  }
  auto t0 = std::chrono::steady_clock::now();
  char* out = nullptr;
  semivar_status st = semivar_run(ctx, command.c_str(), request.dump().c_str(), &out);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (st != SEMIVAR_OK) {
    std::cerr << "error (" << semivar_status_name(st) << "): " << semivar_last_error(ctx) << "\n";
    semivar_context_destroy(ctx);
    return 2;
  }
  json report = json::parse(out);
  semivar_string_free(out);
  semivar_context_destroy(ctx);

  json summary = json::array();
  for (const auto& t : report["traces"]) {
    if (!o.csv_dir.empty()) write_csv(o.csv_dir, t);
    summary.push_back({{"name", t["name"]}, {"rows", t["rows"].size()}});
  }
  report["traces"] = summary;
  std::cout << report.dump(2) << "\n";

  std::cerr << report["command"].get<std::string>() << "\n";
  for (const auto& a : report["assertions"])
    std::cerr << "  " << (a["pass"].get<bool>() ? "PASS " : "FAIL ") << a["name"].get<std::string>() << ": "
              << a["relation"].get<std::string>() << "\n";
  std::cerr << (report["pass"].get<bool>() ? "pass" : "FAIL") << " (" << ms << " ms)\n";
  return report["pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semivariation, variation and Kurzweil-Stieltjes integrals of operator-valued functions"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "integration tolerance")->default_val(1e-9);
  app.add_option("--seed", o.seed, "seed for every sampler")->default_val(0);
  app.add_option("--csv", o.csv_dir, "directory for trace CSV files");

  auto* reproduce = app.add_subcommand("reproduce", "run the assertion set of a reference example");
  reproduce->add_option("example", o.example)
      ->required()
      ->check(CLI::IsMember({"ex1", "ex-add", "ex-linf", "ex-c0", "dr-series"}));

  auto* sv = app.add_subcommand("sv", "semivariation of a function");
  auto* var = app.add_subcommand("var", "variation of a function");
  for (auto* sub : {sv, var}) {
    sub->add_option("--input", o.input, "function JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--interval", o.interval, "subinterval c d")->expected(2);
  }
  auto* characterize = app.add_subcommand("characterize", "SV through left-continuous step integrators");
  characterize->add_option("--input", o.input, "step function JSON")->required()->check(CLI::ExistingFile);
  for (const char* name : {"integrate", "helly", "series"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " from a JSON spec");
    sub->add_option("--spec", o.spec, "spec JSON")->required()->check(CLI::ExistingFile);
  }
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();
    json req = json::object();
    if (cmd == "reproduce") {
      req["example"] = o.example;
    } else if (cmd == "sv" || cmd == "var" || cmd == "characterize") {
      req["function"] = load(o.input);
      if (!o.interval.empty()) req["interval"] = o.interval;
    } else {
      req = load(o.spec);
    }
    return run(cmd, req, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
