#include "semivar/semivar_c.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "commands.hpp"

struct semivar_context {
  semivar::commands::Settings settings;
  std::string last_error;
};

struct semivar_function {
  semivar::OperatorFunction f;
};

namespace {

using semivar::json_io::json;

semivar_status status_of(semivar::ErrorCode c) { return static_cast<semivar_status>(static_cast<int>(c)); }

template <class Fn>
semivar_status guarded(semivar_context* ctx, Fn fn) {
  if (!ctx) return SEMIVAR_E_ARGUMENT;
  try {
    fn();
    ctx->last_error.clear();
    return SEMIVAR_OK;
  } catch (const semivar::Error& e) {
    ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    ctx->last_error = std::string("internal error: ") + e.what();
    return SEMIVAR_E_INTERNAL;
  } catch (...) {
    ctx->last_error = "internal error";
    return SEMIVAR_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(bool ok, const char* what) {
  if (!ok) semivar::fail(semivar::ErrorCode::argument, what);
}

std::pair<double, double> resolve(const semivar::OperatorFunction& f, double c, double d) {
  if (!(c <= d) || std::isnan(c)) return {f.a(), f.b()};
  need(f.a() <= c && c < d && d <= f.b(), "need a <= c < d <= b");
  return {c, d};
}

semivar::SearchOptions options(const semivar_context* ctx) {
  semivar::SearchOptions o;
  o.seed = ctx->settings.seed;
  return o;
}

}  // namespace

extern "C" {

const char* semivar_status_name(semivar_status s) {
  switch (s) {
    case SEMIVAR_OK: return "ok";
    case SEMIVAR_E_ARGUMENT: return "argument";
    case SEMIVAR_E_PARSE: return "parse";
    case SEMIVAR_E_UNSUPPORTED: return "unsupported";
    case SEMIVAR_E_LIMIT_DOES_NOT_EXIST: return "limit-does-not-exist";
    case SEMIVAR_E_NO_CONVERGENCE: return "no-convergence";
    case SEMIVAR_E_DEPTH_EXCEEDED: return "depth-exceeded";
    default: return "internal";
  }
}

const char* semivar_version(void) { return "0.1.0"; }

semivar_status semivar_context_create(semivar_context** out) {
  if (!out) return SEMIVAR_E_ARGUMENT;
  *out = new (std::nothrow) semivar_context();
  return *out ? SEMIVAR_OK : SEMIVAR_E_INTERNAL;
}

void semivar_context_destroy(semivar_context* ctx) { delete ctx; }

semivar_status semivar_context_set_seed(semivar_context* ctx, uint64_t seed) {
  return guarded(ctx, [&] { ctx->settings.seed = seed; });
}

semivar_status semivar_context_set_tol(semivar_context* ctx, double tol) {
  return guarded(ctx, [&] {
    need(tol > 0.0 && std::isfinite(tol), "tol must be positive");
    ctx->settings.tol = tol;
  });
}

const char* semivar_last_error(const semivar_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

semivar_status semivar_function_parse(semivar_context* ctx, const char* text, semivar_function** out) {
  return guarded(ctx, [&] {
    need(text && out, "null argument");
    *out = nullptr;
    json j = semivar::json_io::parse_text(text);
    *out = new semivar_function{semivar::json_io::parse_function(semivar::json_io::root(j))};
  });
}

void semivar_function_destroy(semivar_function* f) { delete f; }

semivar_status semivar_function_interval(const semivar_function* f, double* a, double* b) {
  if (!f || !a || !b) return SEMIVAR_E_ARGUMENT;
  *a = f->f.a();
  *b = f->f.b();
  return SEMIVAR_OK;
}

semivar_status semivar_semivariation(semivar_context* ctx, const semivar_function* f, double c, double d,
                                     char** report_json) {
  return guarded(ctx, [&] {
    need(f && report_json, "null argument");
    auto [lo, hi] = resolve(f->f, c, d);
    *report_json = dup_string(semivar::json_io::to_json(semivar::semivariation(f->f, lo, hi, options(ctx))).dump());
  });
}

semivar_status semivar_variation(semivar_context* ctx, const semivar_function* f, double c, double d,
                                 char** report_json) {
  return guarded(ctx, [&] {
    need(f && report_json, "null argument");
    auto [lo, hi] = resolve(f->f, c, d);
    auto r = semivar::variation(f->f, lo, hi, std::nullopt, options(ctx));
    *report_json = dup_string(semivar::json_io::to_json(r).dump());
  });
}

semivar_status semivar_eval(semivar_context* ctx, const semivar_function* f, double t, char** operator_json) {
  return guarded(ctx, [&] {
    need(f && operator_json, "null argument");
    *operator_json = dup_string(semivar::json_io::to_json(f->f.eval(t)).dump());
  });
}

semivar_status semivar_run(semivar_context* ctx, const char* command, const char* request_json, char** report_json) {
  return guarded(ctx, [&] {
    need(command && request_json && report_json, "null argument");
    json req = semivar::json_io::parse_text(request_json);
    *report_json = dup_string(semivar::commands::run(command, req, ctx->settings).dump());
  });
}

void semivar_string_free(char* s) { std::free(s); }

}  // extern "C"
