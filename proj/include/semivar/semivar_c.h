#ifndef SEMIVAR_C_H
#define SEMIVAR_C_H

#include <stdint.h>

#if defined(_WIN32)
#define SEMIVAR_API __declspec(dllexport)
#else
#define SEMIVAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct semivar_context semivar_context;
typedef struct semivar_function semivar_function;

typedef enum semivar_status {
  SEMIVAR_OK = 0,
  SEMIVAR_E_ARGUMENT = 1,
  SEMIVAR_E_PARSE = 2,
  SEMIVAR_E_UNSUPPORTED = 3,
  SEMIVAR_E_LIMIT_DOES_NOT_EXIST = 4,
  SEMIVAR_E_NO_CONVERGENCE = 5,
  SEMIVAR_E_DEPTH_EXCEEDED = 6,
  SEMIVAR_E_INTERNAL = 99
} semivar_status;

SEMIVAR_API const char* semivar_status_name(semivar_status s);
SEMIVAR_API const char* semivar_version(void);

SEMIVAR_API semivar_status semivar_context_create(semivar_context** out);
SEMIVAR_API void semivar_context_destroy(semivar_context* ctx);
SEMIVAR_API semivar_status semivar_context_set_seed(semivar_context* ctx, uint64_t seed);
SEMIVAR_API semivar_status semivar_context_set_tol(semivar_context* ctx, double tol);
/* Message of the last failed call on ctx; "" after a success. Owned by ctx. */
SEMIVAR_API const char* semivar_last_error(const semivar_context* ctx);

/* Step function or family from its JSON description. */
SEMIVAR_API semivar_status semivar_function_parse(semivar_context* ctx, const char* json, semivar_function** out);
SEMIVAR_API void semivar_function_destroy(semivar_function* f);
SEMIVAR_API semivar_status semivar_function_interval(const semivar_function* f, double* a, double* b);

/* Reports come back as JSON strings released with semivar_string_free.
   c > d (e.g. both NaN) selects the whole interval. */
SEMIVAR_API semivar_status semivar_semivariation(semivar_context* ctx, const semivar_function* f, double c, double d,
                                                 char** report_json);
SEMIVAR_API semivar_status semivar_variation(semivar_context* ctx, const semivar_function* f, double c, double d,
                                             char** report_json);
SEMIVAR_API semivar_status semivar_eval(semivar_context* ctx, const semivar_function* f, double t,
                                        char** operator_json);

/* Command-level entry: reproduce, sv, var, integrate, helly, characterize,
   series. The result is {command, inputs_digest, outputs, assertions, pass,
   traces}. */
SEMIVAR_API semivar_status semivar_run(semivar_context* ctx, const char* command, const char* request_json,
                                       char** report_json);

SEMIVAR_API void semivar_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
