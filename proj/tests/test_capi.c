#include <math.h>
#include <stdio.h>
#include <string.h>

#include "semivar/semivar_c.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

int main(void) {
  semivar_context* ctx = NULL;
  EXPECT(semivar_context_create(&ctx) == SEMIVAR_OK);
  EXPECT(strcmp(semivar_last_error(ctx), "") == 0);

  semivar_function* f = NULL;
  EXPECT(semivar_function_parse(ctx, "{\"family\":\"ex1-harmonic\"}", &f) == SEMIVAR_OK);
  double a = -1, b = -1;
  EXPECT(semivar_function_interval(f, &a, &b) == SEMIVAR_OK && a == 0.0 && b == 1.0);

  char* out = NULL;
  EXPECT(semivar_semivariation(ctx, f, 0.5, 1.0, &out) == SEMIVAR_OK);
  EXPECT(out && strstr(out, "\"value\":0.5") != NULL);
  semivar_string_free(out);
  out = NULL;
  EXPECT(semivar_semivariation(ctx, f, NAN, NAN, &out) == SEMIVAR_OK);
  EXPECT(out && strstr(out, "\"exact\":true") != NULL);
  semivar_string_free(out);
  out = NULL;
  EXPECT(semivar_variation(ctx, f, NAN, NAN, &out) == SEMIVAR_OK);
  EXPECT(out && strstr(out, "\"divergent\":true") != NULL);
  semivar_string_free(out);
  out = NULL;
  EXPECT(semivar_eval(ctx, f, 1.0, &out) == SEMIVAR_OK);
  EXPECT(out && strstr(out, "scalar_to_vector") != NULL);
  semivar_string_free(out);
  out = NULL;
  EXPECT(semivar_semivariation(ctx, f, 0.5, 2.0, &out) == SEMIVAR_E_ARGUMENT);
  EXPECT(strlen(semivar_last_error(ctx)) > 0);
  semivar_function_destroy(f);

  semivar_function* g = NULL;
  EXPECT(semivar_function_parse(ctx, "{\"interval\":[0,1],\"open_values\":[1]}", &g) == SEMIVAR_E_PARSE);
  EXPECT(g == NULL);
  EXPECT(strstr(semivar_last_error(ctx), "point_values") != NULL);
  EXPECT(semivar_function_parse(ctx, "{", &g) == SEMIVAR_E_PARSE);

  EXPECT(semivar_run(ctx, "reproduce", "{\"example\":\"ex-add\"}", &out) == SEMIVAR_OK);
  EXPECT(out && strstr(out, "\"pass\":true") != NULL);
  EXPECT(strcmp(semivar_last_error(ctx), "") == 0);
  semivar_string_free(out);
  out = NULL;
  EXPECT(semivar_run(ctx, "frobnicate", "{}", &out) == SEMIVAR_E_ARGUMENT);
  EXPECT(semivar_context_set_tol(ctx, -1.0) == SEMIVAR_E_ARGUMENT);
  EXPECT(semivar_context_set_seed(ctx, 42) == SEMIVAR_OK);
  EXPECT(strcmp(semivar_status_name(SEMIVAR_E_NO_CONVERGENCE), "no-convergence") == 0);
  EXPECT(semivar_context_create(NULL) == SEMIVAR_E_ARGUMENT);
  semivar_context_destroy(ctx);

  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}
