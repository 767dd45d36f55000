#ifndef BSSN_H
#define BSSN_H

/* C interface to the BSSN numerical laboratory.
 *
 * Runs take a command name and a JSON config and return an opaque report
 * holding the JSON report, its CSV projection and the pass flag. Errors are
 * returned as status codes; bssn_last_error() gives the message for the
 * calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(BSSN_BUILDING)
#    define BSSN_API __declspec(dllexport)
#  else
#    define BSSN_API __declspec(dllimport)
#  endif
#else
#  define BSSN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bssn_status {
  BSSN_OK = 0,
  BSSN_ERR_NULL_POINTER = 1,
  BSSN_ERR_PARSE = 2,
  BSSN_ERR_INVALID_ARGUMENT = 3,
  BSSN_ERR_DIMENSION = 4,
  BSSN_ERR_NUMERIC = 5,
  BSSN_ERR_UNDEFINED = 6, /* value does not exist, e.g. Mandel Q of an empty mode */
  BSSN_ERR_INTERNAL = 7
} bssn_status;

typedef struct bssn_report bssn_report;

BSSN_API const char* bssn_version(void);
BSSN_API const char* bssn_status_name(bssn_status status);
/* Message of the last failed call on this thread; "" after a success. */
BSSN_API const char* bssn_last_error(void);

/* command: verify, family, compare, sweep, truncation or stats.
 * config_json may be NULL or "" for all defaults. */
BSSN_API bssn_status bssn_run(const char* command, const char* config_json, bssn_report** out);

BSSN_API int bssn_report_passed(const bssn_report* report);
BSSN_API const char* bssn_report_json(const bssn_report* report);
BSSN_API const char* bssn_report_csv(const bssn_report* report);
BSSN_API void bssn_report_free(bssn_report* report);

/* Closed-form value of quantity "eq14".."eq17". branch is "nominal" or
 * "shifted" (eq14 only; NULL means "nominal"). */
BSSN_API bssn_status bssn_analytic(const char* quantity, const char* branch, double kappa, double eta,
                                   double theta_bs, double x, double y, double* out);

/* Fock-space value of the same quantity for coherent inputs |x>|y> and
 * second-harmonic vacuum, at cutoffs dims[0..3] for modes a, b, A, B. */
BSSN_API bssn_status bssn_oracle(const char* quantity, const char* branch, double kappa, double eta,
                                 double theta_bs, double x, double y, const size_t dims[4], double* out);

#ifdef __cplusplus
}
#endif

#endif
