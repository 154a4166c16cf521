#ifndef RMPIR_H
#define RMPIR_H

/* C interface to the rmpir library. Every function returning int reports an
 * rmpir_status; on failure rmpir_last_error() describes the problem for the
 * calling thread. Strings handed out by the library are released with
 * rmpir_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RMPIR_API __declspec(dllexport)
#else
#define RMPIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmpir_status {
  RMPIR_OK = 0,
  RMPIR_INVALID_ARGUMENT = 1,
  RMPIR_SPEC_MISMATCH = 2,
  RMPIR_DIVISION_BY_ZERO = 3,
  RMPIR_INCONSISTENT_SYSTEM = 4,
  RMPIR_DECODING_FAILURE = 5,
  RMPIR_CONFIG = 6,
  RMPIR_IO = 7,
  RMPIR_CHECK_MISMATCH = 8,
  RMPIR_INTERNAL = 9
} rmpir_status;

typedef enum rmpir_format { RMPIR_FORMAT_CSV = 0, RMPIR_FORMAT_JSON = 1 } rmpir_format;

typedef struct rmpir_field rmpir_field;
typedef struct rmpir_code rmpir_code;
typedef struct rmpir_experiment rmpir_experiment;

RMPIR_API const char* rmpir_version(void);
RMPIR_API const char* rmpir_strerror(int status);
RMPIR_API const char* rmpir_last_error(void);
RMPIR_API void rmpir_string_free(char* s);

/* GF(p^s). modulus lists s + 1 coefficients low to high; it may be NULL when
 * p = 2, selecting the built-in primitive polynomial. */
RMPIR_API int rmpir_field_create(unsigned p, unsigned s, const unsigned* modulus,
                                 size_t modulus_len, rmpir_field** out);
RMPIR_API void rmpir_field_destroy(rmpir_field* field);
RMPIR_API uint32_t rmpir_field_order(const rmpir_field* field);
RMPIR_API int rmpir_field_add(const rmpir_field* field, uint32_t a, uint32_t b,
                              uint32_t* out);
RMPIR_API int rmpir_field_mul(const rmpir_field* field, uint32_t a, uint32_t b,
                              uint32_t* out);
RMPIR_API int rmpir_field_inv(const rmpir_field* field, uint32_t a, uint32_t* out);

/* Gabidulin code G(n, k) on the points alpha^0 .. alpha^(n-1). */
RMPIR_API int rmpir_code_create(const rmpir_field* field, size_t n, size_t k,
                                rmpir_code** out);
RMPIR_API void rmpir_code_destroy(rmpir_code* code);
RMPIR_API int rmpir_code_encode(const rmpir_code* code, const uint32_t* message,
                                size_t k, uint32_t* codeword, size_t n);
/* Corrects up to max_errors rank errors outside the erased coordinates;
 * RMPIR_DECODING_FAILURE when no codeword is close enough. */
RMPIR_API int rmpir_code_decode(const rmpir_code* code, const uint32_t* received,
                                size_t n, const size_t* erased, size_t erased_len,
                                size_t max_errors, uint32_t* message, size_t k);

/* Experiments are described by the JSON configuration format. */
RMPIR_API int rmpir_experiment_create(const char* json, rmpir_experiment** out);
RMPIR_API int rmpir_experiment_load(const char* path, rmpir_experiment** out);
RMPIR_API void rmpir_experiment_destroy(rmpir_experiment* exp);
RMPIR_API int rmpir_experiment_set_kind(rmpir_experiment* exp, const char* kind);
RMPIR_API int rmpir_experiment_set_seed(rmpir_experiment* exp, uint64_t seed);
RMPIR_API int rmpir_experiment_set_trials(rmpir_experiment* exp, uint64_t trials);
RMPIR_API int rmpir_experiment_set_variant(rmpir_experiment* exp, const char* variant);
RMPIR_API int rmpir_experiment_set_threads(rmpir_experiment* exp, unsigned threads);
RMPIR_API int rmpir_experiment_validate(const rmpir_experiment* exp);
RMPIR_API int rmpir_experiment_digest(const rmpir_experiment* exp, char** out);
/* Runs the configured experiment and renders its result rows. all_pass (may
 * be NULL) receives 1 when every checked row passed. */
RMPIR_API int rmpir_experiment_run(const rmpir_experiment* exp, int format,
                                   int include_runtime, char** out, int* all_pass);
/* JSON lines for the first trial of a roundtrip run. */
RMPIR_API int rmpir_experiment_transcript(const rmpir_experiment* exp, char** out);

/* Reference numbers and the star-product generator matrix. table receives
 * the rendered rows, text a human-readable report (either may be NULL). */
RMPIR_API int rmpir_examples_report(int format, char** table, char** text,
                                    int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
