#ifndef KMSPHASE_H
#define KMSPHASE_H

/* C interface to the kmsphase library. Every call returns a kms_status; on
 * failure kms_last_error() describes it (per thread). Output strings are
 * allocated by the library and released with kms_free. */

#include <stdint.h>

#if defined(_WIN32)
#define KMS_API __declspec(dllexport)
#else
#define KMS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kms_status {
  KMS_OK = 0,
  KMS_ERR_CONFIG = 1,
  KMS_ERR_DOMAIN = 2,
  KMS_ERR_NOT_COPRIME = 3,
  KMS_ERR_SCAN_BOUND_TOO_SMALL = 4,
  KMS_ERR_OUT_OF_TRUNCATION = 5,
  KMS_ERR_EMPTY_SEQUENCE = 6,
  KMS_ERR_ARGUMENT = 7,
  KMS_ERR_INTERNAL = 8
} kms_status;

typedef enum kms_format { KMS_FORMAT_JSON = 0, KMS_FORMAT_TEXT = 1 } kms_format;

typedef struct kms_session kms_session;

KMS_API const char* kms_version(void);
KMS_API const char* kms_last_error(void);
KMS_API const char* kms_status_name(kms_status status);
KMS_API void kms_free(char* s);

/* config_json: the analysis config document; NULL or "" means all defaults. */
KMS_API kms_status kms_session_create(const char* config_json, kms_session** out);
KMS_API void kms_session_destroy(kms_session* session);

/* The resolved config (with defaults filled in) as JSON. */
KMS_API kms_status kms_session_config(const kms_session* session, char** out);

KMS_API kms_status kms_analyze(const kms_session* session, kms_format format, char** out, int* all_pass);
KMS_API kms_status kms_classes(const kms_session* session, char** out);
/* cls: a class index ("2") or an ideal ("[2]", "[a,b,c]"). bound 0 takes the config default. */
KMS_API kms_status kms_zeta(const kms_session* session, const char* cls, double s, uint64_t bound, char** out);
/* mode: "series" or "euler". */
KMS_API kms_status kms_lfunc(const kms_session* session, int character, double s, uint64_t bound,
                             const char* mode, char** out);
KMS_API kms_status kms_primes(const kms_session* session, uint64_t bound, char** out);
KMS_API kms_status kms_pairs(const kms_session* session, const char* cls, double lambda, double epsilon,
                             double beta, uint64_t budget, char** out);
KMS_API kms_status kms_measure_check(const kms_session* session, double beta, int cap, uint64_t prime_bound,
                                     uint64_t samples, char** out, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
