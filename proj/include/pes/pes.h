#ifndef PES_PES_H
#define PES_PES_H

/* C interface to the PES timed model checker. All strings are UTF-8 and NUL-terminated.
 * Strings returned through `char**` must be released with pes_string_free. Functions
 * returning pes_status record a message retrievable with pes_last_error on failure;
 * the message is per thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PES_BUILDING_LIBRARY)
#define PES_API __declspec(dllexport)
#else
#define PES_API __declspec(dllimport)
#endif
#else
#define PES_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pes_status {
  PES_OK = 0,
  PES_ERR_LEX = 1,
  PES_ERR_SYNTAX = 2,
  PES_ERR_UNRESOLVED = 3,
  PES_ERR_DUPLICATE = 4,
  PES_ERR_VALIDATION = 5,
  PES_ERR_CONFIG = 6,
  PES_ERR_RESOURCE = 7,
  PES_ERR_ORACLE_LIMIT = 8,
  PES_ERR_INVALID_ARGUMENT = 9,
  PES_ERR_INTERNAL = 10
} pes_status;

typedef struct pes_file pes_file;

typedef struct pes_param {
  const char* name;
  int32_t value;
} pes_param;

typedef struct pes_stats {
  uint64_t nodes_expanded;
  uint64_t zones_created;
  uint64_t peak_zones;
  uint64_t universe_zones;
  uint64_t locations;
  uint64_t iterations;
  double milliseconds;
} pes_stats;

typedef struct pes_check_options {
  size_t max_zones; /* 0 selects the default cap */
} pes_check_options;

typedef struct pes_cell {
  const char* family;
  int n;
  const char* category;
  int expected_valid;
} pes_cell;

PES_API const char* pes_version(void);
PES_API const char* pes_status_name(pes_status status);
PES_API const char* pes_last_error(void);
PES_API void pes_string_free(char* s);

/* Parses source text; `params` replace #define values (may be NULL when count is 0). */
PES_API pes_status pes_parse(const char* source, const pes_param* params, size_t param_count,
                             pes_file** out);
PES_API void pes_file_destroy(pes_file* file);

/* Canonical concrete syntax of a parsed file. */
PES_API pes_status pes_print(const pes_file* file, char** out);

/* Symbolic check; *satisfied is 1 when the initial state satisfies the start variable.
 * `options` and `stats` may be NULL. */
PES_API pes_status pes_check(const pes_file* file, const pes_check_options* options,
                             int* satisfied, pes_stats* stats);

/* Brute-force check over the region graph; for small models only. */
PES_API pes_status pes_oracle_check(const pes_file* file, int* satisfied, pes_stats* stats);

/* Benchmark source text for family/n/category. */
PES_API pes_status pes_generate(const char* family, int n, const char* category,
                                const pes_param* params, size_t param_count, char** out);

/* Expected verdict of a benchmark; *known is 0 when no expectation exists. */
PES_API pes_status pes_expected_verdict(const char* family, int n, const char* category,
                                        int* known, int* valid);

/* Verdict-table cells; index runs from 0 to pes_acceptance_cell_count() - 1. */
PES_API size_t pes_acceptance_cell_count(void);
PES_API pes_status pes_acceptance_cell(size_t index, pes_cell* out);

#ifdef __cplusplus
}
#endif

#endif
