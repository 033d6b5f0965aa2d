/*
 * Copyright (c) 2026 The torsift authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the torsift shared library. Handles are opaque; every function
 * returns a torsift_status. Strings and buffers returned through out
 * parameters are owned by the caller and released with torsift_free().
 * On failure torsift_last_error() carries a thread-local message.
 */

#ifndef TORSIFT_H
#define TORSIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TORSIFT_API __declspec(dllexport)
#else
#define TORSIFT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum torsift_status {
  TORSIFT_OK = 0,
  TORSIFT_ERR_IO = 1,
  TORSIFT_ERR_MALFORMED = 2,   /* malformed hive / cell structure */
  TORSIFT_ERR_TRUNCATED = 3,   /* data extends past input bounds */
  TORSIFT_ERR_NOT_FOUND = 4,   /* key or value absent */
  TORSIFT_ERR_BAD_HEADER = 5,  /* blob magic mismatch or blob too short */
  TORSIFT_ERR_DECODE = 6,
  TORSIFT_ERR_RANGE = 7,       /* timestamp outside 1601..9999 */
  TORSIFT_ERR_COLLISION = 8,   /* fixture string collides with a signature */
  TORSIFT_ERR_OVERLAP = 9,     /* overlapping or out-of-bounds plants */
  TORSIFT_ERR_CONFIG = 10,     /* invalid configuration or manifest */
  TORSIFT_ERR_INVALID_ARG = 11,
  TORSIFT_ERR_INTERNAL = 12
} torsift_status;

/* Output format selectors. */
#define TORSIFT_FORMAT_MACHINE 0
#define TORSIFT_FORMAT_HUMAN 1

TORSIFT_API const char* torsift_version(void);
TORSIFT_API const char* torsift_status_name(int status);
/* Thread-local message for the last failing call on this thread. */
TORSIFT_API const char* torsift_last_error(void);
TORSIFT_API void torsift_free(void* ptr);

/* ---- signature database ---- */

typedef struct torsift_db torsift_db;

TORSIFT_API torsift_status torsift_db_default(torsift_db** out);
/* Defaults overlaid with per-field replacements from a JSON file. */
TORSIFT_API torsift_status torsift_db_load(const char* path, torsift_db** out);
TORSIFT_API void torsift_db_free(torsift_db* db);
TORSIFT_API torsift_status torsift_db_json(const torsift_db* db, char** json_out);

/* ---- registry hive ---- */

typedef struct torsift_hive torsift_hive;

TORSIFT_API torsift_status torsift_hive_open_file(const char* path, torsift_hive** out);
TORSIFT_API torsift_status torsift_hive_open_bytes(const uint8_t* data, size_t len,
                                                   torsift_hive** out);
TORSIFT_API void torsift_hive_free(torsift_hive* hive);

/* Key info plus subkeys and values as JSON; key_path "" is the root. */
TORSIFT_API torsift_status torsift_hive_ls(torsift_hive* hive, const char* key_path,
                                           char** json_out);
/* Raw value data; value_name "" selects the default value. */
TORSIFT_API torsift_status torsift_hive_read_value(torsift_hive* hive, const char* key_path,
                                                   const char* value_name, uint8_t** data_out,
                                                   size_t* len_out);
/* Full paths of keys whose name contains fragment (case-insensitive), JSON. */
TORSIFT_API torsift_status torsift_hive_find_keys(torsift_hive* hive, const char* fragment,
                                                  char** json_out);

/* ---- scanning ---- */

struct torsift_scan_options {
  uint64_t chunk_size;      /* streaming stride in bytes */
  uint64_t max_record_len;  /* record carve bound */
  uint64_t context_radius;  /* keyword context bytes per side */
  uint64_t endpoint_window; /* obfs4 endpoint search radius */
  unsigned threads;
};

TORSIFT_API void torsift_scan_options_init(struct torsift_scan_options* opts);

/* Decode a shellactivities value blob. */
TORSIFT_API torsift_status torsift_shellact_parse(const uint8_t* blob, size_t len, int format,
                                                  char** out);

/* Signature/keyword/URL/endpoint/record scan over a raw image file. */
TORSIFT_API torsift_status torsift_carve_file(const char* path, const torsift_db* db,
                                              const struct torsift_scan_options* opts,
                                              int format, char** out);

/* Memory-image triage (RAM dump, pagefile.sys, hiberfil.sys). */
TORSIFT_API torsift_status torsift_memscan_file(const char* path, const torsift_db* db,
                                                const struct torsift_scan_options* opts,
                                                int format, char** out);

/* ---- methodology run ---- */

/*
 * case_config_json: {"case_id": ..., "sources": [{"id","role","path"}]} with
 * role one of "hive" | "memory" | "raw"; relative paths resolve against
 * base_dir. report_time_utc (e.g. "2026-01-02T03:04:05Z") is required: report
 * creation time is an input, which keeps rendering byte-reproducible.
 * case_id may be NULL to take the config's value.
 */
TORSIFT_API torsift_status torsift_run_case(const char* case_config_json, const char* base_dir,
                                            const torsift_db* db, const char* case_id,
                                            const char* report_time_utc,
                                            const struct torsift_scan_options* opts, int format,
                                            char** out);

/* ---- fixture synthesis ---- */

/*
 * kind: "blob" | "hive" | "noise"; manifest_json is the matching fixture
 * description. db (optional) supplies the signature set that noise is kept
 * free of; NULL uses the defaults.
 */
TORSIFT_API torsift_status torsift_synth(const char* kind, const char* manifest_json,
                                         const torsift_db* db, uint8_t** data_out,
                                         size_t* len_out);

#ifdef __cplusplus
}
#endif

#endif /* TORSIFT_H */
