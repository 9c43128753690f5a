#ifndef GAUGE_COLOR_H
#define GAUGE_COLOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bumped on any incompatible change to the functions or types below.
 */
#define GCC_ABI_VERSION 1

typedef enum GccStatus {
  GCC_STATUS_OK = 0,
  GCC_STATUS_NULL_POINTER = -1,
  GCC_STATUS_INVALID_PARAMETER = -2,
  GCC_STATUS_VERIFICATION_FAILED = -3,
  GCC_STATUS_IO = -4,
  GCC_STATUS_INVALID_UTF8 = -5,
  GCC_STATUS_INTERNAL = -6,
  GCC_STATUS_PANIC = -7,
} GccStatus;

/**
 * A gauge color code on a lattice.
 */
typedef struct GccCode GccCode;

/**
 * A closed colored complex.
 */
typedef struct GccLattice GccLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t gcc_abi_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `cap > 0`). Returns the full message length in
 * bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t gcc_last_error_message(char *buf, size_t cap);

/**
 * Builds and closes a family lattice. `family` is 2 or 3.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum GccStatus gcc_lattice_build(uint32_t family, uint32_t n, struct GccLattice **out);

/**
 * Parses and validates lattice JSON. Open complexes are rejected.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
enum GccStatus gcc_lattice_from_json(const char *json, struct GccLattice **out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_lattice_qubit_count(const struct GccLattice *lattice, size_t *out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_lattice_to_json(const struct GccLattice *lattice, char **out);

/**
 * # Safety
 * `lattice` must be null or a handle not yet freed.
 */
void gcc_lattice_free(struct GccLattice *lattice);

/**
 * Builds the (d,e) code. The code keeps its own reference to the lattice.
 *
 * # Safety
 * `lattice` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_code_build(const struct GccLattice *lattice,
                              uint32_t d,
                              uint32_t e,
                              struct GccCode **out);

/**
 * # Safety
 * `code` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_code_num_qubits(const struct GccCode *code, size_t *out);

/**
 * # Safety
 * `code` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_code_stabilizer_rank(const struct GccCode *code, size_t *out);

/**
 * # Safety
 * `code` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_code_gauge_rank(const struct GccCode *code, size_t *out);

/**
 * Runs the lattice and code structure checks. `pass` receives the overall
 * verdict; `report_json`, if not null, receives the report as JSON.
 *
 * # Safety
 * `code` must be a live handle; `pass` a valid pointer; `report_json` null
 * or valid.
 */
enum GccStatus gcc_code_verify(const struct GccCode *code, bool *pass, char **report_json);

/**
 * Transversal R_level plan as JSON `{n, k, T, exponents}`.
 *
 * # Safety
 * `code` must be a live handle; `out` a valid pointer.
 */
enum GccStatus gcc_code_gate_plan_json(const struct GccCode *code, uint32_t level, char **out);

/**
 * Writes stabilizer, gauge and logical check matrices into `dir`.
 *
 * # Safety
 * `code` must be a live handle; `dir` a NUL-terminated path.
 */
enum GccStatus gcc_code_export(const struct GccCode *code, const char *dir);

/**
 * # Safety
 * `code` must be null or a handle not yet freed.
 */
void gcc_code_free(struct GccCode *code);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gcc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUGE_COLOR_H */
