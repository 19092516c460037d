#ifndef SPINFUSE_H
#define SPINFUSE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_PRECONDITION = 3,
  SF_STATUS_WRONG_MODEL = 4,
  SF_STATUS_SIZE_LIMIT = 5,
  SF_STATUS_PARSE = 6,
  SF_STATUS_IO = 7,
  SF_STATUS_INTERNAL = 8,
} SfStatus;

// Opaque circuit handle.
typedef struct SfCircuit SfCircuit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. Valid until the next
// failing call on the same thread.
const char *sf_last_error(void);

const char *sf_version(void);

// Random-parameter Trotter circuit. `model` is one of `ising`, `kitaev`,
// `xy`, `tfim`, `tfxy`; `axes` may be null for the model default.
//
// # Safety
// `model` and a non-null `axes` must be NUL-terminated strings; `out` must
// be writable.
enum SfStatus sf_generate(const char *model,
                          const char *axes,
                          size_t n_spins,
                          size_t n_steps,
                          double dt,
                          uint64_t seed,
                          struct SfCircuit **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum SfStatus sf_circuit_from_json(const char *json, struct SfCircuit **out);

// # Safety
// `c` must be a live handle; `out` must be writable.
enum SfStatus sf_circuit_to_json(const struct SfCircuit *c, char **out);

// # Safety
// `c` must be a live handle; `out` must be writable.
enum SfStatus sf_circuit_to_qasm(const struct SfCircuit *c, char **out);

// Compresses to a square of depth N. A negative `tau` treats the input as
// a time-dependent schedule; `tau ≥ 0` treats it as one repeated step and
// applies that many self-merges.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum SfStatus sf_circuit_compress(const struct SfCircuit *c, int32_t tau, struct SfCircuit **out);

// # Safety
// `c` must be a live handle or null.
size_t sf_circuit_n_spins(const struct SfCircuit *c);

// # Safety
// `c` must be a live handle or null.
size_t sf_circuit_gate_count(const struct SfCircuit *c);

// # Safety
// `c` must be a live handle or null.
size_t sf_circuit_depth(const struct SfCircuit *c);

// Frobenius distance between the dense unitaries of two circuits.
//
// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum SfStatus sf_circuit_distance(const struct SfCircuit *a,
                                  const struct SfCircuit *b,
                                  bool phase_align,
                                  double *out);

// # Safety
// `c` must be null or a handle from this library not yet freed.
void sf_circuit_free(struct SfCircuit *c);

// # Safety
// `s` must be null or a string from this library not yet freed.
void sf_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPINFUSE_H */
