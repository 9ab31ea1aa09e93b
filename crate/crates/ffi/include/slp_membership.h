#ifndef SLP_MEMBERSHIP_H
#define SLP_MEMBERSHIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
/* Strings returned through out-parameters are owned by the caller and must be
 * released with slpm_string_free. Instances are released with
 * slpm_instance_free. */

typedef enum SlpmStatus {
  SLPM_STATUS_OK = 0,
  SLPM_STATUS_NULL_ARGUMENT = 1,
  SLPM_STATUS_INVALID_UTF8 = 2,
  SLPM_STATUS_PARSE = 3,
  // Malformed grammar or automaton, or an invariant violation.
  SLPM_STATUS_INVALID = 4,
  SLPM_STATUS_BUDGET_EXCEEDED = 5,
  SLPM_STATUS_ITERATION_CEILING = 6,
  SLPM_STATUS_PRECONDITION = 7,
  SLPM_STATUS_IO = 8,
  SLPM_STATUS_PANIC = 9,
} SlpmStatus;

// Opaque handle to a validated instance.
typedef struct SlpmInstance SlpmInstance;

typedef struct SlpmGenParams {
  uint64_t seed;
  size_t n;
  size_t alphabet_size;
  size_t state_count;
  size_t max_rhs_len;
  uint32_t target_eval_len_log2;
  bool deterministic;
} SlpmGenParams;

typedef struct SlpmDecideOptions {
  // 0 means the default ceiling 3n + 10.
  size_t max_iter;
  uint64_t unary_dp_threshold;
  // Letter budget for any decompression.
  size_t max_expand;
  // Decide by full decompression instead of recompression.
  bool naive;
} SlpmDecideOptions;

typedef struct SlpmDecision {
  bool accepted;
  size_t iterations;
} SlpmDecision;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a grammar text and an automaton text into a new instance.
//
// # Safety
// Both texts are NUL-terminated; `out` is writable.
enum SlpmStatus slpm_instance_parse(const char *grammar,
                                    const char *automaton,
                                    struct SlpmInstance **out);

// Parses a combined file: grammar, a `---` line, automaton.
//
// # Safety
// `combined` is NUL-terminated; `out` is writable.
enum SlpmStatus slpm_instance_parse_combined(const char *combined, struct SlpmInstance **out);

// Generates a random instance; equal params give equal instances.
//
// # Safety
// `params` is readable; `out` is writable.
enum SlpmStatus slpm_instance_generate(const struct SlpmGenParams *params,
                                       struct SlpmInstance **out);

// Writes the combined text form to `*out`.
//
// # Safety
// `inst` is a live handle; `out` is writable.
enum SlpmStatus slpm_instance_serialize(const struct SlpmInstance *inst, char **out);

// Writes the grammar and automaton texts separately.
//
// # Safety
// `inst` is a live handle; both outs are writable.
enum SlpmStatus slpm_instance_serialize_parts(const struct SlpmInstance *inst,
                                              char **grammar_out,
                                              char **automaton_out);

// Number of nonterminals, or 0 for a null handle.
//
// # Safety
// `inst` is null or a live handle.
size_t slpm_instance_n(const struct SlpmInstance *inst);

// |eval(Xn)| in decimal; it may exceed every fixed-width integer.
//
// # Safety
// `inst` is a live handle; `out` is writable.
enum SlpmStatus slpm_instance_eval_len(const struct SlpmInstance *inst, char **out);

// Defaults matching the command-line tool.
struct SlpmDecideOptions slpm_decide_options_default(void);

// Decides membership. `options` may be null for defaults.
//
// # Safety
// `inst` is a live handle; `options` is null or readable; `out` is writable.
enum SlpmStatus slpm_decide(const struct SlpmInstance *inst,
                            const struct SlpmDecideOptions *options,
                            struct SlpmDecision *out);

// Decides by decompressing at most `cap` letters.
//
// # Safety
// `inst` is a live handle; `accepted` is writable.
enum SlpmStatus slpm_brute_force(const struct SlpmInstance *inst, size_t cap, bool *accepted);

// # Safety
// `inst` is null or a live handle, which is invalid afterwards.
void slpm_instance_free(struct SlpmInstance *inst);

// # Safety
// `s` is null or a string returned by this library, invalid afterwards.
void slpm_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *slpm_last_error_message(void);

// Constant, NUL-terminated version string.
const char *slpm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLP_MEMBERSHIP_H */
