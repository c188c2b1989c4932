#ifndef BUBBLEX_BUBBLEX_H
#define BUBBLEX_BUBBLEX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BX_API __declspec(dllexport)
#else
#define BX_API __attribute__((visibility("default")))
#endif

/* Status codes. Zero is success, everything else is negative. */
enum {
    BX_OK = 0,
    BX_ERR_PARSE = -1,
    BX_ERR_NOT_A_DECOMPOSITION = -2,
    BX_ERR_DEGENERATE_CELL = -3,
    BX_ERR_INCONSISTENT_DIM = -4,
    BX_ERR_UNKNOWN_SIMPLEX = -5,
    BX_ERR_DEGREE_OVERFLOW = -6,
    BX_ERR_MESH_MISMATCH = -7,
    BX_ERR_DEGREE_MISMATCH = -8,
    BX_ERR_NOT_A_FACE = -9,
    BX_ERR_NOT_DIVISIBLE = -10,
    BX_ERR_NOT_CLOSED = -11,
    BX_ERR_NO_SOLUTION = -12,
    BX_ERR_INCOMPATIBLE = -13,
    BX_ERR_INDEX_MISMATCH = -14,
    BX_ERR_SINGULAR_POINT = -15,
    BX_ERR_NONCONFORMING = -16,
    BX_ERR_INVALID_ARGUMENT = -17,
    BX_ERR_IO = -18,
    BX_ERR_INTERNAL = -19,
    BX_ERR_INSUFFICIENT_BUFFER = -64,
    BX_ERR_NULL_ARGUMENT = -65
};

enum { BX_SPACE_P = 0, BX_SPACE_P_MINUS = 1 };

typedef struct bx_mesh bx_mesh;
typedef struct bx_weights bx_weights;
typedef struct bx_form bx_form;
typedef struct bx_decomposition bx_decomposition;
typedef struct bx_report bx_report;

/* Symbolic name of a status code, e.g. "NotADecomposition". */
BX_API const char* bx_error_name(int code);
/* Message of the last failing call on the calling thread; empty after success. */
BX_API const char* bx_last_error_message(void);
/* Worker count for parallel sections; 0 means all cores. */
BX_API int bx_set_jobs(int jobs);

/*
 * Functions producing text take (buf, cap, needed). *needed receives the size
 * including the terminating NUL. When cap is too small nothing is written and
 * BX_ERR_INSUFFICIENT_BUFFER is returned; buf may be NULL when cap is 0.
 */

BX_API int bx_mesh_load(const char* path, bx_mesh** out);
BX_API int bx_mesh_from_json(const char* json, bx_mesh** out);
BX_API void bx_mesh_free(bx_mesh* mesh);
BX_API int bx_mesh_dim(const bx_mesh* mesh, int* out);
BX_API int bx_mesh_count(const bx_mesh* mesh, int d, int* out);
/* Counts, links, shared faces and shape statistics as a JSON document. */
BX_API int bx_mesh_info_json(const bx_mesh* mesh, char* buf, size_t cap, size_t* needed);

BX_API int bx_weights_build(const bx_mesh* mesh, bx_weights** out);
BX_API void bx_weights_free(bx_weights* ws);
BX_API int bx_weights_to_json(const bx_weights* ws, char* buf, size_t cap, size_t* needed);
BX_API int bx_weights_certify(const bx_weights* ws, bx_report** out);

BX_API int bx_form_load(const bx_mesh* mesh, const char* path, bx_form** out);
BX_API int bx_form_from_json(const bx_mesh* mesh, const char* json, bx_form** out);
BX_API int bx_form_random(const bx_mesh* mesh, int k, int degree, int trimmed, uint64_t seed, bx_form** out);
BX_API void bx_form_free(bx_form* form);
BX_API int bx_form_degree(const bx_form* form, int* k);
BX_API int bx_form_is_conforming(const bx_form* form, int* out);
BX_API int bx_form_membership(const bx_form* form, int space, int r, int* out);
BX_API int bx_form_equal(const bx_form* a, const bx_form* b, int* out);
BX_API int bx_form_to_json(const bx_form* form, char* buf, size_t cap, size_t* needed);

BX_API int bx_decompose(const bx_weights* ws, const bx_form* form, bx_decomposition** out);
BX_API void bx_decomposition_free(bx_decomposition* d);
BX_API int bx_decomposition_flags(const bx_decomposition* d, int* residual_zero, int* trace_zero);
BX_API int bx_decomposition_w(const bx_decomposition* d, bx_form** out);
BX_API int bx_decomposition_num_bubbles(const bx_decomposition* d, size_t* out);
/* Key "v0,v1,.." of the i-th bubble's simplex, in mesh order by dimension. */
BX_API int bx_decomposition_bubble_key(const bx_decomposition* d, size_t i, char* buf, size_t cap, size_t* needed);
BX_API int bx_decomposition_bubble(const bx_decomposition* d, size_t i, bx_form** out);
/* Residual and trace flags plus bubble keys as JSON. */
BX_API int bx_decomposition_manifest_json(const bx_decomposition* d, char* buf, size_t cap, size_t* needed);

/* Reports hold a JSON document computed once; `passed` is 1 when every check passed. */
BX_API void bx_report_free(bx_report* report);
BX_API int bx_report_passed(const bx_report* report, int* passed);
BX_API int bx_report_json(const bx_report* report, char* buf, size_t cap, size_t* needed);

/* Runs the full check suite; full = 0 skips the oracle. */
BX_API int bx_verify(const bx_weights* ws, const bx_form* form, int full, int points, uint64_t seed, bx_report** out);
/* Oracle identity for level m (0..n) at `points` random interior points. */
BX_API int bx_oracle(const bx_weights* ws, const bx_form* form, int m, int points, uint64_t seed, bx_report** out);
/* Always passes; the ratios are for inspection. */
BX_API int bx_stability(const bx_weights* ws, int k, int degree, int trials, uint64_t seed, bx_report** out);

#ifdef __cplusplus
}
#endif

#endif
