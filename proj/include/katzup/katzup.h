#ifndef KATZUP_H
#define KATZUP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KATZUP_BUILDING)
#    define KATZUP_API __declspec(dllexport)
#  else
#    define KATZUP_API __declspec(dllimport)
#  endif
#else
#  define KATZUP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Node ids are 1-based throughout this interface. Functions returning
 * katzup_status leave their out-parameters untouched on failure; the message
 * of the last failure on the calling thread is available from
 * katzup_last_error(). */

typedef struct katzup_graph katzup_graph;
typedef struct katzup_state katzup_state;

typedef enum katzup_status {
    KATZUP_OK = 0,
    KATZUP_ERR_MALFORMED_LINE = 1,
    KATZUP_ERR_SELF_LOOP = 2,
    KATZUP_ERR_INDEX_OUT_OF_RANGE = 3,
    KATZUP_ERR_UNSUPPORTED_HEADER = 4,
    KATZUP_ERR_MALFORMED_ENTRY = 5,
    KATZUP_ERR_TOO_MANY_EDGES = 6,
    KATZUP_ERR_INVALID_PARAMETERS = 7,
    KATZUP_ERR_MISSING_ELEMENT = 8,
    KATZUP_ERR_DIMENSION_MISMATCH = 9,
    KATZUP_ERR_NO_CONVERGENCE = 10,
    KATZUP_ERR_NOT_POSITIVE_DEFINITE = 11,
    KATZUP_ERR_ISOLATED_NODE = 12,
    KATZUP_ERR_EMPTY_GRAPH = 13,
    KATZUP_ERR_INVALID_DEPTH = 14,
    KATZUP_ERR_INTEGER_OVERFLOW = 15,
    KATZUP_ERR_IO = 16,
    KATZUP_ERR_DISCONNECTED = 17,
    KATZUP_ERR_BOUND_VIOLATION = 18,
    KATZUP_ERR_NULL_ARGUMENT = 98,
    KATZUP_ERR_INTERNAL = 99
} katzup_status;

KATZUP_API const char *katzup_status_string(katzup_status status);
KATZUP_API const char *katzup_last_error(void);

/* ---- graphs ---------------------------------------------------------- */

/* pairs holds m (u, v) pairs, 2*m entries. */
KATZUP_API katzup_status katzup_graph_from_edges(size_t n, const uint32_t *pairs, size_t m,
                                                 katzup_graph **out);
/* Edge list, or Matrix Market when the name ends in .mtx. */
KATZUP_API katzup_status katzup_graph_load(const char *path, int zero_based, katzup_graph **out);
KATZUP_API katzup_status katzup_graph_parse_edge_list(const char *text, int zero_based,
                                                      katzup_graph **out);
KATZUP_API katzup_status katzup_graph_parse_matrix_market(const char *text, katzup_graph **out);
KATZUP_API katzup_status katzup_graph_erdos_renyi(size_t n, size_t m, uint64_t seed,
                                                  katzup_graph **out);
KATZUP_API katzup_status katzup_graph_preferential(size_t n, size_t d, uint64_t seed,
                                                   katzup_graph **out);
KATZUP_API void katzup_graph_free(katzup_graph *g);

KATZUP_API size_t katzup_graph_node_count(const katzup_graph *g);
KATZUP_API size_t katzup_graph_edge_count(const katzup_graph *g);
KATZUP_API katzup_status katzup_graph_degree(const katzup_graph *g, uint32_t node, size_t *out);
KATZUP_API katzup_status katzup_graph_write_edge_list(const katzup_graph *g, const char *path,
                                                      int zero_based);

/* New graph with the given nodes (or count (u, v) pairs) removed; node count is kept. */
KATZUP_API katzup_status katzup_graph_remove_nodes(const katzup_graph *g, const uint32_t *nodes,
                                                   size_t count, katzup_graph **out);
KATZUP_API katzup_status katzup_graph_remove_edges(const katzup_graph *g, const uint32_t *pairs,
                                                   size_t count, katzup_graph **out);

typedef struct katzup_graph_stats {
    uint32_t diameter;
    double mean_eccentricity;
    double mean_degree;
    int connected;
    size_t component_size;
} katzup_graph_stats;

KATZUP_API katzup_status katzup_graph_get_stats(const katzup_graph *g, katzup_graph_stats *out);

/* ---- Katz centrality -------------------------------------------------- */

KATZUP_API katzup_status katzup_spectral_radius(const katzup_graph *g, double *out);

/* Solves (I - alpha A) x = seed by CG; seed may be NULL for all ones. */
KATZUP_API katzup_status katzup_katz(const katzup_graph *g, double alpha, const double *seed,
                                     double tol, katzup_state **out);
KATZUP_API void katzup_state_free(katzup_state *s);

KATZUP_API size_t katzup_state_size(const katzup_state *s);
KATZUP_API double katzup_state_alpha(const katzup_state *s);
KATZUP_API int katzup_state_is_exact(const katzup_state *s);
/* Copies the scores into out, which must hold len >= size entries. */
KATZUP_API katzup_status katzup_state_scores(const katzup_state *s, double *out, size_t len);
KATZUP_API double katzup_total_communicability(const katzup_state *s);

/* ---- updates and bounds ---------------------------------------------- */

typedef struct katzup_update_info {
    size_t length;
    int hit_max_length;
    size_t spmv_count;
} katzup_update_info;

/* State after removing a node / edge from g, by truncated walk sums.
 * info may be NULL. */
KATZUP_API katzup_status katzup_update_node(const katzup_graph *g, const katzup_state *s,
                                            uint32_t node, size_t lmax, double tol,
                                            katzup_state **out, katzup_update_info *info);
KATZUP_API katzup_status katzup_update_edge(const katzup_graph *g, const katzup_state *s,
                                            uint32_t u, uint32_t v, size_t lmax, double tol,
                                            katzup_state **out, katzup_update_info *info);

/* Upper bounds on the drop in total communicability. */
KATZUP_API katzup_status katzup_tc_bound_node(const katzup_graph *g, const katzup_state *s,
                                              uint32_t node, double *bound);
KATZUP_API katzup_status katzup_tc_bound_edge(const katzup_graph *g, const katzup_state *s,
                                              uint32_t u, uint32_t v, double *bound);

KATZUP_API katzup_status katzup_downdate_pick(const katzup_graph *g, const katzup_state *s,
                                              uint32_t *u, uint32_t *v, int *regime_holds);

/* Intersection similarity of the rankings induced by two score vectors. */
KATZUP_API katzup_status katzup_intersection_similarity(const double *a, const double *b,
                                                        size_t n, size_t depth, double *out);

/* ---- experiment commands ---------------------------------------------- */

typedef struct katzup_config {
    const char *graph_path; /* exactly one of graph_path / gen_spec */
    const char *gen_spec;   /* "erdrey:n,m" or "pref:n,d" */
    const char *out;        /* NULL or "": results are returned in *output */
    const char *policy;     /* random | top-katz | min-product */
    const char *kind;       /* node | edge */
    double alpha_factor;
    double tol;
    double tol_pcg; /* <= 0 means tol / 10 */
    double removal_fraction;
    size_t lmax_node;
    size_t lmax_edge;
    size_t trials;
    uint64_t seed;
    int zero_based;
    int stale_bounds;
    int recompute_on_maxlen;
} katzup_config;

KATZUP_API void katzup_config_init(katzup_config *cfg);

/* command: compute | compare | sequential | tc-bounds | gen.
 * *output receives the result text when cfg->out is empty (else NULL), and
 * *summary a few human-readable lines; both may be NULL and are released
 * with katzup_string_free. tc-bounds returns KATZUP_ERR_BOUND_VIOLATION after
 * writing its results if any bound was violated. */
KATZUP_API katzup_status katzup_run_command(const char *command, const katzup_config *cfg,
                                            char **output, char **summary);
KATZUP_API void katzup_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* KATZUP_H */
