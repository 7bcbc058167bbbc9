/* cascata — cascade, sentiment, and heavy-tail analysis of follower networks.
 *
 * C interface to the cascata core. All functions returning int use the
 * CASCATA_* status codes; on failure cascata_last_error() returns a
 * thread-local message describing what went wrong. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * *_free function. Handles are not thread-safe for concurrent mutation;
 * read-only use from several threads is fine.
 */
#ifndef CASCATA_H
#define CASCATA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CASCATA_OK 0
#define CASCATA_E_IO 1      /* unreadable/unwritable file */
#define CASCATA_E_PARSE 2   /* malformed input */
#define CASCATA_E_INVALID 3 /* bad argument or configuration */
#define CASCATA_E_EMPTY 4   /* no usable data */
#define CASCATA_E_NUMERIC 5 /* degenerate or insufficient data */
#define CASCATA_E_UNKNOWN 6

/* Sentinel for "derive the window origin from the data" (midnight UTC of
 * the earliest tweet's day). */
#define CASCATA_ORIGIN_AUTO INT64_MIN

typedef struct cascata_corpus cascata_corpus;
typedef struct cascata_lexicons cascata_lexicons;
typedef struct cascata_graph cascata_graph;
typedef struct cascata_cores cascata_cores;
typedef struct cascata_cascades cascata_cascades;
typedef struct cascata_features cascata_features;

const char* cascata_version(void);
const char* cascata_last_error(void);

/* Worker count for permutation loops; results do not depend on it.
 * n <= 0 restores the hardware default. */
void cascata_set_threads(int n);

/* FNV-1a 64 digest of a file, as 16 lowercase hex chars + NUL. */
int cascata_file_digest_hex(const char* path, char out[17]);

void cascata_free(void* p);

/* ------------------------------------------------------------------ corpus */

/* format: "jsonl" or "tsv". window_width 0 means the 86400 s default.
 * origin: epoch seconds, or CASCATA_ORIGIN_AUTO. */
int cascata_corpus_open(const char* path, const char* format, int64_t window_width,
                        int64_t origin, cascata_corpus** out);
void cascata_corpus_free(cascata_corpus* corpus);
int64_t cascata_corpus_size(const cascata_corpus* corpus);
int64_t cascata_corpus_skipped(const cascata_corpus* corpus);
int cascata_corpus_is_annotated(const cascata_corpus* corpus);
int64_t cascata_corpus_window_width(const cascata_corpus* corpus);
int64_t cascata_corpus_origin(const cascata_corpus* corpus);
int cascata_corpus_save_jsonl(const cascata_corpus* corpus, const char* path);

/* sentiment_path and/or category_path may be NULL for an empty lexicon. */
int cascata_lexicons_open(const char* sentiment_path, const char* category_path,
                          cascata_lexicons** out);
void cascata_lexicons_free(cascata_lexicons* lexicons);

/* Annotates every tweet with text; tweets without text keep their supplied
 * annotation. */
int cascata_corpus_annotate(cascata_corpus* corpus, const cascata_lexicons* lexicons);

/* ratio_mode: 0 pooled term ratios (default), 1 mean of per-tweet ratios.
 * out_means = { mu_p, mu_n, mu_soc, mu_cog }. */
int cascata_corpus_means(const cascata_corpus* corpus, int ratio_mode, double out_means[4]);

/* ------------------------------------------------------------------ network */

int cascata_graph_open(const char* path, cascata_graph** out);
void cascata_graph_free(cascata_graph* graph);
int64_t cascata_graph_nodes(const cascata_graph* graph);
int64_t cascata_graph_edges(const cascata_graph* graph);
int64_t cascata_graph_dropped_self_loops(const cascata_graph* graph);
int64_t cascata_graph_dropped_duplicates(const cascata_graph* graph);
double cascata_graph_reciprocity(const cascata_graph* graph);

/* out_degrees = { k_in, k_out }. Unknown user is an error. */
int cascata_graph_degrees(const cascata_graph* graph, const char* user, int64_t out_degrees[2]);

/* degree_mode: 0 distinct neighbors (default), 1 k_in + k_out. */
int cascata_graph_kcore(const cascata_graph* graph, int degree_mode, cascata_cores** out);
void cascata_cores_free(cascata_cores* cores);
int cascata_cores_get(const cascata_cores* cores, const cascata_graph* graph, const char* user,
                      int64_t* out);
int64_t cascata_cores_max(const cascata_cores* cores);

/* ----------------------------------------------------------------- cascades */

int cascata_detect_cascades(const cascata_corpus* corpus, const cascata_graph* graph,
                            int same_window, int include_spreaders, cascata_cascades** out);
void cascata_cascades_free(cascata_cascades* cascades);
int64_t cascata_cascades_count(const cascata_cascades* cascades);

/* Requires the corpus detection ran on, fully annotated. */
int cascata_cascades_classify(cascata_cascades* cascades, const cascata_corpus* corpus,
                              int ratio_mode);

int cascata_cascades_write_report(const cascata_cascades* cascades, const char* path);
int cascata_cascades_write_summary(const cascata_cascades* cascades, const char* path);

/* column: n_sp | n_c | n_tweets. group: NULL/"all", a sentiment label, or
 * social_high/social_low/cognitive_high/cognitive_low (classified sets
 * only). *out is malloc'd; release with cascata_free. */
int cascata_cascades_values(const cascata_cascades* cascades, const char* column,
                            const char* group, double** out, int64_t* n);

/* -------------------------------------------------------------------- stats */

typedef struct cascata_powerlaw_fit {
    double alpha;
    double sigma;
    double ks_d;
    int64_t x_min;
    int64_t n_tail;
} cascata_powerlaw_fit;

/* x_min = 0 selects x_min by KS minimization. Values must be positive
 * integers. */
int cascata_fit_power_law(const double* values, int64_t n, int64_t x_min,
                          cascata_powerlaw_fit* out);

/* R > 0 favors the power law over the rounded lognormal on the same tail;
 * p is the two-sided significance of the normalized ratio. */
int cascata_lrt_lognormal(const double* values, int64_t n, const cascata_powerlaw_fit* fit,
                          double* out_R, double* out_p);

int cascata_ks_two_sample(const double* a, int64_t na, const double* b, int64_t nb, int weighted,
                          int64_t n_perm, uint64_t seed, double* out_D, double* out_p);

int cascata_pearson(const double* x, const double* y, int64_t n, double* out_r);

int cascata_write_ccdf(const double* values, int64_t n, const char* path);
int cascata_write_fitline(const cascata_powerlaw_fit* fit, int64_t n_total, int64_t x_max,
                          const char* path);

/* Reads a numeric TSV column, optionally keeping only rows where
 * filter_column equals filter_value (pass NULL for no filter). */
int cascata_tsv_read_column(const char* path, const char* column, const char* filter_column,
                            const char* filter_value, double** out, int64_t* n);

/* Distinct values of a TSV column, sorted; out is a malloc'd array of
 * malloc'd strings. */
int cascata_tsv_distinct(const char* path, const char* column, char*** out, int64_t* n);
void cascata_strings_free(char** strings, int64_t n);

/* ---------------------------------------------------------------- userlevel */

int cascata_user_features(const cascata_corpus* corpus, const cascata_graph* graph,
                          const cascata_cores* cores, int ratio_mode, cascata_features** out);
void cascata_features_free(cascata_features* features);
int64_t cascata_features_count(const cascata_features* features);
int cascata_features_write(const cascata_features* features, const char* path);

int cascata_engagement_regressions(const cascata_features* features, const char* json_path);

typedef struct cascata_corr {
    double r;
    double null_mean;
    double null_2sd;
    int64_t n_eligible;
    int64_t skipped;
} cascata_corr;

/* metric: pos | neg | neu | soc | cog. followee_weight: 0 per user,
 * 1 per tweet. */
int cascata_neighborhood_correlation(const cascata_features* features, const cascata_graph* graph,
                                     const char* metric, int followee_weight, int64_t n_shuffles,
                                     uint64_t seed, cascata_corr* out);

/* -------------------------------------------------------------------- synth */

typedef struct cascata_synth_params {
    int64_t n_users;
    int edge_model; /* 0 uniform(p), 1 power-law out-degree(gamma) */
    double edge_prob;
    double gamma;
    double reciprocity;
    double tweet_rate;
    int64_t max_seeds; /* -1 = unlimited */
    double p_pos, p_neu, p_neg;
    double reply_prob;
    double soc_rate, cog_rate;
    int64_t n_windows;
    int64_t window_width;
    int same_window;
    uint64_t seed;
} cascata_synth_params;

void cascata_synth_params_init(cascata_synth_params* params);

/* Writes corpus JSONL, edge TSV, and the ground-truth sidecar
 * (tweet_id, true_cascade_id). truth_path may be NULL to skip it. */
int cascata_synth_generate(const cascata_synth_params* params, const char* corpus_path,
                           const char* edges_path, const char* truth_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CASCATA_H */
