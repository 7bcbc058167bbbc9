#include "cascata/cascata.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "cascata/cascade.hpp"
#include "cascata/corpus.hpp"
#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"
#include "cascata/lexicon.hpp"
#include "cascata/network.hpp"
#include "cascata/parallel.hpp"
#include "cascata/stats.hpp"
#include "cascata/synth.hpp"
#include "cascata/userlevel.hpp"

using namespace cascata;

namespace {

thread_local std::string t_last_error;

int code_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::io: return CASCATA_E_IO;
        case ErrorCode::parse: return CASCATA_E_PARSE;
        case ErrorCode::invalid: return CASCATA_E_INVALID;
        case ErrorCode::empty: return CASCATA_E_EMPTY;
        case ErrorCode::numeric: return CASCATA_E_NUMERIC;
    }
    return CASCATA_E_UNKNOWN;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return CASCATA_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return code_of(e);
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CASCATA_E_UNKNOWN;
    } catch (...) {
        t_last_error = "unknown error";
        return CASCATA_E_UNKNOWN;
    }
}

RatioMode ratio_mode_of(int mode) {
    if (mode == 0) return RatioMode::pooled;
    if (mode == 1) return RatioMode::per_tweet_mean;
    throw_invalid("ratio_mode must be 0 (pooled) or 1 (per-tweet mean)");
}

const char* require(const char* p, const char* what) {
    if (p == nullptr) throw_invalid(std::string(what) + " must not be NULL");
    return p;
}

} // namespace

struct cascata_corpus {
    Corpus impl;
};
struct cascata_lexicons {
    SentimentLexicon sentiment;
    CategoryLexicon categories;
};
struct cascata_graph {
    FollowerGraph impl;
};
struct cascata_cores {
    CoreAssignment impl;
};
struct cascata_cascades {
    CascadeSet impl;
};
struct cascata_features {
    FeatureTable impl;
};

extern "C" {

const char* cascata_version(void) { return "0.1.0"; }

const char* cascata_last_error(void) { return t_last_error.c_str(); }

void cascata_set_threads(int n) { set_worker_count(n); }

int cascata_file_digest_hex(const char* path, char out[17]) {
    return guarded([&] {
        const std::string digest = file_digest_hex(require(path, "path"));
        std::memcpy(out, digest.c_str(), 17);
    });
}

void cascata_free(void* p) { std::free(p); }

/* ------------------------------------------------------------------ corpus */

int cascata_corpus_open(const char* path, const char* format, int64_t window_width,
                        int64_t origin, cascata_corpus** out) {
    return guarded([&] {
        CorpusOptions options;
        options.window_width = window_width > 0 ? window_width : 86400;
        if (origin != CASCATA_ORIGIN_AUTO) options.origin = origin;
        const CorpusFormat fmt = corpus_format_from_name(require(format, "format"));
        *out = new cascata_corpus{Corpus::parse_file(require(path, "path"), fmt, options)};
    });
}

void cascata_corpus_free(cascata_corpus* corpus) { delete corpus; }

int64_t cascata_corpus_size(const cascata_corpus* corpus) {
    return static_cast<int64_t>(corpus->impl.size());
}

int64_t cascata_corpus_skipped(const cascata_corpus* corpus) {
    return corpus->impl.skipped_lines();
}

int cascata_corpus_is_annotated(const cascata_corpus* corpus) {
    return corpus->impl.fully_annotated() ? 1 : 0;
}

int64_t cascata_corpus_window_width(const cascata_corpus* corpus) {
    return corpus->impl.window_width();
}

int64_t cascata_corpus_origin(const cascata_corpus* corpus) { return corpus->impl.origin(); }

int cascata_corpus_save_jsonl(const cascata_corpus* corpus, const char* path) {
    return guarded([&] { corpus->impl.save_jsonl_file(require(path, "path")); });
}

int cascata_lexicons_open(const char* sentiment_path, const char* category_path,
                          cascata_lexicons** out) {
    return guarded([&] {
        auto* lex = new cascata_lexicons{};
        try {
            if (sentiment_path) lex->sentiment = SentimentLexicon::load_file(sentiment_path);
            if (category_path) lex->categories = CategoryLexicon::load_file(category_path);
        } catch (...) {
            delete lex;
            throw;
        }
        *out = lex;
    });
}

void cascata_lexicons_free(cascata_lexicons* lexicons) { delete lexicons; }

int cascata_corpus_annotate(cascata_corpus* corpus, const cascata_lexicons* lexicons) {
    return guarded([&] { annotate_corpus(corpus->impl, lexicons->sentiment, lexicons->categories); });
}

int cascata_corpus_means(const cascata_corpus* corpus, int ratio_mode, double out_means[4]) {
    return guarded([&] {
        const CorpusMeans m = corpus_means(corpus->impl, ratio_mode_of(ratio_mode));
        out_means[0] = m.mu_p;
        out_means[1] = m.mu_n;
        out_means[2] = m.mu_soc;
        out_means[3] = m.mu_cog;
    });
}

/* ------------------------------------------------------------------ network */

int cascata_graph_open(const char* path, cascata_graph** out) {
    return guarded([&] {
        *out = new cascata_graph{FollowerGraph::load_file(require(path, "path"))};
    });
}

void cascata_graph_free(cascata_graph* graph) { delete graph; }

int64_t cascata_graph_nodes(const cascata_graph* graph) {
    return static_cast<int64_t>(graph->impl.node_count());
}

int64_t cascata_graph_edges(const cascata_graph* graph) {
    return static_cast<int64_t>(graph->impl.edge_count());
}

int64_t cascata_graph_dropped_self_loops(const cascata_graph* graph) {
    return graph->impl.dropped_self_loops();
}

int64_t cascata_graph_dropped_duplicates(const cascata_graph* graph) {
    return graph->impl.dropped_duplicates();
}

double cascata_graph_reciprocity(const cascata_graph* graph) { return graph->impl.reciprocity(); }

int cascata_graph_degrees(const cascata_graph* graph, const char* user, int64_t out_degrees[2]) {
    return guarded([&] {
        const auto id = graph->impl.node_id_checked(require(user, "user"));
        out_degrees[0] = static_cast<int64_t>(graph->impl.k_in(id));
        out_degrees[1] = static_cast<int64_t>(graph->impl.k_out(id));
    });
}

int cascata_graph_kcore(const cascata_graph* graph, int degree_mode, cascata_cores** out) {
    return guarded([&] {
        DegreeMode mode;
        if (degree_mode == 0) mode = DegreeMode::distinct_neighbors;
        else if (degree_mode == 1) mode = DegreeMode::in_plus_out;
        else throw_invalid("degree_mode must be 0 (distinct) or 1 (in+out)");
        *out = new cascata_cores{k_core_decomposition(graph->impl, mode)};
    });
}

void cascata_cores_free(cascata_cores* cores) { delete cores; }

int cascata_cores_get(const cascata_cores* cores, const cascata_graph* graph, const char* user,
                      int64_t* out) {
    return guarded([&] {
        const auto id = graph->impl.node_id_checked(require(user, "user"));
        if (id >= cores->impl.core.size()) throw_invalid("core assignment does not match graph");
        *out = cores->impl.get(id);
    });
}

int64_t cascata_cores_max(const cascata_cores* cores) { return cores->impl.max_core; }

/* ----------------------------------------------------------------- cascades */

int cascata_detect_cascades(const cascata_corpus* corpus, const cascata_graph* graph,
                            int same_window, int include_spreaders, cascata_cascades** out) {
    return guarded([&] {
        DetectOptions options;
        options.same_window = same_window != 0;
        options.include_spreaders = include_spreaders != 0;
        *out = new cascata_cascades{CascadeSet::detect(corpus->impl, graph->impl, options)};
    });
}

void cascata_cascades_free(cascata_cascades* cascades) { delete cascades; }

int64_t cascata_cascades_count(const cascata_cascades* cascades) {
    return static_cast<int64_t>(cascades->impl.size());
}

int cascata_cascades_classify(cascata_cascades* cascades, const cascata_corpus* corpus,
                              int ratio_mode) {
    return guarded([&] { cascades->impl.classify(corpus->impl, ratio_mode_of(ratio_mode)); });
}

int cascata_cascades_write_report(const cascata_cascades* cascades, const char* path) {
    return guarded([&] { cascades->impl.write_report_file(require(path, "path")); });
}

int cascata_cascades_write_summary(const cascata_cascades* cascades, const char* path) {
    return guarded([&] { cascades->impl.write_summary_file(require(path, "path")); });
}

int cascata_cascades_values(const cascata_cascades* cascades, const char* column,
                            const char* group, double** out, int64_t* n) {
    return guarded([&] {
        const std::vector<double> values =
            cascades->impl.values(require(column, "column"), group ? group : "");
        auto* buf = static_cast<double*>(std::malloc(sizeof(double) * std::max<std::size_t>(values.size(), 1)));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, values.data(), sizeof(double) * values.size());
        *out = buf;
        *n = static_cast<int64_t>(values.size());
    });
}

/* -------------------------------------------------------------------- stats */

int cascata_fit_power_law(const double* values, int64_t n, int64_t x_min,
                          cascata_powerlaw_fit* out) {
    return guarded([&] {
        const auto fit = stats::fit_power_law({values, static_cast<std::size_t>(n)}, x_min);
        out->alpha = fit.alpha;
        out->sigma = fit.sigma;
        out->ks_d = fit.ks_d;
        out->x_min = fit.x_min;
        out->n_tail = fit.n_tail;
    });
}

int cascata_lrt_lognormal(const double* values, int64_t n, const cascata_powerlaw_fit* fit,
                          double* out_R, double* out_p) {
    return guarded([&] {
        stats::PowerLawFit pl;
        pl.alpha = fit->alpha;
        pl.sigma = fit->sigma;
        pl.ks_d = fit->ks_d;
        pl.x_min = fit->x_min;
        pl.n_tail = fit->n_tail;
        const auto lrt = stats::lrt_vs_lognormal({values, static_cast<std::size_t>(n)}, pl);
        *out_R = lrt.R;
        *out_p = lrt.p;
    });
}

int cascata_ks_two_sample(const double* a, int64_t na, const double* b, int64_t nb, int weighted,
                          int64_t n_perm, uint64_t seed, double* out_D, double* out_p) {
    return guarded([&] {
        const auto ks = stats::ks_two_sample({a, static_cast<std::size_t>(na)},
                                             {b, static_cast<std::size_t>(nb)}, weighted != 0,
                                             n_perm, seed);
        *out_D = ks.D;
        *out_p = ks.p;
    });
}

int cascata_pearson(const double* x, const double* y, int64_t n, double* out_r) {
    return guarded([&] {
        *out_r = stats::pearson({x, static_cast<std::size_t>(n)}, {y, static_cast<std::size_t>(n)});
    });
}

int cascata_write_ccdf(const double* values, int64_t n, const char* path) {
    return guarded([&] {
        std::ofstream out = open_output(require(path, "path"));
        stats::write_ccdf_tsv({values, static_cast<std::size_t>(n)}, out);
    });
}

int cascata_write_fitline(const cascata_powerlaw_fit* fit, int64_t n_total, int64_t x_max,
                          const char* path) {
    return guarded([&] {
        stats::PowerLawFit pl;
        pl.alpha = fit->alpha;
        pl.sigma = fit->sigma;
        pl.ks_d = fit->ks_d;
        pl.x_min = fit->x_min;
        pl.n_tail = fit->n_tail;
        std::ofstream out = open_output(require(path, "path"));
        stats::write_powerlaw_ccdf_tsv(pl, n_total, x_max, out);
    });
}

int cascata_tsv_read_column(const char* path, const char* column, const char* filter_column,
                            const char* filter_value, double** out, int64_t* n) {
    return guarded([&] {
        const std::vector<double> values =
            read_tsv_column(require(path, "path"), require(column, "column"),
                            filter_column ? filter_column : "", filter_value ? filter_value : "");
        auto* buf = static_cast<double*>(std::malloc(sizeof(double) * std::max<std::size_t>(values.size(), 1)));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, values.data(), sizeof(double) * values.size());
        *out = buf;
        *n = static_cast<int64_t>(values.size());
    });
}

int cascata_tsv_distinct(const char* path, const char* column, char*** out, int64_t* n) {
    return guarded([&] {
        const std::vector<std::string> values =
            tsv_distinct_values(require(path, "path"), require(column, "column"));
        auto** buf = static_cast<char**>(std::malloc(sizeof(char*) * std::max<std::size_t>(values.size(), 1)));
        if (!buf) throw std::bad_alloc();
        for (std::size_t i = 0; i < values.size(); ++i) {
            buf[i] = static_cast<char*>(std::malloc(values[i].size() + 1));
            if (!buf[i]) {
                for (std::size_t j = 0; j < i; ++j) std::free(buf[j]);
                std::free(buf);
                throw std::bad_alloc();
            }
            std::memcpy(buf[i], values[i].c_str(), values[i].size() + 1);
        }
        *out = buf;
        *n = static_cast<int64_t>(values.size());
    });
}

void cascata_strings_free(char** strings, int64_t n) {
    if (!strings) return;
    for (int64_t i = 0; i < n; ++i) std::free(strings[i]);
    std::free(strings);
}

/* ---------------------------------------------------------------- userlevel */

int cascata_user_features(const cascata_corpus* corpus, const cascata_graph* graph,
                          const cascata_cores* cores, int ratio_mode, cascata_features** out) {
    return guarded([&] {
        *out = new cascata_features{FeatureTable::build(corpus->impl, graph->impl, cores->impl,
                                                        ratio_mode_of(ratio_mode))};
    });
}

void cascata_features_free(cascata_features* features) { delete features; }

int64_t cascata_features_count(const cascata_features* features) {
    return static_cast<int64_t>(features->impl.rows().size());
}

int cascata_features_write(const cascata_features* features, const char* path) {
    return guarded([&] { features->impl.write_tsv_file(require(path, "path")); });
}

int cascata_engagement_regressions(const cascata_features* features, const char* json_path) {
    return guarded([&] {
        const EngagementRegressions r = engagement_regressions(features->impl);
        std::ofstream out = open_output(require(json_path, "json_path"));
        write_regressions_json(r, out);
    });
}

int cascata_neighborhood_correlation(const cascata_features* features, const cascata_graph* graph,
                                     const char* metric, int followee_weight, int64_t n_shuffles,
                                     uint64_t seed, cascata_corr* out) {
    return guarded([&] {
        const FolloweeWeight weight =
            followee_weight == 0 ? FolloweeWeight::per_user : FolloweeWeight::per_tweet;
        const NeighborhoodResult r = neighborhood_correlation(
            features->impl, graph->impl, require(metric, "metric"), weight, n_shuffles, seed);
        out->r = r.r;
        out->null_mean = r.null.null_mean;
        out->null_2sd = r.null.null_2sd;
        out->n_eligible = r.n_eligible;
        out->skipped = r.null.skipped;
    });
}

/* -------------------------------------------------------------------- synth */

void cascata_synth_params_init(cascata_synth_params* params) {
    params->n_users = 100;
    params->edge_model = 0;
    params->edge_prob = 0.05;
    params->gamma = 2.5;
    params->reciprocity = 0.5;
    params->tweet_rate = 0.1;
    params->max_seeds = -1;
    params->p_pos = 0.25;
    params->p_neu = 0.5;
    params->p_neg = 0.25;
    params->reply_prob = 0.3;
    params->soc_rate = 0.1;
    params->cog_rate = 0.1;
    params->n_windows = 8;
    params->window_width = 86400;
    params->same_window = 1;
    params->seed = 0;
}

int cascata_synth_generate(const cascata_synth_params* params, const char* corpus_path,
                           const char* edges_path, const char* truth_path) {
    return guarded([&] {
        synth::SynthConfig cfg;
        cfg.n_users = params->n_users;
        cfg.edge_model = params->edge_model == 0 ? synth::EdgeModel::uniform
                                                 : synth::EdgeModel::powerlaw_out;
        cfg.edge_prob = params->edge_prob;
        cfg.gamma = params->gamma;
        cfg.reciprocity = params->reciprocity;
        cfg.tweet_rate = params->tweet_rate;
        cfg.max_seeds = params->max_seeds;
        cfg.p_pos = params->p_pos;
        cfg.p_neu = params->p_neu;
        cfg.p_neg = params->p_neg;
        cfg.reply_prob = params->reply_prob;
        cfg.soc_rate = params->soc_rate;
        cfg.cog_rate = params->cog_rate;
        cfg.n_windows = params->n_windows;
        cfg.window_width = params->window_width;
        cfg.same_window = params->same_window != 0;
        cfg.seed = params->seed;
        const FollowerGraph graph = synth::gen_graph(cfg);
        const synth::SynthCorpus sc = synth::gen_corpus(cfg, graph);
        sc.corpus.save_jsonl_file(require(corpus_path, "corpus_path"));
        synth::write_edges_tsv(graph, require(edges_path, "edges_path"));
        if (truth_path) synth::write_truth_tsv(sc, truth_path);
    });
}

} /* extern "C" */
