// cascata command-line front end. Talks to the core exclusively through the
// C API in cascata/cascata.h; everything here is argument plumbing, report
// assembly, and the run manifest.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascata/cascata.h"

namespace fs = std::filesystem;

namespace {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// checks a C API status, turning failures into exit-code-2 errors
void check(int status) {
    if (status != CASCATA_OK) throw DataError(cascata_last_error());
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    return out;
}

// flat key = value config file; '#' comments
std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw DataError(path + ":" + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

// Expands "--config FILE" into "--key=value" tokens for every file entry
// whose flag is not already on the command line, so the file mirrors the
// flags with the flags taking precedence. Unknown keys surface as CLI11
// usage errors.
std::vector<std::string> inject_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    auto given = [&](const std::string& flag) {
        for (const auto& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };
    for (const auto& [key, value] : read_kv_file(config_path)) {
        if (key == "config") continue;
        const std::string flag = "--" + key;
        if (!given(flag)) args.push_back(flag + "=" + value);
    }
    return args;
}

// unique_ptr-style guards for C handles
struct CorpusHandle {
    cascata_corpus* p = nullptr;
    ~CorpusHandle() { cascata_corpus_free(p); }
};
struct GraphHandle {
    cascata_graph* p = nullptr;
    ~GraphHandle() { cascata_graph_free(p); }
};
struct LexiconsHandle {
    cascata_lexicons* p = nullptr;
    ~LexiconsHandle() { cascata_lexicons_free(p); }
};
struct CoresHandle {
    cascata_cores* p = nullptr;
    ~CoresHandle() { cascata_cores_free(p); }
};
struct CascadesHandle {
    cascata_cascades* p = nullptr;
    ~CascadesHandle() { cascata_cascades_free(p); }
};
struct FeaturesHandle {
    cascata_features* p = nullptr;
    ~FeaturesHandle() { cascata_features_free(p); }
};
struct DoubleBuf {
    double* p = nullptr;
    int64_t n = 0;
    ~DoubleBuf() { cascata_free(p); }
};

// ---------------------------------------------------------------------------
// run manifest: configuration + seed + input digests; no timestamps, so a
// rerun with identical inputs is byte-identical

struct Manifest {
    std::string subcommand;
    uint64_t seed = 0;
    std::map<std::string, std::string> config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write manifest: " + path);
        out << "{\"tool\":\"cascata\",\"version\":\"" << cascata_version()
            << "\",\"subcommand\":\"" << json_escape(subcommand) << "\",\"seed\":" << seed
            << ",\"config\":{";
        bool first = true;
        for (const auto& [k, v] : config) {
            if (!first) out << ",";
            first = false;
            out << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
        }
        out << "},\"inputs\":[";
        first = true;
        for (const auto& input : inputs) {
            char digest[17];
            check(cascata_file_digest_hex(input.c_str(), digest));
            if (!first) out << ",";
            first = false;
            out << "{\"path\":\"" << json_escape(input) << "\",\"digest\":\"" << digest << "\"}";
        }
        out << "],\"outputs\":[";
        first = true;
        for (const auto& output : outputs) {
            if (!first) out << ",";
            first = false;
            out << "\"" << json_escape(output) << "\"";
        }
        out << "]}\n";
    }
};

// ---------------------------------------------------------------------------
// common options

struct Common {
    std::string config_file;
    std::string out_dir = ".";
    int64_t seed_flag = -1; // -1 = unset (by flag or config)
    int threads = 0;

    uint64_t resolve_seed() const {
        if (seed_flag >= 0) return static_cast<uint64_t>(seed_flag);
        if (const char* env = std::getenv("CASCATA_SEED")) return std::strtoull(env, nullptr, 10);
        return 0;
    }
};

void add_common(CLI::App* cmd, Common& common) {
    // handled by pre-parse injection in main(); declared here for --help
    cmd->add_option("--config", common.config_file,
                    "flat key=value config file mirroring the flags; flags override");
    cmd->add_option("--out-dir", common.out_dir, "output directory (created if missing)");
    cmd->add_option("--seed", common.seed_flag,
                    "64-bit seed (fallback: config, then $CASCATA_SEED, then 0)");
    cmd->add_option("--threads", common.threads, "worker threads for permutation loops (0 = auto)");
}

void prepare(Common& common) {
    fs::create_directories(common.out_dir);
    cascata_set_threads(common.threads);
}

std::string out_path(const Common& common, const std::string& name) {
    return (fs::path(common.out_dir) / name).string();
}

// ---------------------------------------------------------------------------
// shared pieces

struct CorpusArgs {
    std::string corpus;
    std::string format = "jsonl";
    int64_t window = 86400;
    int64_t origin = CASCATA_ORIGIN_AUTO;
};

void add_corpus_args(CLI::App* cmd, CorpusArgs& args, bool required = true) {
    auto* opt = cmd->add_option("--corpus", args.corpus, "corpus file (JSONL or TSV)");
    if (required) opt->required();
    cmd->add_option("--format", args.format, "corpus format: jsonl | tsv")
        ->check(CLI::IsMember({"jsonl", "tsv"}));
    cmd->add_option("--window", args.window, "time window width, seconds (default 86400)");
    cmd->add_option("--origin", args.origin, "window-0 anchor, epoch seconds (default: midnight UTC of earliest tweet)");
}

cascata_corpus* open_corpus(const CorpusArgs& args) {
    cascata_corpus* corpus = nullptr;
    check(cascata_corpus_open(args.corpus.c_str(), args.format.c_str(), args.window, args.origin,
                              &corpus));
    return corpus;
}

int ratio_mode_code(const std::string& mode) {
    if (mode == "pooled") return 0;
    if (mode == "per-tweet") return 1;
    throw DataError("ratio mode must be pooled or per-tweet");
}

// fit + LRT + ccdf/fitline emission shared by `fit` and `pipeline`. Sizes
// can legitimately be zero (a spreader nobody follows has n_c = 0); the
// distribution analysis covers the positive part and reports the drop.
bool emit_fit(const double* raw, int64_t raw_n, int64_t xmin, const std::string& fit_path,
              const std::string& ccdf_path, const std::string& fitline_path) {
    std::vector<double> positive;
    positive.reserve(static_cast<std::size_t>(raw_n));
    for (int64_t i = 0; i < raw_n; ++i) {
        if (raw[i] >= 1.0) positive.push_back(raw[i]);
    }
    const double* values = positive.data();
    const auto n = static_cast<int64_t>(positive.size());
    const int64_t dropped = raw_n - n;

    std::ofstream json(fit_path, std::ios::binary);
    if (!json) throw DataError("cannot write " + fit_path);
    cascata_powerlaw_fit fit;
    const int status = n == 0 ? CASCATA_E_EMPTY : cascata_fit_power_law(values, n, xmin, &fit);
    if (status != CASCATA_OK) {
        json << "{\"error\":\"" << json_escape(n == 0 ? "no positive values" : cascata_last_error())
             << "\"}\n";
        return false;
    }
    double R = 0, p_R = 0;
    const int lrt_status = cascata_lrt_lognormal(values, n, &fit, &R, &p_R);
    json << "{\"alpha\":" << fmt_double(fit.alpha) << ",\"xmin\":" << fit.x_min
         << ",\"sigma\":" << fmt_double(fit.sigma) << ",\"ntail\":" << fit.n_tail
         << ",\"D\":" << fmt_double(fit.ks_d);
    if (lrt_status == CASCATA_OK) {
        json << ",\"R\":" << fmt_double(R) << ",\"p_R\":" << fmt_double(p_R);
    } else {
        json << ",\"lrt_error\":\"" << json_escape(cascata_last_error()) << "\"";
    }
    if (dropped > 0) json << ",\"dropped_nonpositive\":" << dropped;
    json << "}\n";
    if (!ccdf_path.empty()) check(cascata_write_ccdf(values, n, ccdf_path.c_str()));
    if (!fitline_path.empty()) {
        double max_value = 1;
        for (int64_t i = 0; i < n; ++i) max_value = std::max(max_value, values[i]);
        check(cascata_write_fitline(&fit, n, static_cast<int64_t>(max_value),
                                    fitline_path.c_str()));
    }
    return true;
}

// pairwise KS table over groups of one column
void emit_ks_table(const std::vector<std::pair<std::string, DoubleBuf*>>& groups, bool weighted,
                   int64_t n_perm, uint64_t seed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "group_a\tgroup_b\tn_a\tn_b\tD\tp\tweighted\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto& [name_a, buf_a] = groups[i];
            const auto& [name_b, buf_b] = groups[j];
            if (buf_a->n < 10 || buf_b->n < 10) continue; // KS needs 10 points per side
            double d = 0, p = 0;
            check(cascata_ks_two_sample(buf_a->p, buf_a->n, buf_b->p, buf_b->n, weighted ? 1 : 0,
                                        n_perm, seed, &d, &p));
            out << name_a << '\t' << name_b << '\t' << buf_a->n << '\t' << buf_b->n << '\t'
                << fmt_double(d) << '\t' << fmt_double(p) << '\t' << (weighted ? 1 : 0) << "\n";
        }
    }
}

cascata_synth_params synth_params_from_file(const std::string& path, uint64_t seed_fallback,
                                            bool seed_flag_set) {
    cascata_synth_params params;
    cascata_synth_params_init(&params);
    const auto kv = read_kv_file(path);
    auto get_i64 = [&](const char* key, int64_t& target) {
        if (const auto it = kv.find(key); it != kv.end()) target = std::strtoll(it->second.c_str(), nullptr, 10);
    };
    auto get_double = [&](const char* key, double& target) {
        if (const auto it = kv.find(key); it != kv.end()) target = std::strtod(it->second.c_str(), nullptr);
    };
    get_i64("n_users", params.n_users);
    if (const auto it = kv.find("edge_model"); it != kv.end()) {
        if (it->second == "uniform") params.edge_model = 0;
        else if (it->second == "powerlaw") params.edge_model = 1;
        else throw DataError("synth config: edge_model must be uniform or powerlaw");
    }
    get_double("edge_prob", params.edge_prob);
    get_double("gamma", params.gamma);
    get_double("reciprocity", params.reciprocity);
    get_double("tweet_rate", params.tweet_rate);
    get_i64("max_seeds", params.max_seeds);
    get_double("p_pos", params.p_pos);
    get_double("p_neu", params.p_neu);
    get_double("p_neg", params.p_neg);
    get_double("reply_prob", params.reply_prob);
    get_double("soc_rate", params.soc_rate);
    get_double("cog_rate", params.cog_rate);
    get_i64("n_windows", params.n_windows);
    get_i64("window_width", params.window_width);
    if (const auto it = kv.find("same_window"); it != kv.end())
        params.same_window = (it->second == "true" || it->second == "1") ? 1 : 0;
    // precedence: --seed flag, then the generator config, then env/defaults
    if (seed_flag_set) {
        params.seed = seed_fallback;
    } else if (const auto it = kv.find("seed"); it != kv.end()) {
        params.seed = std::strtoull(it->second.c_str(), nullptr, 10);
    } else {
        params.seed = seed_fallback;
    }
    return params;
}

void config_note(Manifest& manifest, const std::string& key, const std::string& value) {
    manifest.config[key] = value;
}

// ---------------------------------------------------------------------------
// subcommands

struct AnnotateCmd {
    Common common;
    CorpusArgs corpus;
    std::string slex, clex, out_name = "annotated.jsonl";

    int run(const CLI::App*) {
        prepare(common);
        LexiconsHandle lexicons;
        check(cascata_lexicons_open(slex.empty() ? nullptr : slex.c_str(),
                                    clex.empty() ? nullptr : clex.c_str(), &lexicons.p));
        CorpusHandle handle{open_corpus(corpus)};
        check(cascata_corpus_annotate(handle.p, lexicons.p));
        const std::string out = out_path(common, out_name);
        check(cascata_corpus_save_jsonl(handle.p, out.c_str()));
        std::printf("annotated %lld tweets (%lld malformed lines skipped) -> %s\n",
                    static_cast<long long>(cascata_corpus_size(handle.p)),
                    static_cast<long long>(cascata_corpus_skipped(handle.p)), out.c_str());
        Manifest manifest;
        manifest.subcommand = "annotate";
        manifest.seed = common.resolve_seed();
        config_note(manifest, "corpus", corpus.corpus);
        config_note(manifest, "format", corpus.format);
        if (!slex.empty()) config_note(manifest, "slex", slex);
        if (!clex.empty()) config_note(manifest, "clex", clex);
        manifest.inputs.push_back(corpus.corpus);
        if (!slex.empty()) manifest.inputs.push_back(slex);
        if (!clex.empty()) manifest.inputs.push_back(clex);
        manifest.outputs.push_back(out_name);
        manifest.write(out_path(common, "manifest.json"));
        return 0;
    }
};

struct CascadesCmd {
    Common common;
    CorpusArgs corpus;
    std::string edges;
    bool no_same_window = false;
    bool exclude_spreaders = false;
    bool classify = false;
    std::string slex, clex;
    std::string ratio_mode = "pooled";
    std::string report_name = "cascades.tsv";

    int run(const CLI::App*) {
        prepare(common);
        CorpusHandle corpus_handle{open_corpus(corpus)};
        GraphHandle graph;
        check(cascata_graph_open(edges.c_str(), &graph.p));
        if (classify && (!slex.empty() || !clex.empty())) {
            LexiconsHandle lexicons;
            check(cascata_lexicons_open(slex.empty() ? nullptr : slex.c_str(),
                                        clex.empty() ? nullptr : clex.c_str(), &lexicons.p));
            check(cascata_corpus_annotate(corpus_handle.p, lexicons.p));
        }
        CascadesHandle cascades;
        check(cascata_detect_cascades(corpus_handle.p, graph.p, no_same_window ? 0 : 1,
                                      exclude_spreaders ? 0 : 1, &cascades.p));
        if (classify)
            check(cascata_cascades_classify(cascades.p, corpus_handle.p,
                                            ratio_mode_code(ratio_mode)));
        const std::string report = out_path(common, report_name);
        check(cascata_cascades_write_report(cascades.p, report.c_str()));
        std::printf("%lld cascades over %lld tweets (%lld malformed lines skipped) -> %s\n",
                    static_cast<long long>(cascata_cascades_count(cascades.p)),
                    static_cast<long long>(cascata_corpus_size(corpus_handle.p)),
                    static_cast<long long>(cascata_corpus_skipped(corpus_handle.p)),
                    report.c_str());

        Manifest manifest;
        manifest.subcommand = classify ? "classify" : "cascades";
        manifest.seed = common.resolve_seed();
        config_note(manifest, "corpus", corpus.corpus);
        config_note(manifest, "edges", edges);
        config_note(manifest, "window", std::to_string(corpus.window));
        config_note(manifest, "same_window", no_same_window ? "false" : "true");
        config_note(manifest, "include_spreaders", exclude_spreaders ? "false" : "true");
        manifest.inputs = {corpus.corpus, edges};
        manifest.outputs.push_back(report_name);
        if (classify) {
            config_note(manifest, "ratio_mode", ratio_mode);
            check(cascata_cascades_write_summary(cascades.p, out_path(common, "summary.json").c_str()));
            manifest.outputs.push_back("summary.json");
            if (!slex.empty()) manifest.inputs.push_back(slex);
            if (!clex.empty()) manifest.inputs.push_back(clex);
        }
        manifest.write(out_path(common, "manifest.json"));
        return 0;
    }
};

struct FitCmd {
    Common common;
    std::string in;
    std::string column = "n_sp";
    std::string group_col, group;
    int64_t xmin = 0;

    int run(const CLI::App*) {
        prepare(common);
        if (group_col.empty() != group.empty())
            throw DataError("--group-col and --group must be given together");
        DoubleBuf values;
        check(cascata_tsv_read_column(in.c_str(), column.c_str(),
                                      group_col.empty() ? nullptr : group_col.c_str(),
                                      group_col.empty() ? nullptr : group.c_str(), &values.p,
                                      &values.n));
        if (!emit_fit(values.p, values.n, xmin, out_path(common, "fit.json"),
                      out_path(common, "ccdf.tsv"), out_path(common, "fitline.tsv")))
            throw DataError(std::string("fit failed: ") + cascata_last_error());
        std::printf("fit of %s [%lld values] -> %s\n", column.c_str(),
                    static_cast<long long>(values.n), out_path(common, "fit.json").c_str());
        Manifest manifest;
        manifest.subcommand = "fit";
        manifest.seed = common.resolve_seed();
        config_note(manifest, "in", in);
        config_note(manifest, "column", column);
        if (!group_col.empty()) {
            config_note(manifest, "group_col", group_col);
            config_note(manifest, "group", group);
        }
        if (xmin > 0) config_note(manifest, "xmin", std::to_string(xmin));
        manifest.inputs = {in};
        manifest.outputs = {"fit.json", "ccdf.tsv", "fitline.tsv"};
        manifest.write(out_path(common, "manifest.json"));
        return 0;
    }
};

struct CompareCmd {
    Common common;
    std::string in, in2;
    std::string column = "n_sp", column2;
    std::string group_col;
    bool weighted = false;
    int64_t n_perm = 1000;

    int run(const CLI::App*) {
        prepare(common);
        const uint64_t seed = common.resolve_seed();
        std::vector<std::pair<std::string, DoubleBuf*>> groups;
        std::vector<std::unique_ptr<DoubleBuf>> storage;
        if (!in2.empty()) {
            auto a = std::make_unique<DoubleBuf>();
            auto b = std::make_unique<DoubleBuf>();
            check(cascata_tsv_read_column(in.c_str(), column.c_str(), nullptr, nullptr, &a->p, &a->n));
            const std::string col2 = column2.empty() ? column : column2;
            check(cascata_tsv_read_column(in2.c_str(), col2.c_str(), nullptr, nullptr, &b->p, &b->n));
            groups.emplace_back("a", a.get());
            groups.emplace_back("b", b.get());
            storage.push_back(std::move(a));
            storage.push_back(std::move(b));
        } else {
            if (group_col.empty()) throw DataError("compare needs --group-col or --in2");
            char** names = nullptr;
            int64_t n_names = 0;
            check(cascata_tsv_distinct(in.c_str(), group_col.c_str(), &names, &n_names));
            for (int64_t i = 0; i < n_names; ++i) {
                auto buf = std::make_unique<DoubleBuf>();
                check(cascata_tsv_read_column(in.c_str(), column.c_str(), group_col.c_str(),
                                              names[i], &buf->p, &buf->n));
                groups.emplace_back(names[i], buf.get());
                storage.push_back(std::move(buf));
            }
            cascata_strings_free(names, n_names);
        }
        emit_ks_table(groups, weighted, n_perm, seed, out_path(common, "ks.tsv"));
        std::printf("KS comparisons -> %s\n", out_path(common, "ks.tsv").c_str());
        Manifest manifest;
        manifest.subcommand = "compare";
        manifest.seed = seed;
        config_note(manifest, "in", in);
        config_note(manifest, "column", column);
        if (!in2.empty()) config_note(manifest, "in2", in2);
        if (!group_col.empty()) config_note(manifest, "group_col", group_col);
        config_note(manifest, "weighted", weighted ? "true" : "false");
        config_note(manifest, "nperm", std::to_string(n_perm));
        manifest.inputs = {in};
        if (!in2.empty()) manifest.inputs.push_back(in2);
        manifest.outputs = {"ks.tsv"};
        manifest.write(out_path(common, "manifest.json"));
        return 0;
    }
};

struct UserlevelCmd {
    Common common;
    CorpusArgs corpus;
    std::string edges;
    std::string timeline;
    std::string degree_mode = "distinct";
    std::string followee_weight = "user";
    std::string ratio_mode = "pooled";
    std::string slex, clex;
    int64_t n_shuffles = 1000;

    void analyze(cascata_corpus* corpus_handle, cascata_graph* graph, cascata_cores* cores,
                 uint64_t seed, const std::string& suffix, Manifest& manifest) {
        FeaturesHandle features;
        check(cascata_user_features(corpus_handle, graph, cores, ratio_mode_code(ratio_mode),
                                    &features.p));
        const std::string features_name = "features" + suffix + ".tsv";
        check(cascata_features_write(features.p, out_path(common, features_name).c_str()));
        manifest.outputs.push_back(features_name);

        const std::string regressions_name = "regressions" + suffix + ".json";
        check(cascata_engagement_regressions(features.p,
                                             out_path(common, regressions_name).c_str()));
        manifest.outputs.push_back(regressions_name);

        const std::string neighborhood_name = "neighborhood" + suffix + ".json";
        std::ofstream out(out_path(common, neighborhood_name), std::ios::binary);
        if (!out) throw DataError("cannot write " + neighborhood_name);
        out << "{";
        const char* metrics[] = {"pos", "neg", "neu", "soc", "cog"};
        bool first = true;
        for (const char* metric : metrics) {
            cascata_corr corr;
            check(cascata_neighborhood_correlation(features.p, graph, metric,
                                                   followee_weight == "tweet" ? 1 : 0, n_shuffles,
                                                   seed, &corr));
            if (!first) out << ",";
            first = false;
            out << "\"" << metric << "\":{\"r\":" << fmt_double(corr.r)
                << ",\"null_mean\":" << fmt_double(corr.null_mean)
                << ",\"null_2sd\":" << fmt_double(corr.null_2sd)
                << ",\"n_eligible\":" << corr.n_eligible << ",\"skipped\":" << corr.skipped << "}";
        }
        out << "}\n";
        manifest.outputs.push_back(neighborhood_name);
    }

    int run(const CLI::App*) {
        prepare(common);
        const uint64_t seed = common.resolve_seed();
        CorpusHandle corpus_handle{open_corpus(corpus)};
        GraphHandle graph;
        check(cascata_graph_open(edges.c_str(), &graph.p));
        if (!slex.empty() || !clex.empty()) {
            LexiconsHandle lexicons;
            check(cascata_lexicons_open(slex.empty() ? nullptr : slex.c_str(),
                                        clex.empty() ? nullptr : clex.c_str(), &lexicons.p));
            check(cascata_corpus_annotate(corpus_handle.p, lexicons.p));
        }
        CoresHandle cores;
        check(cascata_graph_kcore(graph.p, degree_mode == "inout" ? 1 : 0, &cores.p));

        Manifest manifest;
        manifest.subcommand = "userlevel";
        manifest.seed = seed;
        analyze(corpus_handle.p, graph.p, cores.p, seed, "", manifest);
        if (!timeline.empty()) {
            CorpusArgs timeline_args = corpus;
            timeline_args.corpus = timeline;
            CorpusHandle timeline_handle{open_corpus(timeline_args)};
            analyze(timeline_handle.p, graph.p, cores.p, seed, "_timeline", manifest);
            manifest.inputs.push_back(timeline);
            config_note(manifest, "timeline", timeline);
        }
        config_note(manifest, "corpus", corpus.corpus);
        config_note(manifest, "edges", edges);
        config_note(manifest, "degree_mode", degree_mode);
        config_note(manifest, "followee_weight", followee_weight);
        config_note(manifest, "ratio_mode", ratio_mode);
        config_note(manifest, "nshuffles", std::to_string(n_shuffles));
        manifest.inputs.insert(manifest.inputs.begin(), {corpus.corpus, edges});
        manifest.write(out_path(common, "manifest.json"));
        std::printf("user-level reports -> %s\n", common.out_dir.c_str());
        return 0;
    }
};

struct SynthCmd {
    Common common;
    std::string synth_config;

    int run(const CLI::App*) {
        prepare(common);
        const cascata_synth_params params =
            synth_params_from_file(synth_config, common.resolve_seed(), common.seed_flag >= 0);
        const std::string corpus = out_path(common, "corpus.jsonl");
        const std::string edges = out_path(common, "edges.tsv");
        const std::string truth = out_path(common, "truth.tsv");
        check(cascata_synth_generate(&params, corpus.c_str(), edges.c_str(), truth.c_str()));
        std::printf("synthetic corpus -> %s\n", common.out_dir.c_str());
        Manifest manifest;
        manifest.subcommand = "synth";
        manifest.seed = params.seed;
        config_note(manifest, "synth_config", synth_config);
        manifest.inputs = {synth_config};
        manifest.outputs = {"corpus.jsonl", "edges.tsv", "truth.tsv"};
        manifest.write(out_path(common, "manifest.json"));
        return 0;
    }
};

struct PipelineCmd {
    Common common;
    CorpusArgs corpus;
    std::string edges;
    std::string synth_config;
    std::string slex, clex;
    bool no_same_window = false;
    bool exclude_spreaders = false;
    std::string degree_mode = "distinct";
    std::string followee_weight = "user";
    std::string ratio_mode = "pooled";
    int64_t n_perm = 1000;
    int64_t n_shuffles = 1000;
    int64_t min_group = 50;

    int run(const CLI::App*) {
        prepare(common);
        const uint64_t seed = common.resolve_seed();
        Manifest manifest;
        manifest.subcommand = "pipeline";
        manifest.seed = seed;

        std::string corpus_path = corpus.corpus;
        std::string edges_path = edges;
        std::string corpus_note = corpus.corpus;
        std::string edges_note = edges;
        if (!synth_config.empty()) {
            fs::create_directories(out_path(common, "inputs"));
            cascata_synth_params params =
                synth_params_from_file(synth_config, seed, common.seed_flag >= 0);
            corpus_path = out_path(common, "inputs/corpus.jsonl");
            edges_path = out_path(common, "inputs/edges.tsv");
            const std::string truth = out_path(common, "inputs/truth.tsv");
            check(cascata_synth_generate(&params, corpus_path.c_str(), edges_path.c_str(),
                                         truth.c_str()));
            corpus.corpus = corpus_path;
            corpus.format = "jsonl";
            corpus.window = params.window_width;
            corpus.origin = 0; // synthetic timestamps anchor window 0 at epoch 0
            corpus_note = "inputs/corpus.jsonl"; // tree-relative, keeps reruns byte-identical
            edges_note = "inputs/edges.tsv";
            manifest.inputs.push_back(synth_config);
            config_note(manifest, "synth_config", synth_config);
            manifest.outputs.insert(manifest.outputs.end(),
                                    {"inputs/corpus.jsonl", "inputs/edges.tsv", "inputs/truth.tsv"});
        } else {
            if (corpus_path.empty() || edges_path.empty())
                throw DataError("pipeline needs --synth-config or --corpus and --edges");
            manifest.inputs.push_back(corpus_path);
            manifest.inputs.push_back(edges_path);
        }
        config_note(manifest, "corpus", corpus_note);
        config_note(manifest, "edges", edges_note);
        config_note(manifest, "window", std::to_string(corpus.window));
        config_note(manifest, "same_window", no_same_window ? "false" : "true");
        config_note(manifest, "include_spreaders", exclude_spreaders ? "false" : "true");
        config_note(manifest, "degree_mode", degree_mode);
        config_note(manifest, "followee_weight", followee_weight);
        config_note(manifest, "ratio_mode", ratio_mode);
        config_note(manifest, "nperm", std::to_string(n_perm));
        config_note(manifest, "nshuffles", std::to_string(n_shuffles));

        CorpusHandle corpus_handle{open_corpus(corpus)};
        GraphHandle graph;
        check(cascata_graph_open(edges_path.c_str(), &graph.p));
        if (!slex.empty() || !clex.empty()) {
            LexiconsHandle lexicons;
            check(cascata_lexicons_open(slex.empty() ? nullptr : slex.c_str(),
                                        clex.empty() ? nullptr : clex.c_str(), &lexicons.p));
            check(cascata_corpus_annotate(corpus_handle.p, lexicons.p));
            check(cascata_corpus_save_jsonl(corpus_handle.p,
                                            out_path(common, "annotated.jsonl").c_str()));
            manifest.outputs.push_back("annotated.jsonl");
            if (!slex.empty()) manifest.inputs.push_back(slex);
            if (!clex.empty()) manifest.inputs.push_back(clex);
        }
        if (!cascata_corpus_is_annotated(corpus_handle.p))
            throw DataError("pipeline needs an annotated corpus (pre-annotated or via --slex/--clex)");

        // cascades + labels
        CascadesHandle cascades;
        check(cascata_detect_cascades(corpus_handle.p, graph.p, no_same_window ? 0 : 1,
                                      exclude_spreaders ? 0 : 1, &cascades.p));
        check(cascata_cascades_classify(cascades.p, corpus_handle.p, ratio_mode_code(ratio_mode)));
        check(cascata_cascades_write_report(cascades.p, out_path(common, "cascades.tsv").c_str()));
        check(cascata_cascades_write_summary(cascades.p, out_path(common, "summary.json").c_str()));
        manifest.outputs.insert(manifest.outputs.end(), {"cascades.tsv", "summary.json"});

        // distribution fits per measure and group
        fs::create_directories(out_path(common, "fits"));
        fs::create_directories(out_path(common, "ccdf"));
        fs::create_directories(out_path(common, "ks"));
        const char* measures[] = {"n_sp", "n_c"};
        const char* measure_tag[] = {"nsp", "nc"};
        const std::vector<std::string> fit_groups = {"all",         "positive",      "negative",
                                                     "neutral",     "bipolar",       "social_high",
                                                     "social_low",  "cognitive_high", "cognitive_low"};
        for (int mi = 0; mi < 2; ++mi) {
            for (const auto& group : fit_groups) {
                DoubleBuf values;
                check(cascata_cascades_values(cascades.p, measures[mi], group.c_str(), &values.p,
                                              &values.n));
                const std::string base = std::string(measure_tag[mi]) + "_" + group;
                const std::string fit_path = out_path(common, "fits/" + base + ".json");
                if (values.n < min_group) {
                    std::ofstream out(fit_path, std::ios::binary);
                    out << "{\"error\":\"group below --min-group (" << values.n << " < "
                        << min_group << ")\"}\n";
                } else {
                    emit_fit(values.p, values.n, 0, fit_path,
                             out_path(common, "ccdf/" + base + ".tsv"),
                             out_path(common, "ccdf/" + base + "_fit.tsv"));
                    manifest.outputs.push_back("ccdf/" + base + ".tsv");
                }
                manifest.outputs.push_back("fits/" + base + ".json");
            }
            // pairwise KS tables: sentiment classes, social, cognitive
            const std::vector<std::pair<std::string, std::vector<std::string>>> families = {
                {"sentiment", {"positive", "negative", "neutral", "bipolar"}},
                {"social", {"social_high", "social_low"}},
                {"cognitive", {"cognitive_high", "cognitive_low"}},
            };
            for (const auto& [family, members] : families) {
                std::vector<std::pair<std::string, DoubleBuf*>> groups;
                std::vector<std::unique_ptr<DoubleBuf>> storage;
                for (const auto& member : members) {
                    auto buf = std::make_unique<DoubleBuf>();
                    check(cascata_cascades_values(cascades.p, measures[mi], member.c_str(), &buf->p,
                                                  &buf->n));
                    groups.emplace_back(member, buf.get());
                    storage.push_back(std::move(buf));
                }
                const std::string name = "ks/" + std::string(measure_tag[mi]) + "_" + family + ".tsv";
                emit_ks_table(groups, true, n_perm, seed, out_path(common, name));
                manifest.outputs.push_back(name);
            }
        }

        // user level
        CoresHandle cores;
        check(cascata_graph_kcore(graph.p, degree_mode == "inout" ? 1 : 0, &cores.p));
        FeaturesHandle features;
        check(cascata_user_features(corpus_handle.p, graph.p, cores.p, ratio_mode_code(ratio_mode),
                                    &features.p));
        check(cascata_features_write(features.p, out_path(common, "features.tsv").c_str()));
        manifest.outputs.push_back("features.tsv");
        check(cascata_engagement_regressions(features.p,
                                             out_path(common, "regressions.json").c_str()));
        manifest.outputs.push_back("regressions.json");
        {
            std::ofstream out(out_path(common, "neighborhood.json"), std::ios::binary);
            if (!out) throw DataError("cannot write neighborhood.json");
            out << "{";
            const char* metrics[] = {"pos", "neg", "neu", "soc", "cog"};
            bool first = true;
            for (const char* metric : metrics) {
                cascata_corr corr;
                check(cascata_neighborhood_correlation(features.p, graph.p, metric,
                                                       followee_weight == "tweet" ? 1 : 0,
                                                       n_shuffles, seed, &corr));
                if (!first) out << ",";
                first = false;
                out << "\"" << metric << "\":{\"r\":" << fmt_double(corr.r)
                    << ",\"null_mean\":" << fmt_double(corr.null_mean)
                    << ",\"null_2sd\":" << fmt_double(corr.null_2sd)
                    << ",\"n_eligible\":" << corr.n_eligible << ",\"skipped\":" << corr.skipped
                    << "}";
            }
            out << "}\n";
            manifest.outputs.push_back("neighborhood.json");
        }

        manifest.write(out_path(common, "manifest.json"));
        std::printf("pipeline reports -> %s\n", common.out_dir.c_str());
        return 0;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cascata: time-constrained cascade, sentiment, and heavy-tail analysis"};
    app.require_subcommand(1);

    AnnotateCmd annotate;
    auto* annotate_cmd = app.add_subcommand("annotate", "annotate a corpus with lexicons");
    add_common(annotate_cmd, annotate.common);
    add_corpus_args(annotate_cmd, annotate.corpus);
    annotate_cmd->add_option("--slex", annotate.slex, "sentiment lexicon TSV");
    annotate_cmd->add_option("--clex", annotate.clex, "category lexicon TSV");
    annotate_cmd->add_option("--out-name", annotate.out_name, "output file name");

    CascadesCmd cascades;
    auto* cascades_cmd = app.add_subcommand("cascades", "detect time-constrained cascades");
    add_common(cascades_cmd, cascades.common);
    add_corpus_args(cascades_cmd, cascades.corpus);
    cascades_cmd->add_option("--edges", cascades.edges, "follower edge list TSV")->required();
    cascades_cmd->add_flag("--no-same-window", cascades.no_same_window,
                           "only consecutive-window links");
    cascades_cmd->add_flag("--exclude-spreaders", cascades.exclude_spreaders,
                           "exclude spreaders from listener counts");

    CascadesCmd classify;
    classify.classify = true;
    auto* classify_cmd = app.add_subcommand("classify", "detect + label cascades (Eq.-1 ratios)");
    add_common(classify_cmd, classify.common);
    add_corpus_args(classify_cmd, classify.corpus);
    classify_cmd->add_option("--edges", classify.edges, "follower edge list TSV")->required();
    classify_cmd->add_flag("--no-same-window", classify.no_same_window,
                           "only consecutive-window links");
    classify_cmd->add_flag("--exclude-spreaders", classify.exclude_spreaders,
                           "exclude spreaders from listener counts");
    classify_cmd->add_option("--slex", classify.slex, "sentiment lexicon TSV (annotate first)");
    classify_cmd->add_option("--clex", classify.clex, "category lexicon TSV (annotate first)");
    classify_cmd->add_option("--ratio-mode", classify.ratio_mode, "pooled | per-tweet")
        ->check(CLI::IsMember({"pooled", "per-tweet"}));

    FitCmd fit;
    auto* fit_cmd = app.add_subcommand("fit", "discrete power-law fit + lognormal comparison");
    add_common(fit_cmd, fit.common);
    fit_cmd->add_option("--in", fit.in, "input TSV (e.g. a cascade report)")->required();
    fit_cmd->add_option("--column", fit.column, "numeric column to fit (default n_sp)");
    fit_cmd->add_option("--group-col", fit.group_col, "restrict to rows where this column ...");
    fit_cmd->add_option("--group", fit.group, "... equals this value");
    fit_cmd->add_option("--xmin", fit.xmin, "fix x_min instead of searching");

    CompareCmd compare;
    auto* compare_cmd = app.add_subcommand("compare", "two-sample KS tests with permutation p");
    add_common(compare_cmd, compare.common);
    compare_cmd->add_option("--in", compare.in, "input TSV")->required();
    compare_cmd->add_option("--column", compare.column, "numeric column (default n_sp)");
    compare_cmd->add_option("--column2", compare.column2, "column in --in2 (default: --column)");
    compare_cmd->add_option("--group-col", compare.group_col, "label column for pairwise tests");
    compare_cmd->add_option("--in2", compare.in2, "second TSV (two-file mode)");
    compare_cmd->add_flag("--weighted", compare.weighted, "tail-corrected KS statistic");
    compare_cmd->add_option("--nperm", compare.n_perm, "permutations (default 1000)");

    UserlevelCmd userlevel;
    auto* userlevel_cmd =
        app.add_subcommand("userlevel", "per-user features, regressions, neighborhood correlations");
    add_common(userlevel_cmd, userlevel.common);
    add_corpus_args(userlevel_cmd, userlevel.corpus);
    userlevel_cmd->add_option("--edges", userlevel.edges, "follower edge list TSV")->required();
    userlevel_cmd->add_option("--timeline", userlevel.timeline,
                              "second per-user corpus; adds *_timeline reports");
    userlevel_cmd->add_option("--degree-mode", userlevel.degree_mode, "distinct | inout")
        ->check(CLI::IsMember({"distinct", "inout"}));
    userlevel_cmd->add_option("--followee-weight", userlevel.followee_weight, "user | tweet")
        ->check(CLI::IsMember({"user", "tweet"}));
    userlevel_cmd->add_option("--ratio-mode", userlevel.ratio_mode, "pooled | per-tweet")
        ->check(CLI::IsMember({"pooled", "per-tweet"}));
    userlevel_cmd->add_option("--slex", userlevel.slex, "sentiment lexicon TSV (annotate first)");
    userlevel_cmd->add_option("--clex", userlevel.clex, "category lexicon TSV (annotate first)");
    userlevel_cmd->add_option("--nshuffles", userlevel.n_shuffles, "shuffle-null iterations");

    SynthCmd synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic graph + corpus");
    add_common(synth_cmd, synth.common);
    synth_cmd->add_option("--synth-config", synth.synth_config, "generator key=value config")
        ->required();

    PipelineCmd pipeline;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "full analysis tree in one run");
    add_common(pipeline_cmd, pipeline.common);
    add_corpus_args(pipeline_cmd, pipeline.corpus, /*required=*/false);
    pipeline_cmd->add_option("--edges", pipeline.edges, "follower edge list TSV");
    pipeline_cmd->add_option("--synth-config", pipeline.synth_config,
                             "generate inputs instead of reading --corpus/--edges");
    pipeline_cmd->add_option("--slex", pipeline.slex, "sentiment lexicon TSV");
    pipeline_cmd->add_option("--clex", pipeline.clex, "category lexicon TSV");
    pipeline_cmd->add_flag("--no-same-window", pipeline.no_same_window,
                           "only consecutive-window links");
    pipeline_cmd->add_flag("--exclude-spreaders", pipeline.exclude_spreaders,
                           "exclude spreaders from listener counts");
    pipeline_cmd->add_option("--degree-mode", pipeline.degree_mode, "distinct | inout")
        ->check(CLI::IsMember({"distinct", "inout"}));
    pipeline_cmd->add_option("--followee-weight", pipeline.followee_weight, "user | tweet")
        ->check(CLI::IsMember({"user", "tweet"}));
    pipeline_cmd->add_option("--ratio-mode", pipeline.ratio_mode, "pooled | per-tweet")
        ->check(CLI::IsMember({"pooled", "per-tweet"}));
    pipeline_cmd->add_option("--nperm", pipeline.n_perm, "KS permutations (default 1000)");
    pipeline_cmd->add_option("--nshuffles", pipeline.n_shuffles, "shuffle-null iterations");
    pipeline_cmd->add_option("--min-group", pipeline.min_group,
                             "minimum group size for per-group fits");

    try {
        std::vector<std::string> args = inject_config(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 vector parse order
        app.parse(std::move(args));
        if (annotate_cmd->parsed()) return annotate.run(annotate_cmd);
        if (cascades_cmd->parsed()) return cascades.run(cascades_cmd);
        if (classify_cmd->parsed()) return classify.run(classify_cmd);
        if (fit_cmd->parsed()) return fit.run(fit_cmd);
        if (compare_cmd->parsed()) return compare.run(compare_cmd);
        if (userlevel_cmd->parsed()) return userlevel.run(userlevel_cmd);
        if (synth_cmd->parsed()) return synth.run(synth_cmd);
        if (pipeline_cmd->parsed()) return pipeline.run(pipeline_cmd);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors -> 1, --help -> 0
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
