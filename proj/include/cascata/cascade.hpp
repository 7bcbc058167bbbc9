#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascata/corpus.hpp"
#include "cascata/lexicon.hpp"
#include "cascata/network.hpp"

namespace cascata {

enum class SentimentLabel { positive, negative, neutral, bipolar };

const char* to_string(SentimentLabel label);

struct ContentLabel {
    bool social_high = false;
    bool cognitive_high = false;
};

struct CascadeRatios {
    double r_p = 0;
    double r_u = 0;
    double r_n = 0;
    double soc_ratio = 0;
    double cog_ratio = 0;
    std::int64_t n = 0;
};

struct Cascade {
    std::int64_t id = 0;
    std::vector<std::uint32_t> tweet_indices; // into Corpus::tweets(), time-ordered
    std::string seed_tweet;                   // tweet id with minimal (timestamp, tweet_id)
    std::int64_t n_tweets = 0;
    std::int64_t n_sp = 0; // unique posting users
    std::int64_t n_c = 0;  // unique users following at least one spreader

    // filled by classify_cascades
    std::optional<CascadeRatios> ratios;
    std::optional<SentimentLabel> sentiment;
    std::optional<ContentLabel> content;
};

struct DetectOptions {
    bool same_window = true;       // allow links within one window (besides consecutive)
    bool include_spreaders = true; // listeners who are themselves spreaders count in n_c
};

// Time-constrained cascade detection. A propagation link joins tweet m1 by
// v to a later tweet m2 by u when u follows v and m2 falls in the same
// (optional) or next time window. Cascades are the connected components of
// that link graph; every tweet lands in exactly one, singletons included.
// Output is ordered by seed (timestamp, tweet_id) with ids 0..n-1.
class CascadeSet {
public:
    static CascadeSet detect(const Corpus& corpus, const FollowerGraph& graph,
                             const DetectOptions& options = {});

    const std::vector<Cascade>& cascades() const { return cascades_; }
    std::size_t size() const { return cascades_.size(); }
    bool classified() const { return classified_; }
    const CorpusMeans& means() const { return means_; }
    std::size_t corpus_size() const { return corpus_size_; }

    // Computes Eq.-style ratios per cascade and assigns sentiment and
    // content labels against the corpus means. The corpus must be the one
    // detection ran on, fully annotated.
    void classify(const Corpus& corpus, RatioMode mode = RatioMode::pooled);

    // TSV report; label columns appear once classify() has run.
    void write_report(std::ostream& out) const;
    void write_report_file(const std::string& path) const;

    // Label counts with two-decimal percentages + corpus means, as JSON.
    void write_summary(std::ostream& out) const;
    void write_summary_file(const std::string& path) const;

    // column in {n_sp, n_c, n_tweets}; optional sentiment label filter
    // ("positive", ..., or content filters "social_high", "social_low",
    // "cognitive_high", "cognitive_low").
    std::vector<double> values(const std::string& column, const std::string& group = "") const;

private:
    std::vector<Cascade> cascades_;
    bool classified_ = false;
    CorpusMeans means_;
    std::size_t corpus_size_ = 0;
};

// n_c for an explicit spreader set; detection uses the same routine.
std::int64_t exposure(const std::vector<std::string>& spreaders, const FollowerGraph& graph,
                      bool include_spreaders = true);

// Cascades grouped by the seed tweet's sentiment: e in {-1, 0, +1} ->
// cascade indices. Groups partition the cascade list.
std::map<int, std::vector<std::size_t>> seed_sentiment_group(const CascadeSet& set,
                                                             const Corpus& corpus);

CascadeRatios cascade_ratios(const Corpus& corpus, const std::vector<std::uint32_t>& tweet_indices,
                             RatioMode mode = RatioMode::pooled);

SentimentLabel label_sentiment(const CascadeRatios& r, const CorpusMeans& m);
ContentLabel label_content(const CascadeRatios& r, const CorpusMeans& m);

} // namespace cascata
