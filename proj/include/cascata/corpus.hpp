#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cascata {

// Per-tweet annotation: sentiment trichotomy e in {-1,0,+1}, social and
// cognitive term counts, and word count. soc <= w and cog <= w always hold.
struct Annotation {
    int e = 0;
    std::int32_t soc = 0;
    std::int32_t cog = 0;
    std::int32_t w = 0;
};

struct TweetRecord {
    std::string tweet_id;
    std::string author_id;
    std::int64_t timestamp = 0; // epoch seconds UTC
    std::optional<std::string> text;
    std::optional<Annotation> annotation;
};

enum class CorpusFormat { jsonl, tsv };

struct CorpusOptions {
    std::int64_t window_width = 86400; // seconds
    // Window 0 anchor. When unset, defaults to 00:00:00 UTC of the day of
    // the earliest tweet. The discretization is half-open: window k covers
    // [origin + k*w, origin + (k+1)*w).
    std::optional<std::int64_t> origin;
};

// Immutable, time-sorted message stream. Sorting is the stable total order
// (timestamp, tweet_id); duplicate tweet ids are a fatal error.
class Corpus {
public:
    static Corpus parse_file(const std::string& path, CorpusFormat format,
                             const CorpusOptions& options = {});
    static Corpus parse_stream(std::istream& in, CorpusFormat format,
                               const CorpusOptions& options = {});
    // Takes already-built records (synthetic corpora, tests). Same
    // validation and sorting as parsing.
    static Corpus from_records(std::vector<TweetRecord> records,
                               const CorpusOptions& options = {});

    const std::vector<TweetRecord>& tweets() const { return tweets_; }
    std::size_t size() const { return tweets_.size(); }

    std::int64_t window_width() const { return window_width_; }
    std::int64_t origin() const { return origin_; }

    // floor((timestamp - origin) / window_width); negative for timestamps
    // before the origin.
    std::int64_t window_index(std::int64_t timestamp) const;

    std::int64_t skipped_lines() const { return skipped_lines_; }
    bool fully_annotated() const;

    // Canonical JSONL emission: fixed key order, no extra whitespace, LF
    // line endings. parse(save(c)) reproduces c byte-identically.
    void save_jsonl(std::ostream& out) const;
    void save_jsonl_file(const std::string& path) const;

    // In-place annotation update, used by the lexicon module.
    void set_annotation(std::size_t index, const Annotation& a);

private:
    Corpus() = default;
    void finalize(const CorpusOptions& options);

    std::vector<TweetRecord> tweets_;
    std::int64_t window_width_ = 86400;
    std::int64_t origin_ = 0;
    std::int64_t skipped_lines_ = 0;
};

CorpusFormat corpus_format_from_name(const std::string& name);

} // namespace cascata
