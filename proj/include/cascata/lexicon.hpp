#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cascata/corpus.hpp"

namespace cascata {

// Lexicon lemmas are lowercased, normalized tokens; a trailing '*' marks a
// prefix wildcard ("amig*" matches any token starting with "amig"), the
// usual stand-in for stemming in dictionary matching.

class SentimentLexicon {
public:
    // TSV columns: lemma, strength. strength is an integer in
    // [-5,-1] u [1,5]. '#' starts a comment line.
    static SentimentLexicon load_file(const std::string& path);
    static SentimentLexicon from_entries(const std::vector<std::pair<std::string, int>>& entries);

    // Maximum positive strength and maximum negative magnitude over all
    // entries matching the token (0 each when nothing matches).
    void match(std::string_view token, int& max_pos, int& max_neg) const;

    std::size_t size() const { return exact_.size() + prefix_.size(); }

private:
    void insert(const std::string& lemma, int strength);

    std::unordered_map<std::string, int> exact_;
    std::unordered_map<std::string, int> prefix_;
    std::size_t max_prefix_len_ = 0;
};

class CategoryLexicon {
public:
    // TSV columns: lemma, category where category is "social" or
    // "cognitive". '#' starts a comment line.
    static CategoryLexicon load_file(const std::string& path);
    static CategoryLexicon from_lemmas(const std::vector<std::string>& social,
                                       const std::vector<std::string>& cognitive);

    bool social_match(std::string_view token) const;
    bool cognitive_match(std::string_view token) const;

private:
    struct LemmaSet {
        std::unordered_set<std::string> exact;
        std::unordered_set<std::string> prefix;
        std::size_t max_prefix_len = 0;

        void insert(const std::string& lemma);
        bool match(std::string_view token) const;
    };

    LemmaSet social_;
    LemmaSet cognitive_;
};

// Annotates one text: e = sign(max positive - max negative); soc/cog count
// tokens matching the respective lemma sets; w is the token count.
Annotation annotate_text(std::string_view text, const SentimentLexicon& slex,
                         const CategoryLexicon& clex);

// Annotates every tweet that carries text. Tweets without text keep their
// supplied annotation; a tweet with neither is an error.
void annotate_corpus(Corpus& corpus, const SentimentLexicon& slex, const CategoryLexicon& clex);

enum class RatioMode {
    pooled,         // sum(soc) / sum(w) over the group
    per_tweet_mean, // mean over tweets of soc/w (w>0 tweets only)
};

struct CorpusMeans {
    double mu_p = 0;
    double mu_n = 0;
    double mu_soc = 0;
    double mu_cog = 0;
};

// Corpus-wide baselines: tweet ratios for sentiment, term ratios for
// social/cognitive content. Requires a fully annotated corpus.
CorpusMeans corpus_means(const Corpus& corpus, RatioMode mode = RatioMode::pooled);

} // namespace cascata
