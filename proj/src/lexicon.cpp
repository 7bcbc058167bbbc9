#include "cascata/lexicon.hpp"

#include <fstream>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"
#include "cascata/parallel.hpp"
#include "cascata/text.hpp"

namespace cascata {

namespace {

struct LexLine {
    std::string lemma;
    std::string value;
    bool wildcard = false;
};

// Shared reader for both lexicon file kinds: two tab-separated columns,
// '#' comments, blank lines ignored. Malformed lines are fatal; lexicons
// are small curated inputs, silent skipping would hide typos.
std::vector<LexLine> read_lexicon_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open lexicon file: " + path);
    std::vector<LexLine> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw_parse(path + ":" + std::to_string(lineno) + ": expected 'lemma<TAB>value'");
        LexLine entry;
        std::string raw(fields[0]);
        if (raw.find('*') != std::string::npos) {
            if (raw.back() != '*' || raw.find('*') != raw.size() - 1)
                throw_parse(path + ":" + std::to_string(lineno) +
                            ": wildcard '*' allowed only in final position");
            raw.pop_back();
            entry.wildcard = true;
        }
        entry.lemma = normalize_lemma(raw);
        if (entry.lemma.empty())
            throw_parse(path + ":" + std::to_string(lineno) + ": empty lemma");
        entry.value = std::string(fields[1]);
        out.push_back(std::move(entry));
    }
    return out;
}

int parse_strength(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        if (v == 0 || v < -5 || v > 5)
            throw_parse(where + ": strength must be in [-5,-1] or [1,5]");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw_parse(where + ": strength must be an integer");
    }
}

} // namespace

void SentimentLexicon::insert(const std::string& lemma, int strength) {
    if (lemma.empty()) throw_parse("empty sentiment lemma");
    exact_[lemma] = strength;
}

SentimentLexicon SentimentLexicon::load_file(const std::string& path) {
    SentimentLexicon lex;
    for (const auto& entry : read_lexicon_lines(path)) {
        const int strength = parse_strength(entry.value, path + " lemma '" + entry.lemma + "'");
        if (entry.wildcard) {
            lex.prefix_[entry.lemma] = strength;
            lex.max_prefix_len_ = std::max(lex.max_prefix_len_, entry.lemma.size());
        } else {
            lex.exact_[entry.lemma] = strength;
        }
    }
    return lex;
}

SentimentLexicon SentimentLexicon::from_entries(
    const std::vector<std::pair<std::string, int>>& entries) {
    SentimentLexicon lex;
    for (const auto& [raw, strength] : entries) {
        if (strength == 0 || strength < -5 || strength > 5)
            throw_invalid("sentiment strength out of range for lemma '" + raw + "'");
        if (!raw.empty() && raw.back() == '*') {
            const std::string lemma = normalize_lemma(raw.substr(0, raw.size() - 1));
            if (lemma.empty()) throw_invalid("empty sentiment lemma");
            lex.prefix_[lemma] = strength;
            lex.max_prefix_len_ = std::max(lex.max_prefix_len_, lemma.size());
        } else {
            lex.insert(normalize_lemma(raw), strength);
        }
    }
    return lex;
}

void SentimentLexicon::match(std::string_view token, int& max_pos, int& max_neg) const {
    max_pos = 0;
    max_neg = 0;
    auto consider = [&](int strength) {
        if (strength > 0 && strength > max_pos) max_pos = strength;
        if (strength < 0 && -strength > max_neg) max_neg = -strength;
    };
    if (const auto it = exact_.find(std::string(token)); it != exact_.end()) consider(it->second);
    if (!prefix_.empty()) {
        const std::size_t limit = std::min(token.size(), max_prefix_len_);
        std::string buf;
        buf.reserve(limit);
        for (std::size_t len = 1; len <= limit; ++len) {
            buf.assign(token.substr(0, len));
            if (const auto it = prefix_.find(buf); it != prefix_.end()) consider(it->second);
        }
    }
}

void CategoryLexicon::LemmaSet::insert(const std::string& lemma) {
    exact.insert(lemma);
}

bool CategoryLexicon::LemmaSet::match(std::string_view token) const {
    if (exact.count(std::string(token))) return true;
    const std::size_t limit = std::min(token.size(), max_prefix_len);
    std::string buf;
    buf.reserve(limit);
    for (std::size_t len = 1; len <= limit; ++len) {
        buf.assign(token.substr(0, len));
        if (prefix.count(buf)) return true;
    }
    return false;
}

CategoryLexicon CategoryLexicon::load_file(const std::string& path) {
    CategoryLexicon lex;
    for (const auto& entry : read_lexicon_lines(path)) {
        LemmaSet* set = nullptr;
        if (entry.value == "social") set = &lex.social_;
        else if (entry.value == "cognitive") set = &lex.cognitive_;
        else throw_parse(path + ": category must be 'social' or 'cognitive', got '" + entry.value + "'");
        if (entry.wildcard) {
            set->prefix.insert(entry.lemma);
            set->max_prefix_len = std::max(set->max_prefix_len, entry.lemma.size());
        } else {
            set->insert(entry.lemma);
        }
    }
    return lex;
}

CategoryLexicon CategoryLexicon::from_lemmas(const std::vector<std::string>& social,
                                             const std::vector<std::string>& cognitive) {
    CategoryLexicon lex;
    auto add = [](LemmaSet& set, const std::string& raw) {
        if (!raw.empty() && raw.back() == '*') {
            const std::string lemma = normalize_lemma(raw.substr(0, raw.size() - 1));
            if (lemma.empty()) throw_invalid("empty category lemma");
            set.prefix.insert(lemma);
            set.max_prefix_len = std::max(set.max_prefix_len, lemma.size());
        } else {
            const std::string lemma = normalize_lemma(raw);
            if (lemma.empty()) throw_invalid("empty category lemma");
            set.insert(lemma);
        }
    };
    for (const auto& raw : social) add(lex.social_, raw);
    for (const auto& raw : cognitive) add(lex.cognitive_, raw);
    return lex;
}

bool CategoryLexicon::social_match(std::string_view token) const { return social_.match(token); }
bool CategoryLexicon::cognitive_match(std::string_view token) const { return cognitive_.match(token); }

Annotation annotate_text(std::string_view text, const SentimentLexicon& slex,
                         const CategoryLexicon& clex) {
    Annotation a;
    const std::vector<std::string> tokens = tokenize(text);
    a.w = static_cast<std::int32_t>(tokens.size());
    int best_pos = 0;
    int best_neg = 0;
    for (const auto& token : tokens) {
        int p = 0, n = 0;
        slex.match(token, p, n);
        if (p > best_pos) best_pos = p;
        if (n > best_neg) best_neg = n;
        if (clex.social_match(token)) ++a.soc;
        if (clex.cognitive_match(token)) ++a.cog;
    }
    a.e = best_pos > best_neg ? 1 : (best_neg > best_pos ? -1 : 0);
    return a;
}

void annotate_corpus(Corpus& corpus, const SentimentLexicon& slex, const CategoryLexicon& clex) {
    const auto& tweets = corpus.tweets();
    for (const auto& t : tweets) {
        if (!t.text && !t.annotation)
            throw_invalid("unannotatable tweet '" + t.tweet_id + "': no text and no annotation");
    }
    std::vector<Annotation> results(tweets.size());
    std::vector<unsigned char> fresh(tweets.size(), 0);
    parallel_for_index(tweets.size(), [&](std::size_t i) {
        if (tweets[i].text) {
            results[i] = annotate_text(*tweets[i].text, slex, clex);
            fresh[i] = 1;
        }
    });
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        if (fresh[i]) corpus.set_annotation(i, results[i]);
    }
}

CorpusMeans corpus_means(const Corpus& corpus, RatioMode mode) {
    if (corpus.size() == 0) throw_empty("corpus_means: empty corpus");
    if (!corpus.fully_annotated()) throw_invalid("corpus_means: corpus not fully annotated");
    CorpusMeans m;
    std::int64_t n_pos = 0, n_neg = 0;
    std::int64_t soc_sum = 0, cog_sum = 0, w_sum = 0;
    double soc_ratio_sum = 0, cog_ratio_sum = 0;
    std::int64_t n_with_words = 0;
    for (const auto& t : corpus.tweets()) {
        const Annotation& a = *t.annotation;
        if (a.e == 1) ++n_pos;
        if (a.e == -1) ++n_neg;
        soc_sum += a.soc;
        cog_sum += a.cog;
        w_sum += a.w;
        if (a.w > 0) {
            ++n_with_words;
            soc_ratio_sum += static_cast<double>(a.soc) / a.w;
            cog_ratio_sum += static_cast<double>(a.cog) / a.w;
        }
    }
    const double n = static_cast<double>(corpus.size());
    m.mu_p = static_cast<double>(n_pos) / n;
    m.mu_n = static_cast<double>(n_neg) / n;
    if (mode == RatioMode::pooled) {
        m.mu_soc = w_sum > 0 ? static_cast<double>(soc_sum) / static_cast<double>(w_sum) : 0.0;
        m.mu_cog = w_sum > 0 ? static_cast<double>(cog_sum) / static_cast<double>(w_sum) : 0.0;
    } else {
        m.mu_soc = n_with_words > 0 ? soc_ratio_sum / static_cast<double>(n_with_words) : 0.0;
        m.mu_cog = n_with_words > 0 ? cog_ratio_sum / static_cast<double>(n_with_words) : 0.0;
    }
    return m;
}

} // namespace cascata
