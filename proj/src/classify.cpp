#include <array>
#include <fstream>

#include "cascata/cascade.hpp"
#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"

namespace cascata {

const char* to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::positive: return "positive";
        case SentimentLabel::negative: return "negative";
        case SentimentLabel::neutral: return "neutral";
        case SentimentLabel::bipolar: return "bipolar";
    }
    return "?";
}

CascadeRatios cascade_ratios(const Corpus& corpus, const std::vector<std::uint32_t>& tweet_indices,
                             RatioMode mode) {
    if (tweet_indices.empty()) throw_invalid("cascade_ratios: empty cascade");
    CascadeRatios r;
    r.n = static_cast<std::int64_t>(tweet_indices.size());
    std::int64_t n_pos = 0, n_neu = 0, n_neg = 0;
    std::int64_t soc_sum = 0, cog_sum = 0, w_sum = 0;
    double soc_ratio_sum = 0, cog_ratio_sum = 0;
    std::int64_t n_with_words = 0;
    const auto& tweets = corpus.tweets();
    for (const auto idx : tweet_indices) {
        const auto& annotation = tweets.at(idx).annotation;
        if (!annotation)
            throw_invalid("cascade_ratios: tweet '" + tweets[idx].tweet_id + "' not annotated");
        switch (annotation->e) {
            case 1: ++n_pos; break;
            case -1: ++n_neg; break;
            default: ++n_neu; break;
        }
        soc_sum += annotation->soc;
        cog_sum += annotation->cog;
        w_sum += annotation->w;
        if (annotation->w > 0) {
            ++n_with_words;
            soc_ratio_sum += static_cast<double>(annotation->soc) / annotation->w;
            cog_ratio_sum += static_cast<double>(annotation->cog) / annotation->w;
        }
    }
    const double n = static_cast<double>(r.n);
    r.r_p = static_cast<double>(n_pos) / n;
    r.r_u = static_cast<double>(n_neu) / n;
    r.r_n = static_cast<double>(n_neg) / n;
    if (mode == RatioMode::pooled) {
        r.soc_ratio = w_sum > 0 ? static_cast<double>(soc_sum) / static_cast<double>(w_sum) : 0.0;
        r.cog_ratio = w_sum > 0 ? static_cast<double>(cog_sum) / static_cast<double>(w_sum) : 0.0;
    } else {
        r.soc_ratio = n_with_words > 0 ? soc_ratio_sum / static_cast<double>(n_with_words) : 0.0;
        r.cog_ratio = n_with_words > 0 ? cog_ratio_sum / static_cast<double>(n_with_words) : 0.0;
    }
    return r;
}

// Boundary equality goes to the <= branch, matching the inequalities as
// written: neutral unless a ratio strictly exceeds its corpus mean.
SentimentLabel label_sentiment(const CascadeRatios& r, const CorpusMeans& m) {
    const bool pos = r.r_p > m.mu_p;
    const bool neg = r.r_n > m.mu_n;
    if (pos && neg) return SentimentLabel::bipolar;
    if (pos) return SentimentLabel::positive;
    if (neg) return SentimentLabel::negative;
    return SentimentLabel::neutral;
}

ContentLabel label_content(const CascadeRatios& r, const CorpusMeans& m) {
    ContentLabel label;
    label.social_high = r.soc_ratio > m.mu_soc;
    label.cognitive_high = r.cog_ratio > m.mu_cog;
    return label;
}

void CascadeSet::classify(const Corpus& corpus, RatioMode mode) {
    if (corpus.size() != corpus_size_)
        throw_invalid("classify: corpus does not match the one cascades were detected on");
    means_ = corpus_means(corpus, mode);
    for (auto& cascade : cascades_) {
        const CascadeRatios r = cascade_ratios(corpus, cascade.tweet_indices, mode);
        cascade.ratios = r;
        cascade.sentiment = label_sentiment(r, means_);
        cascade.content = label_content(r, means_);
    }
    classified_ = true;
}

void CascadeSet::write_summary(std::ostream& out) const {
    if (!classified_) throw_invalid("write_summary: cascades not classified");
    std::array<std::int64_t, 4> counts{0, 0, 0, 0};
    for (const auto& cascade : cascades_) {
        counts[static_cast<std::size_t>(*cascade.sentiment)] += 1;
    }
    std::int64_t social_high = 0, cognitive_high = 0;
    for (const auto& cascade : cascades_) {
        if (cascade.content->social_high) ++social_high;
        if (cascade.content->cognitive_high) ++cognitive_high;
    }
    const auto total = static_cast<std::int64_t>(cascades_.size());
    out << "{\"n_cascades\":" << total << ",\"sentiment\":{";
    bool first = true;
    for (const SentimentLabel l : {SentimentLabel::positive, SentimentLabel::negative,
                                   SentimentLabel::neutral, SentimentLabel::bipolar}) {
        if (!first) out << ",";
        first = false;
        const std::int64_t count = counts[static_cast<std::size_t>(l)];
        out << "\"" << to_string(l) << "\":{\"count\":" << count << ",\"percent\":\""
            << format_percent(count, total) << "\"}";
    }
    out << "},\"content\":{\"social_high\":" << social_high
        << ",\"cognitive_high\":" << cognitive_high << "},\"means\":{\"mu_p\":"
        << format_double(means_.mu_p) << ",\"mu_n\":" << format_double(means_.mu_n)
        << ",\"mu_soc\":" << format_double(means_.mu_soc)
        << ",\"mu_cog\":" << format_double(means_.mu_cog) << "}}\n";
}

void CascadeSet::write_summary_file(const std::string& path) const {
    std::ofstream out = open_output(path);
    write_summary(out);
}

} // namespace cascata
