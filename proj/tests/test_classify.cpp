#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <sstream>

#include "cascata/cascade.hpp"
#include "cascata/ioutil.hpp"
#include "cascata/rng.hpp"

using namespace cascata;

namespace {

Corpus corpus_with(const std::vector<Annotation>& annotations) {
    std::vector<TweetRecord> records;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        TweetRecord t;
        t.tweet_id = "t" + std::to_string(i);
        t.author_id = "u" + std::to_string(i);
        t.timestamp = static_cast<std::int64_t>(i);
        t.annotation = annotations[i];
        records.push_back(t);
    }
    return Corpus::from_records(std::move(records));
}

std::vector<std::uint32_t> all_indices(const Corpus& c) {
    std::vector<std::uint32_t> idx(c.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    return idx;
}

} // namespace

TEST_CASE("cascade_ratios: counts over tweets") {
    const Corpus c = corpus_with({{1, 0, 0, 1}, {1, 0, 0, 1}, {0, 0, 0, 1}, {-1, 0, 0, 1}});
    const CascadeRatios r = cascade_ratios(c, all_indices(c));
    CHECK(r.r_p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r_u == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.r_n == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.r_p + r.r_u + r.r_n == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cascade_ratios: single neutral tweet") {
    const Corpus c = corpus_with({{0, 0, 0, 1}});
    const CascadeRatios r = cascade_ratios(c, all_indices(c));
    CHECK(r.r_p == 0.0);
    CHECK(r.r_u == 1.0);
    CHECK(r.r_n == 0.0);
}

TEST_CASE("cascade_ratios: pooled social ratio") {
    const Corpus c = corpus_with({{0, 2, 0, 10}, {0, 1, 0, 10}});
    const CascadeRatios r = cascade_ratios(c, all_indices(c));
    CHECK(r.soc_ratio == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("cascade_ratios: all-zero-word cascade gives zero ratios") {
    const Corpus c = corpus_with({{0, 0, 0, 0}, {1, 0, 0, 0}});
    const CascadeRatios r = cascade_ratios(c, all_indices(c));
    CHECK(r.soc_ratio == 0.0);
    CHECK(r.cog_ratio == 0.0);
}

TEST_CASE("cascade_ratios on a single tweet reproduces indicator ratios") {
    for (const int e : {-1, 0, 1}) {
        const Corpus c = corpus_with({{e, 3, 1, 8}});
        const CascadeRatios r = cascade_ratios(c, all_indices(c));
        CHECK(r.r_p == (e == 1 ? 1.0 : 0.0));
        CHECK(r.r_n == (e == -1 ? 1.0 : 0.0));
        CHECK(r.r_u == (e == 0 ? 1.0 : 0.0));
        CHECK(r.soc_ratio == doctest::Approx(3.0 / 8.0));
        CHECK(r.cog_ratio == doctest::Approx(1.0 / 8.0));
    }
}

namespace {

CascadeRatios ratios(double r_p, double r_n) {
    CascadeRatios r;
    r.r_p = r_p;
    r.r_n = r_n;
    r.r_u = 1.0 - r_p - r_n;
    r.n = 1;
    return r;
}

CorpusMeans means(double mu_p, double mu_n) {
    CorpusMeans m;
    m.mu_p = mu_p;
    m.mu_n = mu_n;
    return m;
}

} // namespace

TEST_CASE("label_sentiment rules") {
    CHECK(label_sentiment(ratios(0.0, 0.0), means(0.3, 0.2)) == SentimentLabel::neutral);
    CHECK(label_sentiment(ratios(0.6, 0.3), means(0.45, 0.22)) == SentimentLabel::bipolar);
    CHECK(label_sentiment(ratios(0.5, 0.1), means(0.3, 0.2)) == SentimentLabel::positive);
    CHECK(label_sentiment(ratios(0.1, 0.5), means(0.3, 0.2)) == SentimentLabel::negative);
    // boundary equality goes to the <= branch
    CHECK(label_sentiment(ratios(0.3, 0.2), means(0.3, 0.2)) == SentimentLabel::neutral);
}

TEST_CASE("the four labels are mutually exclusive and exhaustive") {
    Rng rng(47);
    for (int trial = 0; trial < 5000; ++trial) {
        const double r_p = rng.next_double();
        const double r_n = rng.next_double() * (1.0 - r_p);
        const CorpusMeans m = means(rng.next_double(), rng.next_double());
        const SentimentLabel label = label_sentiment(ratios(r_p, r_n), m);
        int matches = 0;
        if (r_p <= m.mu_p && r_n <= m.mu_n) matches += label == SentimentLabel::neutral;
        if (r_p > m.mu_p && r_n <= m.mu_n) matches += label == SentimentLabel::positive;
        if (r_n > m.mu_n && r_p <= m.mu_p) matches += label == SentimentLabel::negative;
        if (r_p > m.mu_p && r_n > m.mu_n) matches += label == SentimentLabel::bipolar;
        CHECK(matches == 1);
    }
}

TEST_CASE("label_sentiment is monotone in r_p") {
    Rng rng(53);
    for (int trial = 0; trial < 2000; ++trial) {
        const double r_n = rng.next_double() * 0.5;
        const CorpusMeans m = means(rng.next_double(), rng.next_double());
        const double lo = rng.next_double() * 0.5;
        const double hi = lo + rng.next_double() * (1.0 - r_n - lo);
        const SentimentLabel a = label_sentiment(ratios(lo, r_n), m);
        const SentimentLabel b = label_sentiment(ratios(hi, r_n), m);
        if (a == SentimentLabel::positive) CHECK(b != SentimentLabel::neutral);
        if (a == SentimentLabel::bipolar) CHECK(b != SentimentLabel::negative);
    }
}

TEST_CASE("label_content: strict inequality against the means") {
    CorpusMeans m;
    m.mu_soc = 0.1;
    m.mu_cog = 0.2;
    CascadeRatios r;
    r.soc_ratio = 0.1; // equality -> low
    r.cog_ratio = 0.25;
    const ContentLabel label = label_content(r, m);
    CHECK_FALSE(label.social_high);
    CHECK(label.cognitive_high);
    r.soc_ratio = 0.2;
    CHECK(label_content(r, m).social_high);
}

TEST_CASE("format_percent rounds half away from zero at two decimals") {
    CHECK(format_percent(43415, 96065) == "45.19");
    CHECK(format_percent(20989, 96065) == "21.85");
    CHECK(format_percent(30664, 96065) == "31.92");
    CHECK(format_percent(997, 96065) == "1.04");
    CHECK(format_percent(0, 7) == "0.00");
    CHECK(format_percent(7, 7) == "100.00");
}

TEST_CASE("classify_cascades labels every cascade exactly once and counts add up") {
    Rng rng(59);
    std::vector<TweetRecord> records;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int u = 0; u < 30; ++u) {
        for (int v = 0; v < 30; ++v) {
            if (u != v && rng.next_bernoulli(0.05))
                edges.emplace_back("u" + std::to_string(u), "u" + std::to_string(v));
        }
    }
    for (int i = 0; i < 300; ++i) {
        TweetRecord t;
        t.tweet_id = "t" + std::to_string(i);
        t.author_id = "u" + std::to_string(rng.next_below(30));
        t.timestamp = static_cast<std::int64_t>(rng.next_below(5 * 86400));
        const double u = rng.next_double();
        Annotation a;
        a.e = u < 0.3 ? 1 : (u < 0.6 ? 0 : -1);
        a.w = 4 + static_cast<std::int32_t>(rng.next_below(10));
        a.soc = static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(a.w)));
        a.cog = static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(a.w)));
        t.annotation = a;
        records.push_back(t);
    }
    const Corpus corpus = Corpus::from_records(std::move(records), CorpusOptions{86400, 0});
    const FollowerGraph graph = FollowerGraph::from_edges(edges);
    CascadeSet set = CascadeSet::detect(corpus, graph);
    set.classify(corpus);
    std::array<std::int64_t, 4> counts{0, 0, 0, 0};
    for (const auto& cascade : set.cascades()) {
        REQUIRE(cascade.sentiment.has_value());
        REQUIRE(cascade.content.has_value());
        counts[static_cast<std::size_t>(*cascade.sentiment)] += 1;
        CHECK(*cascade.sentiment == label_sentiment(*cascade.ratios, set.means()));
    }
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] ==
          static_cast<std::int64_t>(set.size()));

    // summary JSON reports matching counts
    std::ostringstream summary;
    set.write_summary(summary);
    const std::string s = summary.str();
    CHECK(s.find("\"n_cascades\":" + std::to_string(set.size())) != std::string::npos);

    // report gains the label columns
    std::ostringstream report;
    set.write_report(report);
    CHECK(report.str().find("\tsentiment\t") != std::string::npos);
}

TEST_CASE("classify rejects a mismatched corpus") {
    const FollowerGraph g = FollowerGraph::from_edges({{"a", "b"}});
    const Corpus c1 = corpus_with({{0, 0, 0, 1}, {1, 0, 0, 1}});
    const Corpus c2 = corpus_with({{0, 0, 0, 1}});
    CascadeSet set = CascadeSet::detect(c1, g);
    CHECK_THROWS(set.classify(c2));
}
