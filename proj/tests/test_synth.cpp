#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "cascata/cascade.hpp"
#include "cascata/errors.hpp"
#include "cascata/synth.hpp"
#include "oracles.hpp"

using namespace cascata;

namespace {

std::string corpus_bytes(const Corpus& c) {
    std::ostringstream out;
    c.save_jsonl(out);
    return out.str();
}

std::set<std::pair<std::string, std::string>> edge_set(const FollowerGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        for (const auto u : g.followers(v)) out.emplace(g.user(v), g.user(u));
    }
    return out;
}

oracle::Partition truth_partition(const synth::SynthCorpus& sc) {
    std::map<std::int64_t, std::vector<std::string>> groups;
    for (const auto& [tweet, cascade] : sc.truth) groups[cascade].push_back(tweet);
    oracle::Partition out;
    for (auto& [_, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        out.insert(ids);
    }
    return out;
}

oracle::Partition detected_partition(const CascadeSet& set, const Corpus& corpus) {
    oracle::Partition out;
    for (const auto& cascade : set.cascades()) {
        std::vector<std::string> ids;
        for (const auto idx : cascade.tweet_indices) ids.push_back(corpus.tweets()[idx].tweet_id);
        std::sort(ids.begin(), ids.end());
        out.insert(ids);
    }
    return out;
}

} // namespace

TEST_CASE("gen_graph: n=2, p=1, full reciprocity gives the complete digraph") {
    synth::SynthConfig cfg;
    cfg.n_users = 2;
    cfg.edge_prob = 1.0;
    cfg.reciprocity = 1.0;
    const FollowerGraph g = synth::gen_graph(cfg);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 2);
    CHECK(g.reciprocity() == doctest::Approx(1.0));
}

TEST_CASE("gen_graph: determinism in both edge models") {
    synth::SynthConfig cfg;
    cfg.n_users = 400;
    cfg.edge_prob = 0.01;
    cfg.seed = 9;
    CHECK(edge_set(synth::gen_graph(cfg)) == edge_set(synth::gen_graph(cfg)));
    cfg.seed = 10;
    const auto different = edge_set(synth::gen_graph(cfg));
    cfg.seed = 9;
    CHECK(edge_set(synth::gen_graph(cfg)) != different);
    cfg.edge_model = synth::EdgeModel::powerlaw_out;
    cfg.gamma = 2.3;
    CHECK(edge_set(synth::gen_graph(cfg)) == edge_set(synth::gen_graph(cfg)));
}

TEST_CASE("gen_graph: reciprocity lands within +-0.05 of target at n=1000") {
    for (const double target : {0.2, 0.5}) {
        synth::SynthConfig cfg;
        cfg.n_users = 1000;
        cfg.edge_prob = 0.008;
        cfg.reciprocity = target;
        cfg.seed = 3;
        const FollowerGraph g = synth::gen_graph(cfg);
        CHECK(g.reciprocity() == doctest::Approx(target).epsilon(0.1));
        CHECK(std::fabs(g.reciprocity() - target) <= 0.05);
    }
    synth::SynthConfig cfg;
    cfg.n_users = 1000;
    cfg.edge_model = synth::EdgeModel::powerlaw_out;
    cfg.gamma = 2.5;
    cfg.reciprocity = 0.49;
    cfg.seed = 4;
    const FollowerGraph g = synth::gen_graph(cfg);
    CHECK(std::fabs(g.reciprocity() - 0.49) <= 0.05);
}

TEST_CASE("gen_graph: no self-loops, no duplicates") {
    synth::SynthConfig cfg;
    cfg.n_users = 300;
    cfg.edge_prob = 0.02;
    cfg.seed = 12;
    const FollowerGraph g = synth::gen_graph(cfg);
    const auto edges = edge_set(g);
    CHECK(edges.size() == g.edge_count());
    for (const auto& [v, u] : edges) CHECK(v != u);
}

TEST_CASE("gen_graph: infeasible reciprocity/edge_prob combination is an error") {
    synth::SynthConfig cfg;
    cfg.n_users = 10;
    cfg.edge_prob = 1.0;
    cfg.reciprocity = 0.5; // requires p(2 - rho) <= 1
    CHECK_THROWS_AS(synth::gen_graph(cfg), Error);
    cfg.edge_prob = 2.0;
    CHECK_THROWS_AS(synth::gen_graph(cfg), Error);
    cfg.edge_prob = 0.5;
    cfg.p_pos = 0.9; // probabilities no longer sum to 1
    CHECK_THROWS_AS(synth::gen_graph(cfg), Error);
}

TEST_CASE("gen_corpus: reply_prob = 0 gives only singleton cascades") {
    synth::SynthConfig cfg;
    cfg.n_users = 50;
    cfg.edge_prob = 0.05;
    cfg.tweet_rate = 0.4;
    cfg.reply_prob = 0.0;
    cfg.n_windows = 4;
    cfg.seed = 21;
    const FollowerGraph g = synth::gen_graph(cfg);
    const synth::SynthCorpus sc = synth::gen_corpus(cfg, g);
    std::set<std::int64_t> cascades;
    std::map<std::int64_t, int> sizes;
    for (const auto& [_, cascade] : sc.truth) {
        cascades.insert(cascade);
        sizes[cascade] += 1;
    }
    CHECK(cascades.size() == sc.corpus.size());
    for (const auto& [_, size] : sizes) CHECK(size == 1);
}

TEST_CASE("gen_corpus: forced chain of 5 users yields one cascade with n_sp = 5") {
    synth::SynthConfig cfg;
    cfg.n_users = 5;
    cfg.tweet_rate = 1.0;
    cfg.max_seeds = 1;
    cfg.reply_prob = 1.0;
    cfg.n_windows = 5;
    cfg.seed = 1;
    // chain: u1 follows u0, u2 follows u1, ...
    const FollowerGraph g = FollowerGraph::from_edges(
        {{"u0", "u1"}, {"u1", "u2"}, {"u2", "u3"}, {"u3", "u4"}});
    const synth::SynthCorpus sc = synth::gen_corpus(cfg, g);
    CHECK(sc.corpus.size() == 5);
    const CascadeSet set = CascadeSet::detect(sc.corpus, g, {cfg.same_window, true});
    REQUIRE(set.size() == 1);
    CHECK(set.cascades()[0].n_sp == 5);
}

TEST_CASE("generated corpora satisfy the corpus invariants without repair") {
    synth::SynthConfig cfg;
    cfg.n_users = 80;
    cfg.edge_prob = 0.03;
    cfg.tweet_rate = 0.3;
    cfg.reply_prob = 0.4;
    cfg.n_windows = 6;
    cfg.seed = 33;
    const FollowerGraph g = synth::gen_graph(cfg);
    const synth::SynthCorpus sc = synth::gen_corpus(cfg, g);
    const auto& tweets = sc.corpus.tweets();
    for (std::size_t i = 1; i < tweets.size(); ++i) {
        const bool ordered = tweets[i - 1].timestamp < tweets[i].timestamp ||
                             (tweets[i - 1].timestamp == tweets[i].timestamp &&
                              tweets[i - 1].tweet_id < tweets[i].tweet_id);
        CHECK(ordered);
    }
    for (const auto& t : tweets) {
        REQUIRE(t.annotation.has_value());
        CHECK(t.annotation->soc <= t.annotation->w);
        CHECK(t.annotation->cog <= t.annotation->w);
        CHECK((t.annotation->e == -1 || t.annotation->e == 0 || t.annotation->e == 1));
        CHECK(sc.corpus.window_index(t.timestamp) >= 0);
        CHECK(sc.corpus.window_index(t.timestamp) < cfg.n_windows);
    }
    CHECK(sc.truth.size() == sc.corpus.size());
}

TEST_CASE("ground truth equals the detector and the brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        synth::SynthConfig cfg;
        cfg.n_users = 20 + (seed % 4) * 10;
        cfg.edge_prob = 0.04 + 0.02 * (seed % 3);
        cfg.tweet_rate = 0.25;
        cfg.reply_prob = 0.5;
        cfg.n_windows = 4 + (seed % 3);
        cfg.same_window = seed % 2 == 0;
        cfg.seed = 1000 + seed;
        const FollowerGraph g = synth::gen_graph(cfg);
        const synth::SynthCorpus sc = synth::gen_corpus(cfg, g);
        const CascadeSet set = CascadeSet::detect(sc.corpus, g, {cfg.same_window, true});
        const auto truth = truth_partition(sc);
        const auto detected = detected_partition(set, sc.corpus);
        REQUIRE(detected == truth);
        REQUIRE(detected == oracle::brute_detect(sc.corpus, g, cfg.same_window));
    }
}

TEST_CASE("gen_corpus is deterministic given the seed") {
    synth::SynthConfig cfg;
    cfg.n_users = 60;
    cfg.edge_prob = 0.04;
    cfg.tweet_rate = 0.3;
    cfg.reply_prob = 0.3;
    cfg.seed = 55;
    const FollowerGraph g = synth::gen_graph(cfg);
    const auto a = synth::gen_corpus(cfg, g);
    const auto b = synth::gen_corpus(cfg, g);
    CHECK(corpus_bytes(a.corpus) == corpus_bytes(b.corpus));
    CHECK(a.truth == b.truth);
}
