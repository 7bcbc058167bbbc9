#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "cascata/cascade.hpp"
#include "cascata/rng.hpp"
#include "oracles.hpp"

using namespace cascata;

namespace {

TweetRecord tweet(const std::string& id, const std::string& author, std::int64_t ts, int e = 0) {
    TweetRecord t;
    t.tweet_id = id;
    t.author_id = author;
    t.timestamp = ts;
    t.annotation = Annotation{e, 0, 0, 1};
    return t;
}

oracle::Partition partition_of(const CascadeSet& set, const Corpus& corpus) {
    oracle::Partition out;
    for (const auto& cascade : set.cascades()) {
        std::vector<std::string> ids;
        for (const auto idx : cascade.tweet_indices) ids.push_back(corpus.tweets()[idx].tweet_id);
        std::sort(ids.begin(), ids.end());
        out.insert(ids);
    }
    return out;
}

constexpr std::int64_t kDay = 86400;

struct RandomInstance {
    Corpus corpus;
    FollowerGraph graph;
};

RandomInstance random_instance(Rng& rng, std::size_t n_users, std::size_t n_tweets,
                               double edge_p, std::int64_t n_windows) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t v = 0; v < n_users; ++v) {
        for (std::size_t u = 0; u < n_users; ++u) {
            if (u != v && rng.next_bernoulli(edge_p))
                edges.emplace_back("u" + std::to_string(v), "u" + std::to_string(u));
        }
    }
    if (edges.empty()) edges.emplace_back("u0", "u1");
    std::vector<TweetRecord> records;
    for (std::size_t i = 0; i < n_tweets; ++i) {
        const auto author = rng.next_below(n_users + 2); // a couple of off-graph authors
        const auto ts = static_cast<std::int64_t>(rng.next_below(
            static_cast<std::uint64_t>(n_windows * kDay)));
        records.push_back(tweet("t" + std::to_string(i), "u" + std::to_string(author), ts));
    }
    return RandomInstance{Corpus::from_records(std::move(records), CorpusOptions{kDay, 0}),
                          FollowerGraph::from_edges(edges)};
}

} // namespace

TEST_CASE("two tweets in consecutive windows by linked authors form one cascade") {
    // y follows x
    const FollowerGraph g = FollowerGraph::from_edges({{"x", "y"}});
    const Corpus c = Corpus::from_records({tweet("A", "x", 10), tweet("B", "y", kDay + 10)},
                                          CorpusOptions{kDay, 0});
    const CascadeSet set = CascadeSet::detect(c, g);
    REQUIRE(set.size() == 1);
    CHECK(set.cascades()[0].n_sp == 2);
    CHECK(set.cascades()[0].seed_tweet == "A");
}

TEST_CASE("without the follower relation the same tweets stay singletons") {
    const FollowerGraph g = FollowerGraph::from_edges({{"y", "x"}}); // x follows y: wrong direction
    const Corpus c = Corpus::from_records({tweet("A", "x", 10), tweet("B", "y", kDay + 10)},
                                          CorpusOptions{kDay, 0});
    const CascadeSet set = CascadeSet::detect(c, g);
    CHECK(set.size() == 2);
}

TEST_CASE("six-tweet toy corpus: chain across three windows plus two unrelated tweets") {
    // chain a -> b -> c -> d (each follows the previous author)
    const FollowerGraph g = FollowerGraph::from_edges(
        {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"p", "q"}});
    const Corpus c = Corpus::from_records(
        {
            tweet("t1", "a", 100),
            tweet("t2", "b", 5000),        // same window, later timestamp
            tweet("t3", "c", kDay + 50),   // next window
            tweet("t4", "d", 2 * kDay + 50),
            tweet("t5", "z1", 300),        // off-graph author
            tweet("t6", "z2", 2 * kDay + 400),
        },
        CorpusOptions{kDay, 0});
    const CascadeSet set = CascadeSet::detect(c, g);
    const oracle::Partition expected = {{"t1", "t2", "t3", "t4"}, {"t5"}, {"t6"}};
    CHECK(partition_of(set, c) == expected);
    CHECK(partition_of(set, c) == oracle::brute_detect(c, g, true));
}

TEST_CASE("same-window links can be disabled") {
    const FollowerGraph g = FollowerGraph::from_edges({{"a", "b"}});
    const Corpus c = Corpus::from_records({tweet("t1", "a", 100), tweet("t2", "b", 200)},
                                          CorpusOptions{kDay, 0});
    CHECK(CascadeSet::detect(c, g, {true, true}).size() == 1);
    CHECK(CascadeSet::detect(c, g, {false, true}).size() == 2);
    CHECK(partition_of(CascadeSet::detect(c, g, {false, true}), c) ==
          oracle::brute_detect(c, g, false));
}

TEST_CASE("equal timestamps never link") {
    const FollowerGraph g = FollowerGraph::from_edges({{"a", "b"}});
    const Corpus c = Corpus::from_records({tweet("t1", "a", 100), tweet("t2", "b", 100)},
                                          CorpusOptions{kDay, 0});
    CHECK(CascadeSet::detect(c, g).size() == 2);
}

TEST_CASE("detection equals the brute-force oracle on random instances") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const bool same_window = trial % 2 == 0;
        RandomInstance inst = random_instance(rng, 8 + rng.next_below(10), 20 + rng.next_below(60),
                                              0.1 + 0.2 * rng.next_double(), 4);
        const CascadeSet set = CascadeSet::detect(inst.corpus, inst.graph, {same_window, true});
        REQUIRE(partition_of(set, inst.corpus) ==
                oracle::brute_detect(inst.corpus, inst.graph, same_window));
    }
}

TEST_CASE("cascades partition the corpus") {
    Rng rng(7);
    RandomInstance inst = random_instance(rng, 15, 120, 0.15, 5);
    const CascadeSet set = CascadeSet::detect(inst.corpus, inst.graph);
    std::size_t total = 0;
    for (const auto& cascade : set.cascades()) {
        total += cascade.tweet_indices.size();
        CHECK(cascade.n_sp >= 1);
        CHECK(cascade.n_sp <= cascade.n_tweets);
        // seed holds the minimal (timestamp, tweet_id)
        const auto& tweets = inst.corpus.tweets();
        const auto& seed = tweets[cascade.tweet_indices.front()];
        for (const auto idx : cascade.tweet_indices) {
            const auto& t = tweets[idx];
            CHECK((seed.timestamp < t.timestamp ||
                   (seed.timestamp == t.timestamp && seed.tweet_id <= t.tweet_id)));
        }
    }
    CHECK(total == inst.corpus.size());
}

TEST_CASE("detection is invariant under input order") {
    Rng rng(13);
    std::vector<TweetRecord> records;
    for (int i = 0; i < 40; ++i) {
        records.push_back(tweet("t" + std::to_string(i), "u" + std::to_string(i % 7),
                                static_cast<std::int64_t>(rng.next_below(3 * kDay))));
    }
    const FollowerGraph g = FollowerGraph::from_edges(
        {{"u0", "u1"}, {"u1", "u2"}, {"u2", "u3"}, {"u3", "u4"}, {"u4", "u5"}, {"u5", "u6"}});
    auto shuffled = records;
    rng.shuffle(shuffled);
    const Corpus c1 = Corpus::from_records(records, CorpusOptions{kDay, 0});
    const Corpus c2 = Corpus::from_records(shuffled, CorpusOptions{kDay, 0});
    CHECK(partition_of(CascadeSet::detect(c1, g), c1) ==
          partition_of(CascadeSet::detect(c2, g), c2));
}

TEST_CASE("adding follower edges never increases the cascade count") {
    Rng rng(19);
    RandomInstance inst = random_instance(rng, 12, 80, 0.08, 4);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::uint32_t v = 0; v < inst.graph.node_count(); ++v) {
        for (const auto u : inst.graph.followers(v))
            edges.emplace_back(inst.graph.user(v), inst.graph.user(u));
    }
    std::size_t prev = CascadeSet::detect(inst.corpus, inst.graph).size();
    for (int extra = 0; extra < 6; ++extra) {
        edges.emplace_back("u" + std::to_string(rng.next_below(12)),
                           "u" + std::to_string(rng.next_below(12)));
        if (edges.back().first == edges.back().second) {
            edges.pop_back();
            continue;
        }
        const FollowerGraph g = FollowerGraph::from_edges(edges);
        const std::size_t count = CascadeSet::detect(inst.corpus, g).size();
        CHECK(count <= prev);
        prev = count;
    }
}

TEST_CASE("with one giant window, detection matches the oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        RandomInstance inst = random_instance(rng, 10, 50, 0.2, 3);
        // rebuild with an effectively infinite window
        std::vector<TweetRecord> records(inst.corpus.tweets());
        const Corpus wide = Corpus::from_records(std::move(records),
                                                 CorpusOptions{std::int64_t{1} << 60, 0});
        CHECK(partition_of(CascadeSet::detect(wide, inst.graph), wide) ==
              oracle::brute_detect(wide, inst.graph, true));
    }
}

TEST_CASE("exposure: union of follower sets") {
    // followers(A) = {B, C}; followers(B) = {C, D}
    const FollowerGraph g =
        FollowerGraph::from_edges({{"A", "B"}, {"A", "C"}, {"B", "C"}, {"B", "D"}});
    CHECK(exposure({"A", "B"}, g) == 3);
    CHECK(exposure({"A", "B"}, g) == oracle::brute_exposure({"A", "B"}, g, true));
    // excluding spreaders removes B from the listener set
    CHECK(exposure({"A", "B"}, g, false) == 2);
}

TEST_CASE("exposure: spreader with no followers") {
    const FollowerGraph g = FollowerGraph::from_edges({{"A", "B"}});
    CHECK(exposure({"B"}, g) == 0);
    CHECK(exposure({"ghost"}, g) == 0); // off-graph spreader contributes nothing
}

TEST_CASE("exposure equals the brute oracle on random spreader sets") {
    Rng rng(37);
    RandomInstance inst = random_instance(rng, 50, 20, 0.06, 2);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::string> spreaders;
        for (int i = 0; i < 8; ++i) spreaders.push_back("u" + std::to_string(rng.next_below(50)));
        const bool include = trial % 2 == 0;
        CHECK(exposure(spreaders, inst.graph, include) ==
              oracle::brute_exposure(spreaders, inst.graph, include));
    }
}

TEST_CASE("exposure bounds: max k_out <= n_c <= sum k_out over spreaders") {
    Rng rng(41);
    RandomInstance inst = random_instance(rng, 40, 200, 0.08, 4);
    const CascadeSet set = CascadeSet::detect(inst.corpus, inst.graph);
    const auto& tweets = inst.corpus.tweets();
    for (const auto& cascade : set.cascades()) {
        std::set<std::string> spreaders;
        for (const auto idx : cascade.tweet_indices) spreaders.insert(tweets[idx].author_id);
        std::int64_t sum = 0, best = 0;
        for (const auto& s : spreaders) {
            if (const auto id = inst.graph.node_id(s)) {
                const auto k = static_cast<std::int64_t>(inst.graph.k_out(*id));
                sum += k;
                best = std::max(best, k);
            }
        }
        CHECK(cascade.n_c <= sum);
        CHECK(cascade.n_c >= best);
    }
}

TEST_CASE("seed_sentiment_group partitions cascades by seed emotion") {
    const FollowerGraph g = FollowerGraph::from_edges({{"a", "b"}});
    const Corpus c = Corpus::from_records(
        {tweet("s1", "q1", 10, 1), tweet("s2", "q2", 20, 0), tweet("s3", "q3", 30, 0)},
        CorpusOptions{kDay, 0});
    const CascadeSet set = CascadeSet::detect(c, g);
    const auto groups = seed_sentiment_group(set, c);
    CHECK(groups.at(1).size() == 1);
    CHECK(groups.at(0).size() == 2);
    CHECK(groups.at(-1).empty());
    CHECK(groups.at(1).size() + groups.at(0).size() + groups.at(-1).size() == set.size());
}

TEST_CASE("cascade ids follow seed order deterministically") {
    Rng rng(43);
    RandomInstance inst = random_instance(rng, 10, 60, 0.1, 4);
    const CascadeSet set = CascadeSet::detect(inst.corpus, inst.graph);
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set.cascades()[i].id == static_cast<std::int64_t>(i));
        if (i > 0) {
            const auto& prev_seed =
                inst.corpus.tweets()[set.cascades()[i - 1].tweet_indices.front()];
            const auto& seed = inst.corpus.tweets()[set.cascades()[i].tweet_indices.front()];
            CHECK((prev_seed.timestamp < seed.timestamp ||
                   (prev_seed.timestamp == seed.timestamp && prev_seed.tweet_id < seed.tweet_id)));
        }
    }
}
