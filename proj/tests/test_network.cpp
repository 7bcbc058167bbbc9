#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cascata/errors.hpp"
#include "cascata/network.hpp"
#include "cascata/rng.hpp"
#include "oracles.hpp"

using namespace cascata;

namespace {

FollowerGraph graph_of(std::initializer_list<std::pair<std::string, std::string>> edges) {
    return FollowerGraph::from_edges(std::vector<std::pair<std::string, std::string>>(edges));
}

FollowerGraph random_digraph(std::size_t n, double p, Rng& rng) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            if (u != v && rng.next_bernoulli(p)) {
                edges.emplace_back("n" + std::to_string(v), "n" + std::to_string(u));
            }
        }
    }
    if (edges.empty()) edges.emplace_back("n0", "n1");
    return FollowerGraph::from_edges(edges);
}

} // namespace

TEST_CASE("load_edges: reciprocal pair") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "cascata_edges_test.tsv";
    {
        std::ofstream out(path);
        out << "# comment\na\tb\nb\ta\na a\na\tb\nmalformed_line_with_one_field\n";
    }
    const FollowerGraph g = FollowerGraph::load_file(path.string());
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 2);
    CHECK(g.reciprocity() == doctest::Approx(1.0));
    CHECK(g.dropped_self_loops() == 1);   // "a a"
    CHECK(g.dropped_duplicates() == 1);   // second "a b"
    CHECK(g.skipped_lines() == 1);
    fs::remove(path);
}

TEST_CASE("degrees and neighbor queries follow the edge semantics") {
    // edge (v,u): u follows v
    const FollowerGraph g = graph_of({{"v", "u"}, {"v", "a"}, {"v", "b"}});
    const auto v = g.node_id_checked("v");
    const auto u = g.node_id_checked("u");
    CHECK(g.k_out(v) == 3);
    CHECK(g.k_in(v) == 0);
    CHECK(g.k_in(u) == 1);
    CHECK(g.k_out(u) == 0);
    std::vector<std::string> followers;
    for (const auto f : g.followers(v)) followers.push_back(g.user(f));
    std::sort(followers.begin(), followers.end());
    CHECK(followers == std::vector<std::string>{"a", "b", "u"});
    CHECK_THROWS_AS(g.node_id_checked("ghost"), Error);
}

TEST_CASE("degree sums equal the edge count") {
    Rng rng(5);
    const FollowerGraph g = random_digraph(60, 0.05, rng);
    std::size_t in_sum = 0, out_sum = 0;
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        in_sum += g.k_in(v);
        out_sum += g.k_out(v);
    }
    CHECK(in_sum == g.edge_count());
    CHECK(out_sum == g.edge_count());
}

TEST_CASE("k-core: two mutually linked nodes form one shell-1 core") {
    const FollowerGraph g = graph_of({{"a", "b"}, {"b", "a"}});
    const CoreAssignment cores = k_core_decomposition(g);
    CHECK(cores.get(g.node_id_checked("a")) == 1);
    CHECK(cores.get(g.node_id_checked("b")) == 1);
}

TEST_CASE("k-core: directed 3-cycle is an undirected triangle, all k_c = 2") {
    const FollowerGraph g = graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}});
    const CoreAssignment cores = k_core_decomposition(g);
    for (const char* name : {"a", "b", "c"}) {
        CHECK(cores.get(g.node_id_checked(name)) == 2);
    }
    const auto brute = oracle::brute_kcore(g, DegreeMode::distinct_neighbors);
    for (std::uint32_t v = 0; v < g.node_count(); ++v) CHECK(cores.get(v) == brute[v]);
}

TEST_CASE("k-core: star hub and leaves all land in shell 1") {
    const FollowerGraph g =
        graph_of({{"hub", "l1"}, {"hub", "l2"}, {"hub", "l3"}, {"hub", "l4"}, {"hub", "l5"}});
    const CoreAssignment cores = k_core_decomposition(g);
    for (const char* name : {"hub", "l1", "l2", "l3", "l4", "l5"}) {
        CHECK(cores.get(g.node_id_checked(name)) == 1);
    }
}

TEST_CASE("k-core equals the repeated-pruning oracle on random digraphs") {
    Rng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 30 + static_cast<std::size_t>(rng.next_below(120));
        const double p = 0.01 + 0.06 * rng.next_double();
        const FollowerGraph g = random_digraph(n, p, rng);
        for (const DegreeMode mode : {DegreeMode::distinct_neighbors, DegreeMode::in_plus_out}) {
            const CoreAssignment cores = k_core_decomposition(g, mode);
            const auto brute = oracle::brute_kcore(g, mode);
            for (std::uint32_t v = 0; v < g.node_count(); ++v) {
                REQUIRE(cores.get(v) == brute[v]);
            }
        }
    }
}

TEST_CASE("reciprocal pairs count once by default, twice in in_plus_out mode") {
    // a <-> b plus a -> c: distinct degree of a is 2, multi-edge degree 3
    const FollowerGraph g = graph_of({{"a", "b"}, {"b", "a"}, {"a", "c"}});
    const CoreAssignment distinct = k_core_decomposition(g, DegreeMode::distinct_neighbors);
    const CoreAssignment multi = k_core_decomposition(g, DegreeMode::in_plus_out);
    CHECK(distinct.get(g.node_id_checked("a")) == 1);
    CHECK(multi.get(g.node_id_checked("a")) == 2);
    CHECK(multi.get(g.node_id_checked("b")) == 2);
    CHECK(multi.get(g.node_id_checked("c")) == 1);
}

TEST_CASE("shell property: a shell-k node keeps >= k neighbors in the >= k union") {
    Rng rng(23);
    const FollowerGraph g = random_digraph(150, 0.03, rng);
    const CoreAssignment cores = k_core_decomposition(g);
    // undirected neighbor sets
    std::vector<std::set<std::uint32_t>> nbr(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        for (const auto u : g.followers(v)) {
            nbr[v].insert(u);
            nbr[u].insert(v);
        }
    }
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        const std::int32_t k = cores.get(v);
        int inside = 0;
        for (const auto u : nbr[v]) {
            if (cores.get(u) >= k) ++inside;
        }
        CHECK(inside >= k);
        CHECK(k <= static_cast<std::int32_t>(nbr[v].size()));
    }
}

TEST_CASE("decomposition is invariant under node relabeling") {
    Rng rng(29);
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < 200; ++i) {
        const auto a = rng.next_below(40);
        const auto b = rng.next_below(40);
        if (a != b) edges.emplace_back("u" + std::to_string(a), "u" + std::to_string(b));
    }
    const FollowerGraph g1 = FollowerGraph::from_edges(edges);
    // relabel u<i> -> w<99-i> and shuffle edge order
    std::vector<std::pair<std::string, std::string>> relabeled;
    for (const auto& [v, u] : edges) {
        const auto ren = [](const std::string& name) {
            return "w" + std::to_string(99 - std::stoi(name.substr(1)));
        };
        relabeled.emplace_back(ren(v), ren(u));
    }
    rng.shuffle(relabeled);
    const FollowerGraph g2 = FollowerGraph::from_edges(relabeled);
    const CoreAssignment c1 = k_core_decomposition(g1);
    const CoreAssignment c2 = k_core_decomposition(g2);
    for (std::uint32_t v = 0; v < g1.node_count(); ++v) {
        const std::string renamed = "w" + std::to_string(99 - std::stoi(g1.user(v).substr(1)));
        CHECK(c1.get(v) == c2.get(g2.node_id_checked(renamed)));
    }
}

TEST_CASE("empty graph is fatal") {
    CHECK_THROWS_AS(FollowerGraph::from_edges({}), Error);
}
