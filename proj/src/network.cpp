#include "cascata/network.hpp"

#include <algorithm>
#include <fstream>

#include "cascata/errors.hpp"

namespace cascata {

namespace {

// whitespace-separated pair; tabs and spaces both accepted
bool split_edge_line(std::string_view line, std::string_view& a, std::string_view& b) {
    std::size_t i = 0;
    const std::size_t n = line.size();
    auto skip_ws = [&] { while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i; };
    skip_ws();
    const std::size_t a0 = i;
    while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
    if (i == a0) return false;
    a = line.substr(a0, i - a0);
    skip_ws();
    const std::size_t b0 = i;
    while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
    if (i == b0) return false;
    b = line.substr(b0, i - b0);
    skip_ws();
    return i == n;
}

} // namespace

std::uint32_t FollowerGraph::intern(std::string_view user) {
    const auto it = ids_.find(std::string(user));
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(users_.size());
    users_.emplace_back(user);
    ids_.emplace(users_.back(), id);
    return id;
}

FollowerGraph FollowerGraph::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open edge list: " + path);
    FollowerGraph g;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string_view v, u;
        if (!split_edge_line(line, v, u)) {
            ++g.skipped_lines_;
            continue;
        }
        if (v == u) {
            ++g.dropped_self_loops_;
            continue;
        }
        edges.emplace_back(g.intern(v), g.intern(u));
    }
    g.build(std::move(edges));
    return g;
}

FollowerGraph FollowerGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& input) {
    FollowerGraph g;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(input.size());
    for (const auto& [v, u] : input) {
        if (v.empty() || u.empty()) {
            ++g.skipped_lines_;
            continue;
        }
        if (v == u) {
            ++g.dropped_self_loops_;
            continue;
        }
        edges.emplace_back(g.intern(v), g.intern(u));
    }
    g.build(std::move(edges));
    return g;
}

void FollowerGraph::build(std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    if (users_.empty()) throw_empty("empty follower graph");
    std::sort(edges.begin(), edges.end());
    const auto last = std::unique(edges.begin(), edges.end());
    dropped_duplicates_ += static_cast<std::int64_t>(edges.end() - last);
    edges.erase(last, edges.end());
    if (edges.empty()) throw_empty("follower graph has no edges");
    edge_count_ = edges.size();

    const std::size_t n = users_.size();
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& [v, u] : edges) {
        ++out_offsets_[v + 1];
        ++in_offsets_[u + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_targets_.resize(edges.size());
    in_targets_.resize(edges.size());
    std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const auto& [v, u] : edges) {
        out_targets_[out_pos[v]++] = u;
        in_targets_[in_pos[u]++] = v;
    }
    // edges were sorted, so follower lists are sorted; sort followee lists too
    for (std::size_t u = 0; u < n; ++u) {
        std::sort(in_targets_.begin() + in_offsets_[u], in_targets_.begin() + in_offsets_[u + 1]);
    }
}

std::optional<std::uint32_t> FollowerGraph::node_id(std::string_view user) const {
    const auto it = ids_.find(std::string(user));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t FollowerGraph::node_id_checked(std::string_view user) const {
    const auto id = node_id(user);
    if (!id) throw_invalid("unknown user '" + std::string(user) + "'");
    return *id;
}

std::span<const std::uint32_t> FollowerGraph::followers(std::uint32_t v) const {
    return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const std::uint32_t> FollowerGraph::followees(std::uint32_t u) const {
    return {in_targets_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

double FollowerGraph::reciprocity() const {
    std::size_t mutual = 0;
    for (std::uint32_t v = 0; v < users_.size(); ++v) {
        const auto fw = followers(v);
        for (const auto u : fw) {
            const auto back = followers(u); // sorted
            if (std::binary_search(back.begin(), back.end(), v)) ++mutual;
        }
    }
    return edge_count_ == 0 ? 0.0 : static_cast<double>(mutual) / static_cast<double>(edge_count_);
}

CoreAssignment k_core_decomposition(const FollowerGraph& g, DegreeMode mode) {
    const std::size_t n = g.node_count();
    CoreAssignment result;
    result.core.assign(n, 0);
    if (n == 0) return result;

    // Undirected projection as neighbor pairs with multiplicity 1 or 2.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(g.edge_count());
    for (std::uint32_t v = 0; v < n; ++v) {
        for (const auto u : g.followers(v)) {
            pairs.emplace_back(std::min(v, u), std::max(v, u));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::uint32_t> nbr_offsets(n + 1, 0);
    std::vector<std::uint32_t> nbr;
    std::vector<std::uint8_t> mult;
    {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> uniq;
        std::vector<std::uint8_t> uniq_mult;
        uniq.reserve(pairs.size());
        for (std::size_t i = 0; i < pairs.size();) {
            std::size_t j = i;
            while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
            uniq.push_back(pairs[i]);
            uniq_mult.push_back(mode == DegreeMode::in_plus_out && j - i == 2 ? 2 : 1);
            i = j;
        }
        for (const auto& [a, b] : uniq) {
            ++nbr_offsets[a + 1];
            ++nbr_offsets[b + 1];
        }
        for (std::size_t i = 0; i < n; ++i) nbr_offsets[i + 1] += nbr_offsets[i];
        nbr.resize(2 * uniq.size());
        mult.resize(2 * uniq.size());
        std::vector<std::uint32_t> pos(nbr_offsets.begin(), nbr_offsets.end() - 1);
        for (std::size_t k = 0; k < uniq.size(); ++k) {
            const auto [a, b] = uniq[k];
            nbr[pos[a]] = b;
            mult[pos[a]++] = uniq_mult[k];
            nbr[pos[b]] = a;
            mult[pos[b]++] = uniq_mult[k];
        }
    }

    std::vector<std::uint32_t> degree(n, 0);
    std::uint32_t max_degree = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t d = 0;
        for (std::uint32_t k = nbr_offsets[v]; k < nbr_offsets[v + 1]; ++k) d += mult[k];
        degree[v] = d;
        max_degree = std::max(max_degree, d);
    }

    // Batagelj-Zaversnik bucket ordering. vert holds nodes sorted by current
    // degree, pos the inverse permutation, bin the first index per degree.
    std::vector<std::uint32_t> bin(max_degree + 2, 0);
    for (std::uint32_t v = 0; v < n; ++v) ++bin[degree[v] + 1];
    for (std::uint32_t d = 0; d <= max_degree; ++d) bin[d + 1] += bin[d];
    std::vector<std::uint32_t> vert(n), pos(n);
    {
        std::vector<std::uint32_t> fill(bin.begin(), bin.end() - 1);
        for (std::uint32_t v = 0; v < n; ++v) {
            pos[v] = fill[degree[v]];
            vert[pos[v]] = v;
            ++fill[degree[v]];
        }
    }

    auto decrement = [&](std::uint32_t u) {
        // move u one bucket to the left
        const std::uint32_t du = degree[u];
        const std::uint32_t pu = pos[u];
        const std::uint32_t pw = bin[du];
        const std::uint32_t w = vert[pw];
        if (u != w) {
            std::swap(vert[pu], vert[pw]);
            pos[u] = pw;
            pos[w] = pu;
        }
        ++bin[du];
        --degree[u];
    };

    result.max_core = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = vert[i];
        result.core[v] = static_cast<std::int32_t>(degree[v]);
        result.max_core = std::max(result.max_core, result.core[v]);
        for (std::uint32_t k = nbr_offsets[v]; k < nbr_offsets[v + 1]; ++k) {
            const std::uint32_t u = nbr[k];
            for (std::uint8_t m = 0; m < mult[k]; ++m) {
                if (degree[u] > degree[v]) decrement(u);
            }
        }
    }
    return result;
}

} // namespace cascata
