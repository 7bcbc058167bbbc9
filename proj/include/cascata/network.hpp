#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cascata {

// Directed follower graph. A stored edge (v, u) means "u follows v":
// information flows v -> u. Consequently
//   k_out(v) = |followers(v)|   (audience of v),
//   k_in(u)  = |followees(u)|   (accounts u follows).
class FollowerGraph {
public:
    // Edge list: one "v<TAB>u" (whitespace-separated) pair per line, '#'
    // comments. Self-loops and duplicates are dropped and counted.
    static FollowerGraph load_file(const std::string& path);
    static FollowerGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges);

    std::size_t node_count() const { return users_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::int64_t dropped_self_loops() const { return dropped_self_loops_; }
    std::int64_t dropped_duplicates() const { return dropped_duplicates_; }
    std::int64_t skipped_lines() const { return skipped_lines_; }

    std::optional<std::uint32_t> node_id(std::string_view user) const;
    std::uint32_t node_id_checked(std::string_view user) const; // throws for unknown users
    const std::string& user(std::uint32_t id) const { return users_[id]; }

    std::span<const std::uint32_t> followers(std::uint32_t v) const; // out-edges of v
    std::span<const std::uint32_t> followees(std::uint32_t u) const; // in-edges of u

    std::size_t k_out(std::uint32_t v) const { return followers(v).size(); }
    std::size_t k_in(std::uint32_t u) const { return followees(u).size(); }

    // Fraction of directed edges whose reverse is also present.
    double reciprocity() const;

private:
    void build(std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);
    std::uint32_t intern(std::string_view user);

    std::vector<std::string> users_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::size_t edge_count_ = 0;
    // CSR in both directions
    std::vector<std::uint32_t> out_offsets_, out_targets_;
    std::vector<std::uint32_t> in_offsets_, in_targets_;
    std::int64_t dropped_self_loops_ = 0;
    std::int64_t dropped_duplicates_ = 0;
    std::int64_t skipped_lines_ = 0;
};

// Degree convention for the undirected projection used by the k-core
// decomposition. Total degree k = k_in + k_out counts a reciprocal pair
// twice; the classical shell definition is on the simple graph where it
// counts once. Both are available.
enum class DegreeMode {
    distinct_neighbors, // reciprocal pair contributes 1 per endpoint (default)
    in_plus_out,        // reciprocal pair contributes 2 per endpoint
};

struct CoreAssignment {
    std::vector<std::int32_t> core; // indexed by node id
    std::int32_t max_core = 0;

    std::int32_t get(std::uint32_t node) const { return core[node]; }
};

// Bucket-based shell decomposition over the undirected projection,
// O(V + E).
CoreAssignment k_core_decomposition(const FollowerGraph& g,
                                    DegreeMode mode = DegreeMode::distinct_neighbors);

} // namespace cascata
