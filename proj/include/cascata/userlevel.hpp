#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "cascata/corpus.hpp"
#include "cascata/lexicon.hpp"
#include "cascata/network.hpp"
#include "cascata/stats.hpp"

namespace cascata {

struct UserFeatures {
    std::string user;
    std::int64_t n = 0;      // tweets by this user in the corpus
    std::int32_t k_c = 0;    // coreness (0 when absent from the graph)
    std::int64_t k_in = 0;   // followees
    std::int64_t k_out = 0;  // followers
    double pos = 0, neg = 0, neu = 0; // tweet ratios, 0 when n = 0
    double soc = 0, cog = 0;          // term ratios
};

// One row per user appearing in the corpus or the graph, sorted by user id.
class FeatureTable {
public:
    static FeatureTable build(const Corpus& corpus, const FollowerGraph& graph,
                              const CoreAssignment& cores, RatioMode mode = RatioMode::pooled);

    const std::vector<UserFeatures>& rows() const { return rows_; }
    const UserFeatures* find(const std::string& user) const;

    void write_tsv(std::ostream& out) const;
    void write_tsv_file(const std::string& path) const;

private:
    std::vector<UserFeatures> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

// The engagement/integration pair of regressions over z-scored features,
// users with n >= 1 only:
//   first:  n(u)  ~ k_c + k_in + k_out + pos + neg + soc + cog
//   second: k_c(u) ~ n + k_in + k_out + pos + neg + soc + cog
struct EngagementRegressions {
    stats::RegressionResult activity;    // response n(u)
    stats::RegressionResult integration; // response k_c(u)
    std::int64_t n_users = 0;
};

EngagementRegressions engagement_regressions(const FeatureTable& features,
                                             std::int64_t min_users = 50);

void write_regressions_json(const EngagementRegressions& r, std::ostream& out);

enum class FolloweeWeight {
    per_user,  // plain mean over followees (default)
    per_tweet, // followees weighted by their tweet count
};

struct NeighborhoodResult {
    std::string metric;
    double r = 0;
    stats::NullSummary null;
    std::int64_t n_eligible = 0;
};

// Pearson correlation between a user's metric and the mean metric of the
// accounts it follows, with a shuffle null on the fixed topology. Eligible
// users have n >= 1 and at least one followee with n >= 1; followees with
// n = 0 are excluded from the mean rather than imputed.
// metric is one of pos | neg | neu | soc | cog.
NeighborhoodResult neighborhood_correlation(const FeatureTable& features,
                                            const FollowerGraph& graph,
                                            const std::string& metric,
                                            FolloweeWeight weight = FolloweeWeight::per_user,
                                            std::int64_t n_shuffles = 1000, std::uint64_t seed = 0);

} // namespace cascata
