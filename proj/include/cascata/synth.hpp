#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cascata/corpus.hpp"
#include "cascata/network.hpp"
#include "cascata/rng.hpp"

namespace cascata::synth {

enum class EdgeModel { uniform, powerlaw_out };

// Configuration for the synthetic graph + corpus generators. Every output
// is a deterministic pure function of (config, seed).
struct SynthConfig {
    std::int64_t n_users = 100;
    EdgeModel edge_model = EdgeModel::uniform;
    double edge_prob = 0.05;   // uniform model: per ordered pair
    double gamma = 2.5;        // powerlaw_out model: out-degree exponent
    double reciprocity = 0.5;  // target fraction of reciprocated edges
    double tweet_rate = 0.1;   // seed-tweet probability per user per window
    std::int64_t max_seeds = -1; // cap on total seed tweets, -1 = unlimited
    double p_pos = 0.25, p_neu = 0.5, p_neg = 0.25;
    double reply_prob = 0.3;   // follower replies in the next window
    double soc_rate = 0.1, cog_rate = 0.1; // per-token injection rates
    std::int64_t n_windows = 8;
    std::int64_t window_width = 86400;
    bool same_window = true;   // mirror of the detector's same-window flag
    std::uint64_t seed = 0;

    void validate() const;
};

FollowerGraph gen_graph(const SynthConfig& cfg);

// Annotated corpus plus the generator's ground-truth cascade partition.
// Seed tweets spawn per rate; followers reply in the next window. Tweets
// whose placement would create a propagation link into a different cascade
// are skipped, so the ground truth is exactly the partition the detector
// recovers under matching window semantics. Window k covers timestamps
// [k*w, (k+1)*w); analysis of generated corpora should anchor the origin
// at 0.
struct SynthCorpus {
    Corpus corpus;
    std::vector<std::pair<std::string, std::int64_t>> truth; // tweet_id -> cascade id
};

SynthCorpus gen_corpus(const SynthConfig& cfg, const FollowerGraph& graph);

void write_truth_tsv(const SynthCorpus& sc, const std::string& path);
void write_edges_tsv(const FollowerGraph& graph, const std::string& path);

// Inverse-transform sampler on the zeta-normalized mass p(x) ~ x^-alpha,
// x >= x_min. Zeta partial sums are truncated at relative tolerance 1e-10.
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, std::int64_t x_min);
    std::int64_t draw(Rng& rng) const;

private:
    double alpha_;
    std::int64_t x_min_;
    double z_;                       // zeta(alpha, x_min)
    std::vector<double> tail_;       // tail_[i] = P(X >= x_min + i)
};

// n draws as doubles, ready for the fitting routines.
std::vector<double> sample_discrete_power_law(double alpha, std::int64_t x_min, std::int64_t n,
                                              std::uint64_t seed);

} // namespace cascata::synth
