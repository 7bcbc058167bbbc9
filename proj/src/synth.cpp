#include "cascata/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"
#include "cascata/stats.hpp"

namespace cascata::synth {

namespace {

std::string padded_id(char prefix, std::int64_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*lld", prefix, width > 19 ? 19 : width,
                  static_cast<long long>(value));
    return buf;
}

int digits_for(std::int64_t n) {
    int digits = 1;
    while (n >= 10) {
        n /= 10;
        ++digits;
    }
    return digits;
}

} // namespace

void SynthConfig::validate() const {
    if (n_users < 2) throw_invalid("synth: n_users must be >= 2");
    if (edge_prob < 0 || edge_prob > 1) throw_invalid("synth: edge_prob must be in [0,1]");
    if (gamma <= 1) throw_invalid("synth: gamma must be > 1");
    if (reciprocity < 0 || reciprocity > 1) throw_invalid("synth: reciprocity must be in [0,1]");
    if (tweet_rate < 0 || tweet_rate > 1) throw_invalid("synth: tweet_rate must be in [0,1]");
    if (reply_prob < 0 || reply_prob > 1) throw_invalid("synth: reply_prob must be in [0,1]");
    if (soc_rate < 0 || soc_rate > 1 || cog_rate < 0 || cog_rate > 1)
        throw_invalid("synth: injection rates must be in [0,1]");
    if (p_pos < 0 || p_neu < 0 || p_neg < 0 || std::fabs(p_pos + p_neu + p_neg - 1.0) > 1e-9)
        throw_invalid("synth: emotion probabilities must be non-negative and sum to 1");
    if (n_windows < 1) throw_invalid("synth: n_windows must be >= 1");
    if (window_width < 1) throw_invalid("synth: window_width must be >= 1");
}

FollowerGraph gen_graph(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::int64_t n = cfg.n_users;
    const int width = digits_for(n - 1);
    auto user = [&](std::int64_t i) { return padded_id('u', i, width); };

    std::vector<std::pair<std::string, std::string>> edges; // (v, u): u follows v
    auto add_edge = [&](std::int64_t v, std::int64_t u) { edges.emplace_back(user(v), user(u)); };

    if (cfg.edge_model == EdgeModel::uniform) {
        // Per unordered dyad: mutual with probability rho*p, single (random
        // direction) with 2p(1-rho), none otherwise. Expected directed edge
        // count matches iid edges of probability p; reciprocity matches rho.
        const double p_mutual = cfg.reciprocity * cfg.edge_prob;
        const double p_single = 2.0 * cfg.edge_prob * (1.0 - cfg.reciprocity);
        if (p_mutual + p_single > 1.0 + 1e-12)
            throw_invalid("synth: infeasible edge_prob/reciprocity combination "
                          "(requires edge_prob * (2 - reciprocity) <= 1)");
        const std::int64_t dyads = n * (n - 1) / 2;
        const auto n_mutual = static_cast<std::int64_t>(std::llround(p_mutual * static_cast<double>(dyads)));
        const auto n_single = static_cast<std::int64_t>(std::llround(p_single * static_cast<double>(dyads)));
        const std::int64_t n_pick = n_mutual + n_single;
        if (n_pick > dyads) throw_invalid("synth: infeasible edge counts after rounding");

        auto emit = [&](std::int64_t i, std::int64_t j, std::int64_t pick_rank) {
            if (pick_rank < n_mutual) {
                add_edge(i, j);
                add_edge(j, i);
            } else {
                if (rng.next_bernoulli(0.5)) add_edge(i, j);
                else add_edge(j, i);
            }
        };

        if (n_pick * 2 < dyads) {
            // sparse: rejection-sample distinct dyads
            std::unordered_set<std::int64_t> taken;
            taken.reserve(static_cast<std::size_t>(n_pick) * 2);
            for (std::int64_t pick = 0; pick < n_pick;) {
                std::int64_t i = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(n)));
                std::int64_t j = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
                if (j >= i) ++j;
                if (i > j) std::swap(i, j);
                const std::int64_t key = i * n + j;
                if (!taken.insert(key).second) continue;
                emit(i, j, pick);
                ++pick;
            }
        } else {
            // dense: enumerate and shuffle
            if (dyads > (1ll << 24))
                throw_invalid("synth: dense uniform graphs limited to ~16M dyads");
            std::vector<std::int64_t> all;
            all.reserve(static_cast<std::size_t>(dyads));
            for (std::int64_t i = 0; i < n; ++i) {
                for (std::int64_t j = i + 1; j < n; ++j) all.push_back(i * n + j);
            }
            rng.shuffle(all);
            for (std::int64_t pick = 0; pick < n_pick; ++pick) {
                const std::int64_t key = all[static_cast<std::size_t>(pick)];
                emit(key / n, key % n, pick);
            }
        }
    } else {
        // out-degree power law, then reciprocate each base edge with
        // q = rho / (2 - rho) so the expected edge reciprocity is rho
        PowerLawSampler sampler(cfg.gamma, 1);
        const double q = cfg.reciprocity / (2.0 - cfg.reciprocity);
        std::unordered_set<std::int64_t> present;
        std::vector<std::pair<std::int64_t, std::int64_t>> base;
        for (std::int64_t v = 0; v < n; ++v) {
            const std::int64_t degree = std::min<std::int64_t>(sampler.draw(rng), n - 1);
            std::unordered_set<std::int64_t> picked;
            for (std::int64_t d = 0; d < degree; ++d) {
                for (;;) {
                    std::int64_t u = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
                    if (u >= v) ++u;
                    if (!picked.insert(u).second) continue;
                    if (present.insert(v * n + u).second) {
                        base.emplace_back(v, u);
                        add_edge(v, u);
                    }
                    break;
                }
            }
        }
        for (const auto& [v, u] : base) {
            if (rng.next_bernoulli(q) && present.insert(u * n + v).second) add_edge(u, v);
        }
    }

    if (edges.empty()) throw_invalid("synth: configuration generated no edges");
    return FollowerGraph::from_edges(edges);
}

namespace {

struct PendingTweet {
    std::int64_t author;
    std::int64_t cascade;
};

} // namespace

SynthCorpus gen_corpus(const SynthConfig& cfg, const FollowerGraph& graph) {
    cfg.validate();
    Rng rng(cfg.seed + 0x5EEDC0DEULL);
    const std::int64_t n = cfg.n_users;
    const int uwidth = digits_for(n - 1);

    // author/window occupancy for the collision rule: (author, window) ->
    // cascade posted there, or -2 for "multiple cascades" (cannot happen by
    // construction but kept defensive-free: one slot per author+window pair
    // storing the single cascade id; an author posts for one cascade per
    // window only)
    std::unordered_map<std::int64_t, std::int64_t> posted; // author * W + window -> cascade

    auto posted_cascade = [&](std::int64_t author, std::int64_t window) -> std::int64_t {
        if (window < 0) return -1;
        const auto it = posted.find(author * (cfg.n_windows + 1) + window);
        return it == posted.end() ? -1 : it->second;
    };

    // A tweet by `author` in `window` for `cascade` must not create a
    // propagation link into another cascade, in either direction.
    auto collides = [&](std::int64_t author, std::int64_t window, std::int64_t cascade) {
        const auto id = graph.node_id(padded_id('u', author, uwidth));
        if (!id) return false;
        for (const auto fe : graph.followees(*id)) {
            std::int64_t fauthor = std::stoll(graph.user(fe).substr(1));
            const std::int64_t prev = posted_cascade(fauthor, window - 1);
            if (prev >= 0 && prev != cascade) return true;
            if (cfg.same_window) {
                const std::int64_t same = posted_cascade(fauthor, window);
                if (same >= 0 && same != cascade) return true;
            }
        }
        if (cfg.same_window) {
            for (const auto fo : graph.followers(*id)) {
                std::int64_t fauthor = std::stoll(graph.user(fo).substr(1));
                const std::int64_t same = posted_cascade(fauthor, window);
                if (same >= 0 && same != cascade) return true;
            }
        }
        return false;
    };

    std::vector<TweetRecord> records;
    std::vector<std::pair<std::string, std::int64_t>> truth;
    std::int64_t next_cascade = 0;
    std::int64_t next_tweet = 0;
    std::int64_t seeds_left = cfg.max_seeds < 0 ? std::numeric_limits<std::int64_t>::max()
                                                : cfg.max_seeds;

    auto place = [&](std::int64_t author, std::int64_t window, std::int64_t cascade) {
        TweetRecord t;
        t.author_id = padded_id('u', author, uwidth);
        t.timestamp = window * cfg.window_width +
                      static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(cfg.window_width)));
        Annotation a;
        const double u = rng.next_double();
        a.e = u < cfg.p_pos ? 1 : (u < cfg.p_pos + cfg.p_neu ? 0 : -1);
        a.w = 5 + static_cast<std::int32_t>(rng.next_below(16));
        for (std::int32_t k = 0; k < a.w; ++k) {
            if (rng.next_bernoulli(cfg.soc_rate)) ++a.soc;
            if (rng.next_bernoulli(cfg.cog_rate)) ++a.cog;
        }
        t.annotation = a;
        records.push_back(std::move(t));
        posted[author * (cfg.n_windows + 1) + window] = cascade;
        return static_cast<std::int64_t>(records.size() - 1);
    };

    std::vector<std::vector<std::int64_t>> window_tweets(static_cast<std::size_t>(cfg.n_windows));
    std::vector<PendingTweet> meta;

    for (std::int64_t w = 0; w < cfg.n_windows; ++w) {
        // replies to the previous window's tweets, in creation order
        if (w > 0) {
            for (const auto parent_idx : window_tweets[static_cast<std::size_t>(w - 1)]) {
                const PendingTweet parent = meta[static_cast<std::size_t>(parent_idx)];
                const auto pid = graph.node_id(padded_id('u', parent.author, uwidth));
                if (!pid) continue;
                for (const auto follower : graph.followers(*pid)) {
                    if (!rng.next_bernoulli(cfg.reply_prob)) continue;
                    const std::int64_t author = std::stoll(graph.user(follower).substr(1));
                    const std::int64_t already = posted_cascade(author, w);
                    if (already >= 0 && already != parent.cascade) continue;
                    if (already < 0 && collides(author, w, parent.cascade)) continue;
                    const std::int64_t rec = place(author, w, parent.cascade);
                    window_tweets[static_cast<std::size_t>(w)].push_back(rec);
                    meta.push_back({author, parent.cascade});
                }
            }
        }
        // fresh seeds
        for (std::int64_t author = 0; author < n && seeds_left > 0; ++author) {
            if (!rng.next_bernoulli(cfg.tweet_rate)) continue;
            if (posted_cascade(author, w) >= 0) continue;
            if (collides(author, w, next_cascade)) continue;
            const std::int64_t rec = place(author, w, next_cascade);
            window_tweets[static_cast<std::size_t>(w)].push_back(rec);
            meta.push_back({author, next_cascade});
            ++next_cascade;
            --seeds_left;
        }
    }

    if (records.empty()) throw_empty("synth: configuration generated no tweets");

    // assign tweet ids in record order, then attach the truth labels
    const int twidth = digits_for(static_cast<std::int64_t>(records.size()) - 1);
    truth.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].tweet_id = padded_id('t', static_cast<std::int64_t>(next_tweet++), twidth);
        truth.emplace_back(records[i].tweet_id, meta[i].cascade);
    }

    SynthCorpus out{Corpus::from_records(std::move(records),
                                         CorpusOptions{cfg.window_width, 0}),
                    std::move(truth)};
    std::sort(out.truth.begin(), out.truth.end());
    return out;
}

void write_truth_tsv(const SynthCorpus& sc, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "tweet_id\ttrue_cascade_id\n";
    for (const auto& [tweet_id, cascade] : sc.truth) {
        out << tweet_id << '\t' << cascade << "\n";
    }
}

void write_edges_tsv(const FollowerGraph& graph, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "# v\tu  (u follows v)\n";
    for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
        for (const auto u : graph.followers(v)) {
            out << graph.user(v) << '\t' << graph.user(u) << "\n";
        }
    }
}

// ----------------------------------------------------------------------------
// discrete power-law sampler

PowerLawSampler::PowerLawSampler(double alpha, std::int64_t x_min) : alpha_(alpha), x_min_(x_min) {
    if (!(alpha > 1.0)) throw_invalid("power-law sampler requires alpha > 1");
    if (x_min < 1) throw_invalid("power-law sampler requires x_min >= 1");
    z_ = stats::hurwitz_zeta(alpha, static_cast<double>(x_min));
    // CCDF table covering all but ~1e-7 of the mass, capped in size; draws
    // beyond the table fall back to a zeta bisection
    constexpr std::size_t kMaxTable = 1 << 20;
    tail_.reserve(1024);
    tail_.push_back(1.0);
    double remaining = 1.0;
    std::int64_t x = x_min;
    while (remaining > 1e-7 && tail_.size() < kMaxTable) {
        remaining -= std::pow(static_cast<double>(x), -alpha) / z_;
        if (remaining < 0) remaining = 0;
        tail_.push_back(remaining);
        ++x;
    }
}

std::int64_t PowerLawSampler::draw(Rng& rng) const {
    const double t = 1.0 - rng.next_double(); // in (0, 1]
    // find the largest offset i with tail_[i] > t  =>  X = x_min + i
    if (t >= tail_.back()) {
        const auto it = std::upper_bound(tail_.begin(), tail_.end(), t, std::greater<double>());
        const auto i = static_cast<std::int64_t>(it - tail_.begin()) - 1;
        return x_min_ + std::max<std::int64_t>(i, 0);
    }
    // rare deep-tail draw: bisection on P(X >= x) = zeta(alpha, x) / z
    auto tail_mass = [&](std::int64_t x) {
        return stats::hurwitz_zeta(alpha_, static_cast<double>(x)) / z_;
    };
    std::int64_t lo = x_min_ + static_cast<std::int64_t>(tail_.size()) - 1; // mass(lo) > t
    std::int64_t hi = lo * 2;
    while (tail_mass(hi) > t) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (tail_mass(mid) > t) lo = mid;
        else hi = mid;
    }
    return lo;
}

std::vector<double> sample_discrete_power_law(double alpha, std::int64_t x_min, std::int64_t n,
                                              std::uint64_t seed) {
    if (n < 1) throw_invalid("sample_discrete_power_law: n must be >= 1");
    PowerLawSampler sampler(alpha, x_min);
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        out.push_back(static_cast<double>(sampler.draw(rng)));
    }
    return out;
}

} // namespace cascata::synth
