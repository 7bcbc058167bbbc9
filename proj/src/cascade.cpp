#include "cascata/cascade.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"

namespace cascata {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

// Tweets of one author inside one window, in corpus order (= (ts, id)
// order). collapsed marks how many leading members have already been
// united with each other through some consumer.
struct AuthorWindowGroup {
    std::int64_t window = 0;
    std::vector<std::uint32_t> tweets;
    std::size_t collapsed = 0;
};

} // namespace

CascadeSet CascadeSet::detect(const Corpus& corpus, const FollowerGraph& graph,
                              const DetectOptions& options) {
    const auto& tweets = corpus.tweets();
    const std::size_t n = tweets.size();

    // author -> graph node (authors absent from the graph stay isolated)
    std::vector<std::int64_t> author_node(n, -1);
    std::vector<std::int64_t> window_of(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (const auto id = graph.node_id(tweets[i].author_id)) author_node[i] = *id;
        window_of[i] = corpus.window_index(tweets[i].timestamp);
    }

    // per graph-node posting history, grouped by window (windows ascend
    // because the corpus is time-sorted)
    std::unordered_map<std::uint32_t, std::vector<AuthorWindowGroup>> history;
    UnionFind uf(n);

    auto collapse_prefix = [&](AuthorWindowGroup& group, std::size_t upto) {
        // members [0, collapsed) are already one component; extend the chain
        std::size_t k = group.collapsed == 0 ? 0 : group.collapsed - 1;
        for (; k + 1 < upto && k + 1 < group.tweets.size(); ++k) {
            uf.unite(group.tweets[k], group.tweets[k + 1]);
        }
        if (upto > group.collapsed) group.collapsed = upto;
    };

    auto link_full_group = [&](AuthorWindowGroup& group, std::uint32_t consumer) {
        collapse_prefix(group, group.tweets.size());
        uf.unite(consumer, group.tweets.front());
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (author_node[i] < 0) continue;
        const auto node = static_cast<std::uint32_t>(author_node[i]);
        const std::int64_t w = window_of[i];
        for (const auto followee : graph.followees(node)) {
            const auto it = history.find(followee);
            if (it == history.end()) continue;
            auto& groups = it->second;
            // only the last two windows can hold parents; scan from the back
            for (std::size_t gi = groups.size(); gi-- > 0;) {
                AuthorWindowGroup& group = groups[gi];
                if (group.window < w - 1) break;
                if (group.window == w - 1) {
                    // previous window: every tweet there is strictly earlier
                    link_full_group(group, static_cast<std::uint32_t>(i));
                } else if (group.window == w && options.same_window) {
                    // same window: parents need a strictly smaller timestamp
                    // (ties never link); group order makes them a prefix
                    const std::int64_t my_ts = tweets[i].timestamp;
                    std::size_t prefix = group.tweets.size();
                    while (prefix > 0 && tweets[group.tweets[prefix - 1]].timestamp >= my_ts)
                        --prefix;
                    if (prefix > 0) {
                        collapse_prefix(group, prefix);
                        uf.unite(static_cast<std::uint32_t>(i), group.tweets.front());
                    }
                }
            }
        }
        auto& groups = history[node];
        if (groups.empty() || groups.back().window != w) {
            groups.push_back(AuthorWindowGroup{w, {}, 0});
        }
        groups.back().tweets.push_back(static_cast<std::uint32_t>(i));
    }

    // components -> cascades, tweets kept in corpus (time) order
    std::unordered_map<std::uint32_t, std::size_t> root_to_cascade;
    CascadeSet set;
    set.corpus_size_ = n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t root = uf.find(static_cast<std::uint32_t>(i));
        auto [it, inserted] = root_to_cascade.emplace(root, set.cascades_.size());
        if (inserted) set.cascades_.emplace_back();
        set.cascades_[it->second].tweet_indices.push_back(static_cast<std::uint32_t>(i));
    }

    for (auto& cascade : set.cascades_) {
        const auto& seed = tweets[cascade.tweet_indices.front()];
        cascade.seed_tweet = seed.tweet_id;
        cascade.n_tweets = static_cast<std::int64_t>(cascade.tweet_indices.size());
        std::vector<std::string> spreaders;
        spreaders.reserve(cascade.tweet_indices.size());
        for (const auto idx : cascade.tweet_indices) spreaders.push_back(tweets[idx].author_id);
        std::sort(spreaders.begin(), spreaders.end());
        spreaders.erase(std::unique(spreaders.begin(), spreaders.end()), spreaders.end());
        cascade.n_sp = static_cast<std::int64_t>(spreaders.size());
        cascade.n_c = exposure(spreaders, graph, options.include_spreaders);
    }

    // deterministic order: by seed (timestamp, tweet_id); cascades_ already
    // follow first-tweet corpus order, which is exactly that
    for (std::size_t c = 0; c < set.cascades_.size(); ++c) {
        set.cascades_[c].id = static_cast<std::int64_t>(c);
    }
    return set;
}

std::int64_t exposure(const std::vector<std::string>& spreaders, const FollowerGraph& graph,
                      bool include_spreaders) {
    std::vector<std::uint32_t> nodes;
    nodes.reserve(spreaders.size());
    for (const auto& s : spreaders) {
        if (const auto id = graph.node_id(s)) nodes.push_back(*id);
    }
    std::unordered_set<std::uint32_t> listeners;
    for (const auto v : nodes) {
        for (const auto u : graph.followers(v)) listeners.insert(u);
    }
    if (!include_spreaders) {
        for (const auto v : nodes) listeners.erase(v);
    }
    return static_cast<std::int64_t>(listeners.size());
}

std::map<int, std::vector<std::size_t>> seed_sentiment_group(const CascadeSet& set,
                                                             const Corpus& corpus) {
    std::map<int, std::vector<std::size_t>> groups;
    groups[-1];
    groups[0];
    groups[1];
    const auto& tweets = corpus.tweets();
    for (std::size_t c = 0; c < set.cascades().size(); ++c) {
        const auto seed_idx = set.cascades()[c].tweet_indices.front();
        const auto& annotation = tweets[seed_idx].annotation;
        if (!annotation) throw_invalid("seed tweet '" + tweets[seed_idx].tweet_id + "' not annotated");
        groups[annotation->e].push_back(c);
    }
    return groups;
}

void CascadeSet::write_report(std::ostream& out) const {
    out << "cascade_id\tseed_tweet\tn_tweets\tn_sp\tn_c";
    if (classified_) out << "\tr_p\tr_u\tr_n\tsoc_ratio\tcog_ratio\tsentiment\tsocial\tcognitive";
    out << "\n";
    for (const auto& cascade : cascades_) {
        out << cascade.id << '\t' << cascade.seed_tweet << '\t' << cascade.n_tweets << '\t'
            << cascade.n_sp << '\t' << cascade.n_c;
        if (classified_) {
            const auto& r = *cascade.ratios;
            out << '\t' << format_double(r.r_p) << '\t' << format_double(r.r_u) << '\t'
                << format_double(r.r_n) << '\t' << format_double(r.soc_ratio) << '\t'
                << format_double(r.cog_ratio) << '\t' << to_string(*cascade.sentiment) << '\t'
                << (cascade.content->social_high ? "high" : "low") << '\t'
                << (cascade.content->cognitive_high ? "high" : "low");
        }
        out << "\n";
    }
}

void CascadeSet::write_report_file(const std::string& path) const {
    std::ofstream out = open_output(path);
    write_report(out);
}

std::vector<double> CascadeSet::values(const std::string& column, const std::string& group) const {
    std::vector<double> out;
    out.reserve(cascades_.size());
    auto in_group = [&](const Cascade& c) {
        if (group.empty() || group == "all") return true;
        if (!classified_) throw_invalid("cascade set not classified; no label groups available");
        if (group == "social_high") return c.content->social_high;
        if (group == "social_low") return !c.content->social_high;
        if (group == "cognitive_high") return c.content->cognitive_high;
        if (group == "cognitive_low") return !c.content->cognitive_high;
        for (const SentimentLabel l : {SentimentLabel::positive, SentimentLabel::negative,
                                       SentimentLabel::neutral, SentimentLabel::bipolar}) {
            if (group == to_string(l)) return *c.sentiment == l;
        }
        throw_invalid("unknown cascade group '" + group + "'");
    };
    for (const auto& cascade : cascades_) {
        if (!in_group(cascade)) continue;
        if (column == "n_sp") out.push_back(static_cast<double>(cascade.n_sp));
        else if (column == "n_c") out.push_back(static_cast<double>(cascade.n_c));
        else if (column == "n_tweets") out.push_back(static_cast<double>(cascade.n_tweets));
        else throw_invalid("unknown cascade column '" + column + "'");
    }
    return out;
}

} // namespace cascata
