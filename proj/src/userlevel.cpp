#include "cascata/userlevel.hpp"

#include <algorithm>
#include <fstream>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"

namespace cascata {

FeatureTable FeatureTable::build(const Corpus& corpus, const FollowerGraph& graph,
                                 const CoreAssignment& cores, RatioMode mode) {
    if (!corpus.fully_annotated()) throw_invalid("user features require an annotated corpus");
    if (cores.core.size() != graph.node_count())
        throw_invalid("core assignment does not match the graph");

    struct Accumulator {
        std::int64_t n = 0, n_pos = 0, n_neg = 0;
        std::int64_t soc = 0, cog = 0, w = 0;
        double soc_ratio_sum = 0, cog_ratio_sum = 0;
        std::int64_t n_with_words = 0;
    };
    std::unordered_map<std::string, Accumulator> acc;
    for (const auto& t : corpus.tweets()) {
        Accumulator& a = acc[t.author_id];
        const Annotation& annotation = *t.annotation;
        ++a.n;
        if (annotation.e == 1) ++a.n_pos;
        if (annotation.e == -1) ++a.n_neg;
        a.soc += annotation.soc;
        a.cog += annotation.cog;
        a.w += annotation.w;
        if (annotation.w > 0) {
            ++a.n_with_words;
            a.soc_ratio_sum += static_cast<double>(annotation.soc) / annotation.w;
            a.cog_ratio_sum += static_cast<double>(annotation.cog) / annotation.w;
        }
    }

    FeatureTable table;
    table.rows_.reserve(graph.node_count() + acc.size());
    for (std::uint32_t v = 0; v < graph.node_count(); ++v) table.rows_.push_back({graph.user(v)});
    for (const auto& [user, a] : acc) {
        if (!graph.node_id(user)) table.rows_.push_back({user});
    }
    std::sort(table.rows_.begin(), table.rows_.end(),
              [](const UserFeatures& a, const UserFeatures& b) { return a.user < b.user; });

    for (std::size_t i = 0; i < table.rows_.size(); ++i) {
        UserFeatures& row = table.rows_[i];
        if (const auto id = graph.node_id(row.user)) {
            row.k_c = cores.get(*id);
            row.k_in = static_cast<std::int64_t>(graph.k_in(*id));
            row.k_out = static_cast<std::int64_t>(graph.k_out(*id));
        }
        if (const auto it = acc.find(row.user); it != acc.end()) {
            const Accumulator& a = it->second;
            row.n = a.n;
            row.pos = static_cast<double>(a.n_pos) / static_cast<double>(a.n);
            row.neg = static_cast<double>(a.n_neg) / static_cast<double>(a.n);
            row.neu = 1.0 - row.pos - row.neg;
            if (mode == RatioMode::pooled) {
                row.soc = a.w > 0 ? static_cast<double>(a.soc) / static_cast<double>(a.w) : 0.0;
                row.cog = a.w > 0 ? static_cast<double>(a.cog) / static_cast<double>(a.w) : 0.0;
            } else {
                row.soc = a.n_with_words > 0 ? a.soc_ratio_sum / static_cast<double>(a.n_with_words) : 0.0;
                row.cog = a.n_with_words > 0 ? a.cog_ratio_sum / static_cast<double>(a.n_with_words) : 0.0;
            }
        }
        table.index_.emplace(row.user, i);
    }
    return table;
}

const UserFeatures* FeatureTable::find(const std::string& user) const {
    const auto it = index_.find(user);
    return it == index_.end() ? nullptr : &rows_[it->second];
}

void FeatureTable::write_tsv(std::ostream& out) const {
    out << "user\tn\tk_c\tk_in\tk_out\tpos\tneg\tneu\tsoc\tcog\n";
    for (const auto& row : rows_) {
        out << row.user << '\t' << row.n << '\t' << row.k_c << '\t' << row.k_in << '\t'
            << row.k_out << '\t' << format_double(row.pos) << '\t' << format_double(row.neg)
            << '\t' << format_double(row.neu) << '\t' << format_double(row.soc) << '\t'
            << format_double(row.cog) << "\n";
    }
}

void FeatureTable::write_tsv_file(const std::string& path) const {
    std::ofstream out = open_output(path);
    write_tsv(out);
}

EngagementRegressions engagement_regressions(const FeatureTable& features, std::int64_t min_users) {
    std::vector<const UserFeatures*> active;
    for (const auto& row : features.rows()) {
        if (row.n >= 1) active.push_back(&row);
    }
    if (static_cast<std::int64_t>(active.size()) < min_users)
        throw_numeric("engagement_regressions: need at least " + std::to_string(min_users) +
                      " users with n >= 1");

    auto column = [&](auto getter) {
        std::vector<double> out;
        out.reserve(active.size());
        for (const auto* row : active) out.push_back(static_cast<double>(getter(*row)));
        return out;
    };
    const std::vector<double> n = column([](const UserFeatures& r) { return r.n; });
    const std::vector<double> k_c = column([](const UserFeatures& r) { return r.k_c; });
    const std::vector<double> k_in = column([](const UserFeatures& r) { return r.k_in; });
    const std::vector<double> k_out = column([](const UserFeatures& r) { return r.k_out; });
    const std::vector<double> pos = column([](const UserFeatures& r) { return r.pos; });
    const std::vector<double> neg = column([](const UserFeatures& r) { return r.neg; });
    const std::vector<double> soc = column([](const UserFeatures& r) { return r.soc; });
    const std::vector<double> cog = column([](const UserFeatures& r) { return r.cog; });

    EngagementRegressions result;
    result.n_users = static_cast<std::int64_t>(active.size());
    result.activity = stats::ols(n, {k_c, k_in, k_out, pos, neg, soc, cog},
                                 {"k_c", "k_in", "k_out", "pos", "neg", "soc", "cog"});
    result.integration = stats::ols(k_c, {n, k_in, k_out, pos, neg, soc, cog},
                                    {"n", "k_in", "k_out", "pos", "neg", "soc", "cog"});
    return result;
}

namespace {

void write_regression_json(const stats::RegressionResult& r, const char* name, std::ostream& out) {
    out << "\"" << name << "\":{\"r_squared\":" << format_double(r.r_squared) << ",\"n\":" << r.n
        << ",\"coefficients\":{";
    for (std::size_t j = 0; j < r.names.size(); ++j) {
        if (j) out << ",";
        out << "\"" << r.names[j] << "\":{\"weight\":" << format_double(r.weights[j])
            << ",\"p\":" << format_double(r.p_values[j]) << "}";
    }
    out << "}}";
}

double metric_of(const UserFeatures& row, const std::string& metric) {
    if (metric == "pos") return row.pos;
    if (metric == "neg") return row.neg;
    if (metric == "neu") return row.neu;
    if (metric == "soc") return row.soc;
    if (metric == "cog") return row.cog;
    throw_invalid("unknown metric '" + metric + "' (expected pos|neg|neu|soc|cog)");
}

} // namespace

void write_regressions_json(const EngagementRegressions& r, std::ostream& out) {
    out << "{\"n_users\":" << r.n_users << ",";
    write_regression_json(r.activity, "activity_n", out);
    out << ",";
    write_regression_json(r.integration, "integration_k_c", out);
    out << "}\n";
}

NeighborhoodResult neighborhood_correlation(const FeatureTable& features,
                                            const FollowerGraph& graph, const std::string& metric,
                                            FolloweeWeight weight, std::int64_t n_shuffles,
                                            std::uint64_t seed) {
    // score pool: every user with n >= 1, in row (sorted-user) order
    std::vector<double> scores;
    std::vector<double> weights;
    std::vector<std::int32_t> pool_index_of_row(features.rows().size(), -1);
    for (std::size_t i = 0; i < features.rows().size(); ++i) {
        const auto& row = features.rows()[i];
        if (row.n >= 1) {
            pool_index_of_row[i] = static_cast<std::int32_t>(scores.size());
            scores.push_back(metric_of(row, metric));
            weights.push_back(static_cast<double>(row.n));
        }
    }

    // eligibility: n >= 1 and at least one followee with n >= 1
    std::vector<std::int32_t> x_index;
    std::vector<std::vector<std::int32_t>> neighbor_indices;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < features.rows().size(); ++i) {
        const auto& row = features.rows()[i];
        if (row.n < 1) continue;
        const auto id = graph.node_id(row.user);
        if (!id) continue;
        std::vector<std::int32_t> neighbors;
        for (const auto f : graph.followees(*id)) {
            const UserFeatures* frow = features.find(graph.user(f));
            if (!frow || frow->n < 1) continue;
            const auto row_idx = static_cast<std::size_t>(frow - features.rows().data());
            neighbors.push_back(pool_index_of_row[row_idx]);
        }
        if (neighbors.empty()) continue;
        double num = 0, den = 0;
        for (const auto p : neighbors) {
            const double w = weight == FolloweeWeight::per_tweet ? weights[static_cast<std::size_t>(p)] : 1.0;
            num += w * scores[static_cast<std::size_t>(p)];
            den += w;
        }
        xs.push_back(scores[static_cast<std::size_t>(pool_index_of_row[i])]);
        ys.push_back(num / den);
        x_index.push_back(pool_index_of_row[i]);
        neighbor_indices.push_back(std::move(neighbors));
    }
    if (xs.size() < 50)
        throw_numeric("neighborhood_correlation: need at least 50 eligible users, have " +
                      std::to_string(xs.size()));

    NeighborhoodResult result;
    result.metric = metric;
    result.n_eligible = static_cast<std::int64_t>(xs.size());
    result.r = stats::pearson(xs, ys);
    result.null = stats::permutation_null(
        scores, x_index, neighbor_indices,
        weight == FolloweeWeight::per_tweet ? std::span<const double>(weights)
                                            : std::span<const double>(),
        n_shuffles, seed);
    return result;
}

} // namespace cascata
