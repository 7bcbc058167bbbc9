#include "cascata/stats.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "cascata/errors.hpp"
#include "cascata/ioutil.hpp"
#include "cascata/parallel.hpp"
#include "cascata/rng.hpp"

namespace cascata::stats {

namespace {

constexpr double kLogFloor = 1e-300;

struct Counted {
    std::int64_t x;
    std::int64_t count;
};

// distinct ascending values with counts; validates positive integers
std::vector<Counted> aggregate_integer_sample(std::span<const double> values,
                                              const char* caller) {
    if (values.empty()) throw_empty(std::string(caller) + ": empty sample");
    std::vector<std::int64_t> ints;
    ints.reserve(values.size());
    for (const double v : values) {
        if (!(v >= 1) || v != std::floor(v) || v > 4.6e18)
            throw_invalid(std::string(caller) + ": values must be positive integers");
        ints.push_back(static_cast<std::int64_t>(v));
    }
    std::sort(ints.begin(), ints.end());
    std::vector<Counted> out;
    for (std::size_t i = 0; i < ints.size();) {
        std::size_t j = i;
        while (j < ints.size() && ints[j] == ints[i]) ++j;
        out.push_back({ints[i], static_cast<std::int64_t>(j - i)});
        i = j;
    }
    return out;
}

} // namespace

// ----------------------------------------------------------------------------
// special functions

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0)) throw_invalid("hurwitz_zeta: requires s > 1");
    if (!(q >= 1.0)) throw_invalid("hurwitz_zeta: requires q >= 1");
    const double start = std::max(q, std::max(16.0, 2.0 * s));
    const double N = std::ceil(start);
    double direct = 0.0;
    for (double k = q; k < N; k += 1.0) direct += std::pow(k, -s);
    // Euler-Maclaurin tail at N with Bernoulli corrections through B8
    const double ninv = 1.0 / N;
    const double npow = std::pow(N, -s);
    double tail = N * npow / (s - 1.0) + 0.5 * npow;
    double c = s * npow * ninv;
    tail += c / 12.0;
    c *= (s + 1.0) * (s + 2.0) * ninv * ninv;
    tail -= c / 720.0;
    c *= (s + 3.0) * (s + 4.0) * ninv * ninv;
    tail += c / 30240.0;
    c *= (s + 5.0) * (s + 6.0) * ninv * ninv;
    tail -= c / 1209600.0;
    return direct + tail;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2_v<double>); }

double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / std::numbers::sqrt2_v<double>); }

namespace {

// Lentz continued fraction for the regularized incomplete beta function.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incomplete_beta_reg(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0)) throw_invalid("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta_reg(df / 2.0, 0.5, df / (df + t * t));
}

// ----------------------------------------------------------------------------
// CCDF

std::vector<CcdfPoint> ccdf(std::span<const double> values) {
    const auto counts = aggregate_integer_sample(values, "ccdf");
    const double n = static_cast<double>(values.size());
    std::vector<CcdfPoint> out;
    out.reserve(counts.size());
    std::int64_t cum = 0;
    for (const auto& [x, count] : counts) {
        cum += count;
        out.push_back({x, static_cast<double>(values.size() - cum) / n});
    }
    return out;
}

void write_ccdf_tsv(std::span<const double> values, std::ostream& out) {
    out << "x\tccdf\n";
    for (const auto& point : ccdf(values)) {
        out << point.x << '\t' << format_double(point.p) << "\n";
    }
}

// ----------------------------------------------------------------------------
// discrete power-law fit

namespace {

struct TailView {
    const std::vector<Counted>& counts;
    std::size_t first;        // first distinct index in the tail
    std::int64_t n_tail;
    double lnsum;             // sum of count * ln(x) over the tail
    std::int64_t x_min;
};

double neg_log_likelihood(const TailView& tail, double alpha) {
    return static_cast<double>(tail.n_tail) *
               std::log(hurwitz_zeta(alpha, static_cast<double>(tail.x_min))) +
           alpha * tail.lnsum;
}

double mle_alpha(const TailView& tail) {
    // golden-section on the convex negative log-likelihood
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 1.0 + 1e-8;
    double hi = 64.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = neg_log_likelihood(tail, x1);
    double f2 = neg_log_likelihood(tail, x2);
    for (int iter = 0; iter < 120 && (hi - lo) > 1e-11; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = neg_log_likelihood(tail, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = neg_log_likelihood(tail, x2);
        }
    }
    return 0.5 * (lo + hi);
}

double ks_distance(const TailView& tail, double alpha) {
    const double z = hurwitz_zeta(alpha, static_cast<double>(tail.x_min));
    double cum = 0;
    double d = 0;
    for (std::size_t i = tail.first; i < tail.counts.size(); ++i) {
        cum += static_cast<double>(tail.counts[i].count);
        const double f_emp = cum / static_cast<double>(tail.n_tail);
        const double f_fit =
            1.0 - hurwitz_zeta(alpha, static_cast<double>(tail.counts[i].x) + 1.0) / z;
        d = std::max(d, std::fabs(f_emp - f_fit));
    }
    return d;
}

TailView make_tail(const std::vector<Counted>& counts,
                   const std::vector<std::int64_t>& suffix_count,
                   const std::vector<double>& suffix_lnsum, std::size_t first,
                   std::int64_t x_min) {
    return TailView{counts, first, suffix_count[first], suffix_lnsum[first], x_min};
}

} // namespace

PowerLawFit fit_power_law(std::span<const double> values, std::int64_t x_min) {
    const auto counts = aggregate_integer_sample(values, "fit_power_law");
    const std::size_t m = counts.size();
    std::vector<std::int64_t> suffix_count(m + 1, 0);
    std::vector<double> suffix_lnsum(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        suffix_count[i] = suffix_count[i + 1] + counts[i].count;
        suffix_lnsum[i] =
            suffix_lnsum[i + 1] +
            static_cast<double>(counts[i].count) * std::log(static_cast<double>(counts[i].x));
    }

    auto fit_at = [&](std::size_t first, std::int64_t xm) {
        PowerLawFit fit;
        const TailView tail = make_tail(counts, suffix_count, suffix_lnsum, first, xm);
        fit.x_min = xm;
        fit.n_tail = tail.n_tail;
        fit.alpha = mle_alpha(tail);
        fit.ks_d = ks_distance(tail, fit.alpha);
        fit.sigma = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(tail.n_tail));
        return fit;
    };

    if (x_min > 0) {
        if (x_min > counts.back().x)
            throw_invalid("fit_power_law: x_min exceeds the largest observed value");
        std::size_t first = 0;
        while (first < m && counts[first].x < x_min) ++first;
        if (suffix_count[first] < 10) throw_numeric("fit_power_law: fewer than 10 tail samples");
        if (m - first < 2) throw_numeric("fit_power_law: degenerate tail (single distinct value)");
        return fit_at(first, x_min);
    }

    // x_min search over distinct values, capped at their 90th percentile
    const std::size_t cap = (m * 9) / 10; // last admissible distinct index
    bool any = false;
    PowerLawFit best;
    for (std::size_t first = 0; first <= cap && first < m; ++first) {
        if (suffix_count[first] < 10) break; // counts only shrink to the right
        if (m - first < 2) break;
        const PowerLawFit fit = fit_at(first, counts[first].x);
        if (!any || fit.ks_d < best.ks_d) {
            best = fit;
            any = true;
        }
    }
    if (!any) {
        if (m < 2) throw_numeric("fit_power_law: degenerate tail (single distinct value)");
        throw_numeric("fit_power_law: fewer than 10 tail samples");
    }
    return best;
}

double hill_alpha(std::span<const double> values, std::int64_t x_min) {
    if (x_min < 1) throw_invalid("hill_alpha: x_min must be >= 1");
    double lnsum = 0;
    std::int64_t n = 0;
    for (const double v : values) {
        if (v >= static_cast<double>(x_min)) {
            lnsum += std::log(v / (static_cast<double>(x_min) - 0.5));
            ++n;
        }
    }
    if (n < 2) throw_numeric("hill_alpha: fewer than 2 tail samples");
    return 1.0 + static_cast<double>(n) / lnsum;
}

void write_powerlaw_ccdf_tsv(const PowerLawFit& fit, std::int64_t n_total, std::int64_t x_max,
                             std::ostream& out) {
    if (n_total <= 0) throw_invalid("write_powerlaw_ccdf_tsv: n_total must be positive");
    const double z = hurwitz_zeta(fit.alpha, static_cast<double>(fit.x_min));
    const double tail_fraction =
        static_cast<double>(fit.n_tail) / static_cast<double>(n_total);
    out << "x\tccdf_fit\n";
    std::int64_t prev = -1;
    const double lo = static_cast<double>(fit.x_min);
    const double hi = static_cast<double>(std::max(x_max, fit.x_min + 1));
    constexpr int kPoints = 160;
    for (int i = 0; i <= kPoints; ++i) {
        const double t = static_cast<double>(i) / kPoints;
        const auto x = static_cast<std::int64_t>(std::floor(lo * std::pow(hi / lo, t)));
        if (x <= prev) continue;
        prev = x;
        const double p = tail_fraction * hurwitz_zeta(fit.alpha, static_cast<double>(x) + 1.0) / z;
        out << x << '\t' << format_double(p) << "\n";
    }
}

// ----------------------------------------------------------------------------
// power law vs lognormal

namespace {

struct DiscretizedLognormal {
    double mu;
    double sigma;
    double ln_denominator; // log normalization over the tail

    double log_mass(double x) const {
        const double lo = (std::log(x - 0.5) - mu) / sigma;
        const double hi = (std::log(x + 0.5) - mu) / sigma;
        const double p = 0.5 * (std::erfc(lo / std::numbers::sqrt2_v<double>) -
                                std::erfc(hi / std::numbers::sqrt2_v<double>));
        return std::log(std::max(p, kLogFloor)) - ln_denominator;
    }

    static double tail_ln_denominator(double mu, double sigma, double x_min) {
        const double z0 = (std::log(x_min - 0.5) - mu) / sigma;
        const double tail = 0.5 * std::erfc(z0 / std::numbers::sqrt2_v<double>);
        return std::log(std::max(tail, kLogFloor));
    }
};

// Nelder-Mead over (mu, log sigma) for the rounded lognormal restricted to
// the tail. The data enter as distinct values with counts.
DiscretizedLognormal fit_lognormal_tail(const std::vector<Counted>& tail, std::int64_t x_min,
                                        std::int64_t n) {
    const double xm = static_cast<double>(x_min);
    auto nll = [&](double mu, double log_sigma) {
        const double sigma = std::exp(log_sigma);
        DiscretizedLognormal model{mu, sigma,
                                   DiscretizedLognormal::tail_ln_denominator(mu, sigma, xm)};
        double total = 0;
        for (const auto& [x, count] : tail) {
            total -= static_cast<double>(count) * model.log_mass(static_cast<double>(x));
        }
        return total;
    };

    // moment start on log values
    double mean = 0;
    for (const auto& [x, count] : tail) mean += count * std::log(static_cast<double>(x));
    mean /= static_cast<double>(n);
    double var = 0;
    for (const auto& [x, count] : tail) {
        const double d = std::log(static_cast<double>(x)) - mean;
        var += count * d * d;
    }
    var /= static_cast<double>(n);
    const double sd0 = std::max(std::sqrt(var), 0.05);

    struct Vertex {
        double mu, ls, f;
    };
    std::array<Vertex, 3> simplex{Vertex{mean, std::log(sd0), 0},
                                  Vertex{mean + 0.5, std::log(sd0), 0},
                                  Vertex{mean, std::log(sd0) + 0.5, 0}};
    for (auto& v : simplex) v.f = nll(v.mu, v.ls);
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();
    for (int iter = 0; iter < 500; ++iter) {
        if (std::fabs(simplex[2].f - simplex[0].f) < 1e-10 &&
            std::fabs(simplex[2].mu - simplex[0].mu) < 1e-9 &&
            std::fabs(simplex[2].ls - simplex[0].ls) < 1e-9)
            break;
        const double cmu = 0.5 * (simplex[0].mu + simplex[1].mu);
        const double cls = 0.5 * (simplex[0].ls + simplex[1].ls);
        Vertex refl{cmu + (cmu - simplex[2].mu), cls + (cls - simplex[2].ls), 0};
        refl.f = nll(refl.mu, refl.ls);
        if (refl.f < simplex[0].f) {
            Vertex expand{cmu + 2 * (cmu - simplex[2].mu), cls + 2 * (cls - simplex[2].ls), 0};
            expand.f = nll(expand.mu, expand.ls);
            simplex[2] = expand.f < refl.f ? expand : refl;
        } else if (refl.f < simplex[1].f) {
            simplex[2] = refl;
        } else {
            Vertex contract{cmu + 0.5 * (simplex[2].mu - cmu), cls + 0.5 * (simplex[2].ls - cls), 0};
            contract.f = nll(contract.mu, contract.ls);
            if (contract.f < simplex[2].f) {
                simplex[2] = contract;
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i].mu = simplex[0].mu + 0.5 * (simplex[i].mu - simplex[0].mu);
                    simplex[i].ls = simplex[0].ls + 0.5 * (simplex[i].ls - simplex[0].ls);
                    simplex[i].f = nll(simplex[i].mu, simplex[i].ls);
                }
            }
        }
        order();
    }
    const double sigma = std::exp(simplex[0].ls);
    return DiscretizedLognormal{simplex[0].mu, sigma,
                                DiscretizedLognormal::tail_ln_denominator(simplex[0].mu, sigma, xm)};
}

} // namespace

LRTResult lrt_vs_lognormal(std::span<const double> values, const PowerLawFit& fit) {
    const auto counts = aggregate_integer_sample(values, "lrt_vs_lognormal");
    std::vector<Counted> tail;
    std::int64_t n = 0;
    for (const auto& c : counts) {
        if (c.x >= fit.x_min) {
            tail.push_back(c);
            n += c.count;
        }
    }
    if (n < 10) throw_numeric("lrt_vs_lognormal: fewer than 10 tail samples");

    const DiscretizedLognormal lognormal = fit_lognormal_tail(tail, fit.x_min, n);
    const double ln_z = std::log(hurwitz_zeta(fit.alpha, static_cast<double>(fit.x_min)));

    double r_sum = 0;
    std::vector<double> point_ratio(tail.size());
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double x = static_cast<double>(tail[i].x);
        const double l_pl = -fit.alpha * std::log(x) - ln_z;
        const double l_ln = lognormal.log_mass(x);
        point_ratio[i] = l_pl - l_ln;
        r_sum += static_cast<double>(tail[i].count) * point_ratio[i];
    }
    const double mean = r_sum / static_cast<double>(n);
    double var = 0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double d = point_ratio[i] - mean;
        var += static_cast<double>(tail[i].count) * d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);

    LRTResult result;
    result.R = r_sum;
    result.ln_mu = lognormal.mu;
    result.ln_sigma = lognormal.sigma;
    if (sd < 1e-12) {
        result.p = 1.0;
    } else {
        const double vuong = r_sum / (sd * std::sqrt(static_cast<double>(n)));
        result.p = normal_two_sided_p(vuong);
    }
    return result;
}

// ----------------------------------------------------------------------------
// two-sample KS

namespace {

struct PooledGroups {
    std::vector<double> values;      // distinct, ascending
    std::vector<std::int64_t> total; // pooled count per group
    std::vector<std::int32_t> group_of; // for each pooled slot in sorted order
};

double ks_statistic(const std::vector<std::int64_t>& count_a, const PooledGroups& groups,
                    double na, double nb, bool weighted) {
    const double n = na + nb;
    double cum_a = 0;
    double cum_total = 0;
    double d = 0;
    const std::size_t g = groups.total.size();
    for (std::size_t i = 0; i < g; ++i) {
        cum_a += static_cast<double>(count_a[i]);
        cum_total += static_cast<double>(groups.total[i]);
        const double fa = cum_a / na;
        const double fb = (cum_total - cum_a) / nb;
        double diff = std::fabs(fa - fb);
        if (weighted) {
            const double pooled = cum_total / n;
            if (pooled <= 0.0 || pooled >= 1.0) continue;
            diff /= std::sqrt(pooled * (1.0 - pooled));
        }
        d = std::max(d, diff);
    }
    return d;
}

} // namespace

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b, bool weighted,
                       std::int64_t n_perm, std::uint64_t seed) {
    if (a.size() < 10 || b.size() < 10)
        throw_numeric("ks_two_sample: each sample needs at least 10 points");
    if (n_perm < 1) throw_invalid("ks_two_sample: n_perm must be >= 1");

    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, std::int32_t>> pooled; // (value, origin 0=a 1=b)
    pooled.reserve(n);
    for (const double v : a) pooled.emplace_back(v, 0);
    for (const double v : b) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end());

    PooledGroups groups;
    groups.group_of.resize(n);
    std::vector<std::int64_t> observed_a;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        std::int64_t in_a = 0;
        while (j < n && pooled[j].first == pooled[i].first) {
            groups.group_of[j] = static_cast<std::int32_t>(groups.values.size());
            in_a += pooled[j].second == 0 ? 1 : 0;
            ++j;
        }
        groups.values.push_back(pooled[i].first);
        groups.total.push_back(static_cast<std::int64_t>(j - i));
        observed_a.push_back(in_a);
        i = j;
    }

    KSResult result;
    result.weighted = weighted;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    result.D = ks_statistic(observed_a, groups, na, nb, weighted);

    // pooled relabeling: draw min(na, nb) slots out of the sorted pool, so
    // the procedure (and its p) is symmetric in the two samples
    const std::size_t n_sel = std::min(a.size(), b.size());
    const double n_other = static_cast<double>(n - n_sel);
    std::vector<std::uint8_t> hits(static_cast<std::size_t>(n_perm), 0);
    parallel_for_index(static_cast<std::size_t>(n_perm), [&](std::size_t iter) {
        Rng rng = Rng::for_iteration(seed, iter);
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<std::int64_t> count_sel(groups.total.size(), 0);
        for (std::size_t i = 0; i < n_sel; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
            std::swap(idx[i], idx[j]);
            ++count_sel[static_cast<std::size_t>(groups.group_of[idx[i]])];
        }
        const double d_perm =
            ks_statistic(count_sel, groups, static_cast<double>(n_sel), n_other, weighted);
        if (d_perm >= result.D) hits[iter] = 1;
    });
    std::int64_t hit_count = 0;
    for (const auto h : hits) hit_count += h;
    result.p = static_cast<double>(hit_count) / static_cast<double>(n_perm);
    return result;
}

// ----------------------------------------------------------------------------
// correlation / regression

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw_invalid("pearson: length mismatch");
    if (x.size() < 3) throw_numeric("pearson: need at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw_numeric("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

RegressionResult ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
                     const std::vector<std::string>& names, bool zscore) {
    const std::size_t n = y.size();
    const std::size_t p = columns.size();
    if (p == 0) throw_invalid("ols: no regressors");
    if (names.size() != p) throw_invalid("ols: names/columns size mismatch");
    for (const auto& column : columns) {
        if (column.size() != n) throw_invalid("ols: column length mismatch");
    }
    if (n < p + 1) throw_numeric("ols: need at least p + 1 rows");

    std::vector<double> b(y.begin(), y.end());
    std::vector<double> a(n * p); // column-major design matrix
    for (std::size_t j = 0; j < p; ++j) {
        std::copy(columns[j].begin(), columns[j].end(), a.begin() + static_cast<std::ptrdiff_t>(j * n));
    }

    auto standardize = [&](double* v, const std::string& what) {
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) mean += v[i];
        mean /= static_cast<double>(n);
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] -= mean;
            ss += v[i] * v[i];
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd <= 0.0) throw_numeric("ols: zero variance in " + what);
        for (std::size_t i = 0; i < n; ++i) v[i] /= sd;
    };
    if (zscore) {
        standardize(b.data(), "response");
        for (std::size_t j = 0; j < p; ++j) standardize(a.data() + j * n, "regressor '" + names[j] + "'");
    }

    double tss = 0;
    if (zscore) {
        for (const double v : b) tss += v * v;
    } else {
        double mean = 0;
        for (const double v : b) mean += v;
        mean /= static_cast<double>(n);
        for (const double v : b) tss += (v - mean) * (v - mean);
    }

    // Householder QR, transforming b alongside
    std::vector<double> rdiag(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double* col = a.data() + j * n;
        double norm = 0;
        for (std::size_t i = j; i < n; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            rdiag[j] = 0.0;
            continue;
        }
        if (col[j] > 0) norm = -norm;
        for (std::size_t i = j; i < n; ++i) col[i] /= norm;
        col[j] -= 1.0;
        for (std::size_t k = j + 1; k < p; ++k) {
            double* colk = a.data() + k * n;
            double s = 0;
            for (std::size_t i = j; i < n; ++i) s += col[i] * colk[i];
            s /= col[j];
            for (std::size_t i = j; i < n; ++i) colk[i] += s * col[i];
        }
        double s = 0;
        for (std::size_t i = j; i < n; ++i) s += col[i] * b[i];
        s /= col[j];
        for (std::size_t i = j; i < n; ++i) b[i] += s * col[i];
        rdiag[j] = norm;
    }

    double max_diag = 0;
    for (const double d : rdiag) max_diag = std::max(max_diag, std::fabs(d));
    std::string collinear;
    for (std::size_t j = 0; j < p; ++j) {
        if (std::fabs(rdiag[j]) <= 1e-10 * std::max(max_diag, 1e-30)) {
            if (!collinear.empty()) collinear += ", ";
            collinear += names[j];
        }
    }
    if (!collinear.empty()) throw_numeric("ols: collinear regressors: " + collinear);

    // back-substitution: R beta = (Q^T b)[0..p)
    std::vector<double> beta(p, 0.0);
    for (std::size_t j = p; j-- > 0;) {
        double s = b[j];
        for (std::size_t k = j + 1; k < p; ++k) s -= a[k * n + j] * beta[k];
        beta[j] = s / rdiag[j];
    }

    double rss = 0;
    for (std::size_t i = p; i < n; ++i) rss += b[i] * b[i];

    // (X^T X)^-1 = R^-1 R^-T; solve R x = e_col per column
    std::vector<double> rinv(p * p, 0.0); // row-major R^-1
    for (std::size_t col = 0; col < p; ++col) {
        std::vector<double> x(p, 0.0);
        for (std::size_t j = p; j-- > 0;) {
            double s = j == col ? 1.0 : 0.0;
            for (std::size_t k = j + 1; k < p; ++k) s -= a[k * n + j] * x[k];
            x[j] = s / rdiag[j];
        }
        for (std::size_t j = 0; j < p; ++j) rinv[j * p + col] = x[j];
    }

    RegressionResult result;
    result.names = names;
    result.weights = beta;
    result.n = static_cast<std::int64_t>(n);
    result.r_squared = tss > 0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
    const double df = static_cast<double>(n - p);
    const double s2 = rss / df;
    result.std_errors.resize(p);
    result.t_values.resize(p);
    result.p_values.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        double inv_jj = 0;
        for (std::size_t k = 0; k < p; ++k) inv_jj += rinv[j * p + k] * rinv[j * p + k];
        const double se = std::sqrt(s2 * inv_jj);
        result.std_errors[j] = se;
        if (se > 0) {
            result.t_values[j] = beta[j] / se;
            result.p_values[j] = student_t_two_sided_p(result.t_values[j], df);
        } else {
            result.t_values[j] = beta[j] == 0 ? 0 : std::numeric_limits<double>::infinity();
            result.p_values[j] = beta[j] == 0 ? 1.0 : 0.0;
        }
    }
    return result;
}

// ----------------------------------------------------------------------------
// shuffle null

NullSummary permutation_null(std::span<const double> scores, std::span<const std::int32_t> x_index,
                             const std::vector<std::vector<std::int32_t>>& neighbor_indices,
                             std::span<const double> weights, std::int64_t n_iterations,
                             std::uint64_t seed) {
    if (n_iterations < 100) throw_invalid("permutation_null: need at least 100 iterations");
    if (x_index.size() != neighbor_indices.size())
        throw_invalid("permutation_null: x_index/neighbors size mismatch");
    if (x_index.size() < 3) throw_numeric("permutation_null: need at least 3 eligible users");
    if (!weights.empty() && weights.size() != scores.size())
        throw_invalid("permutation_null: weights must align with scores");

    const std::size_t m = scores.size();
    const std::size_t e = x_index.size();
    std::vector<double> rs(static_cast<std::size_t>(n_iterations),
                           std::numeric_limits<double>::quiet_NaN());
    parallel_for_index(static_cast<std::size_t>(n_iterations), [&](std::size_t iter) {
        Rng rng = Rng::for_iteration(seed, iter);
        std::vector<std::uint32_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        assert(perm.size() == m); // topology and score multiset are fixed
        std::vector<double> xs(e), ys(e);
        for (std::size_t j = 0; j < e; ++j) {
            xs[j] = scores[perm[static_cast<std::size_t>(x_index[j])]];
            double num = 0, den = 0;
            for (const auto f : neighbor_indices[j]) {
                const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(f)];
                num += w * scores[perm[static_cast<std::size_t>(f)]];
                den += w;
            }
            ys[j] = den > 0 ? num / den : 0.0;
        }
        try {
            rs[iter] = pearson(xs, ys);
        } catch (const Error&) {
            // degenerate variance in this iteration: leave NaN, counted below
        }
    });

    NullSummary summary;
    double sum = 0;
    for (const double r : rs) {
        if (std::isnan(r)) {
            ++summary.skipped;
        } else {
            ++summary.used;
            sum += r;
        }
    }
    if (summary.used < 2) throw_numeric("permutation_null: all iterations degenerate");
    summary.null_mean = sum / static_cast<double>(summary.used);
    double ss = 0;
    for (const double r : rs) {
        if (!std::isnan(r)) {
            const double d = r - summary.null_mean;
            ss += d * d;
        }
    }
    summary.null_2sd = 2.0 * std::sqrt(ss / static_cast<double>(summary.used - 1));
    return summary;
}

} // namespace cascata::stats
