#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cascata::stats {

// ---------------------------------------------------------------------------
// special functions

// Hurwitz zeta sum_{k>=q} k^-s for s > 1, q >= 1. Direct partial sum plus
// an Euler-Maclaurin tail; relative error well below the 1e-10 the samplers
// and fitters are documented for.
double hurwitz_zeta(double s, double q);

double normal_cdf(double z);
double normal_two_sided_p(double z);
double incomplete_beta_reg(double a, double b, double x);
double student_t_two_sided_p(double t, double df);

// ---------------------------------------------------------------------------
// empirical distributions

struct CcdfPoint {
    std::int64_t x = 0;
    double p = 0; // P(X > x)
};

// Complementary CDF over the distinct values of a positive integer sample;
// strictly decreasing, last point P(X > max) = 0.
std::vector<CcdfPoint> ccdf(std::span<const double> values);
void write_ccdf_tsv(std::span<const double> values, std::ostream& out);

// ---------------------------------------------------------------------------
// discrete power-law MLE (zeta-normalized), Clauset-style x_min selection

struct PowerLawFit {
    double alpha = 0;
    double sigma = 0; // (alpha-1)/sqrt(n_tail), continuous approximation
    double ks_d = 0;  // KS distance between fitted and empirical tail CDFs
    std::int64_t x_min = 1;
    std::int64_t n_tail = 0;
};

// values must be positive integers. x_min = 0 selects x_min by minimizing
// the fitted-vs-empirical KS distance over the distinct values, capped at
// their 90th percentile so the tail keeps at least 10 points.
PowerLawFit fit_power_law(std::span<const double> values, std::int64_t x_min = 0);

// Continuous Hill estimator on the same tail; cross-check only, not the
// default estimate.
double hill_alpha(std::span<const double> values, std::int64_t x_min);

// Model CCDF sample points for plot overlays, scaled to the tail fraction.
void write_powerlaw_ccdf_tsv(const PowerLawFit& fit, std::int64_t n_total, std::int64_t x_max,
                             std::ostream& out);

// ---------------------------------------------------------------------------
// power law vs lognormal (tail discretized by rounding), Vuong test

struct LRTResult {
    double R = 0; // log-likelihood(power law) - log-likelihood(lognormal); > 0 favors the power law
    double p = 1; // two-sided significance of the normalized ratio
    double ln_mu = 0;
    double ln_sigma = 1;
};

LRTResult lrt_vs_lognormal(std::span<const double> values, const PowerLawFit& fit);

// ---------------------------------------------------------------------------
// two-sample KS with pooled-relabel permutation p-values

struct KSResult {
    double D = 0;
    double p = 1;
    bool weighted = false;
};

// weighted = true rescales the CDF gap by sqrt(P(1-P)) of the pooled CDF,
// the tail-corrected statistic; points where P is 0 or 1 are excluded.
// p = fraction of n_perm pooled relabelings with D* >= D. Deterministic
// given seed, symmetric in (a, b).
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b, bool weighted = false,
                       std::int64_t n_perm = 1000, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// correlation / regression

double pearson(std::span<const double> x, std::span<const double> y);

struct RegressionResult {
    std::vector<std::string> names;
    std::vector<double> weights;
    std::vector<double> std_errors;
    std::vector<double> t_values;
    std::vector<double> p_values;
    double r_squared = 0;
    std::int64_t n = 0;
};

// Least squares via Householder QR. With zscore (the default) the response
// and every regressor are standardized and no intercept is fitted; p-values
// are two-sided t-tests on n - p degrees of freedom. Rank deficiency is an
// error naming the collinear columns.
RegressionResult ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
                     const std::vector<std::string>& names, bool zscore = true);

// ---------------------------------------------------------------------------
// shuffle nulls on fixed topology

struct NullSummary {
    double null_mean = 0;
    double null_2sd = 0;
    std::int64_t used = 0;
    std::int64_t skipped = 0;
};

// scores holds one metric value per score-carrying user. For each eligible
// user j, x = scores[x_index[j]] and y = (weighted) mean of scores over
// neighbor_indices[j]. Each iteration permutes scores over all users,
// recomputes the neighborhood means on the fixed topology, and records the
// Pearson r; iterations with degenerate variance are skipped and counted.
NullSummary permutation_null(std::span<const double> scores,
                             std::span<const std::int32_t> x_index,
                             const std::vector<std::vector<std::int32_t>>& neighbor_indices,
                             std::span<const double> weights, // empty = user-weighted (all 1)
                             std::int64_t n_iterations = 1000, std::uint64_t seed = 0);

} // namespace cascata::stats
