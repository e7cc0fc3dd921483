#ifndef HYPERNASH_STATS_HPP
#define HYPERNASH_STATS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hypernash {

/// Moment summary of one observable: unbiased variance, standard error,
/// and the mean +/- 4*SE interval.
struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::optional<double> ks_distance;
  std::optional<double> chi_square;
};

/// Neumaier-compensated sum; the result depends only on element order.
double compensated_sum(std::span<const double> values);

SummaryStats summarize(std::span<const double> values);

/// Standard normal CDF.
double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance against `cdf`, two-sided step
/// convention: sup_i max(F(x_(i)) - i/n, (i+1)/n - F(x_(i))).
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct PoissonGof {
  double statistic;
  int df;            // merged bins - 1
  double q999;       // 0.999 quantile of chi-square(df)
};

/// Pearson chi-square of integer counts against Poisson(lambda). Bins
/// {0, 1, ..., m, >= m+1} are merged upward until every expected count is
/// at least 5; throws if fewer than two bins survive.
PoissonGof poisson_gof(std::span<const std::uint32_t> counts, double lambda);
double poisson_chi_square(std::span<const std::uint32_t> counts, double lambda);

double chi_square_quantile(int df, double p);

/// Median (mid-point of the two central order statistics for even sizes).
double median(std::vector<double> values);

}  // namespace hypernash

#endif  // HYPERNASH_STATS_HPP
