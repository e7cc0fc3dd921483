#include "hypernash/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace hypernash {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("summarize requires at least one value");
  }
  SummaryStats s;
  s.count = values.size();
  s.mean = compensated_sum(values) / static_cast<double>(s.count);
  if (s.count > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - s.mean;
      sq[i] = d * d;
    }
    s.variance = compensated_sum(sq) / static_cast<double>(s.count - 1);
  }
  s.se = std::sqrt(s.variance / static_cast<double>(s.count));
  s.interval_lo = s.mean - 4.0 * s.se;
  s.interval_hi = s.mean + 4.0 * s.se;
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_distance requires at least one sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample requires nonempty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb));
  }
  return d;
}

PoissonGof poisson_gof(std::span<const std::uint32_t> counts, double lambda) {
  if (counts.empty()) {
    throw std::invalid_argument("poisson_gof requires at least one count");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("poisson_gof requires lambda > 0");
  }
  const double total = static_cast<double>(counts.size());
  const std::uint32_t max_count = *std::max_element(counts.begin(), counts.end());

  // Expected totals for bins {0, .., m} plus the tail >= m+1.
  std::vector<double> expected;
  double pmf = std::exp(-lambda);
  double cdf = 0.0;
  for (std::uint32_t k = 0; k <= max_count; ++k) {
    expected.push_back(total * pmf);
    cdf += pmf;
    pmf *= lambda / static_cast<double>(k + 1);
  }
  expected.push_back(total * std::max(0.0, 1.0 - cdf));

  // Merge upward (tail into its predecessor) until all expected counts >= 5.
  std::size_t bins = expected.size();
  auto min_expected = [&]() {
    return *std::min_element(expected.begin(), expected.begin() + bins);
  };
  while (bins > 2 && min_expected() < 5.0) {
    expected[bins - 2] += expected[bins - 1];
    --bins;
  }
  if (bins < 2 || min_expected() < 5.0) {
    throw std::invalid_argument("poisson_gof: degenerate binning, too few samples");
  }

  std::vector<double> observed(bins, 0.0);
  for (std::uint32_t c : counts) {
    observed[std::min<std::size_t>(c, bins - 1)] += 1.0;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double d = observed[k] - expected[k];
    stat += d * d / expected[k];
  }
  const int df = static_cast<int>(bins) - 1;
  return PoissonGof{stat, df, chi_square_quantile(df, 0.999)};
}

double poisson_chi_square(std::span<const std::uint32_t> counts, double lambda) {
  return poisson_gof(counts, lambda).statistic;
}

double chi_square_quantile(int df, double p) {
  return boost::math::quantile(boost::math::chi_squared(df), p);
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median requires at least one value");
  }
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

}  // namespace hypernash
