#include "hypernash/randgame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "hypernash/rng.hpp"

namespace hypernash {

namespace {
constexpr std::string_view kMarksLabel = "marks";
constexpr std::string_view kPayoffsLabel = "payoffs";
}  // namespace

TieParameter::TieParameter(double a) : alpha(a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::invalid_argument("tie probability must be in [0, 1], got " +
                                std::to_string(a));
  }
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> support,
                                           std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty() || support_.size() != probs_.size()) {
    throw std::invalid_argument("distribution needs matching nonempty support/probs");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (!std::isfinite(support_[k])) {
      throw std::invalid_argument("support values must be finite");
    }
    if (k > 0 && !(support_[k - 1] < support_[k])) {
      throw std::invalid_argument("support values must be strictly increasing");
    }
    if (!(probs_[k] >= 0.0)) {
      throw std::invalid_argument("probabilities must be nonnegative");
    }
    total += probs_[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities must sum to 1, got " +
                                std::to_string(total));
  }
  cum_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    acc += probs_[k];
    cum_[k] = acc;
  }
  cum_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> support) {
  std::vector<double> probs(support.size(),
                            support.empty() ? 0.0 : 1.0 / support.size());
  return DiscreteDistribution(std::move(support), std::move(probs));
}

double DiscreteDistribution::sample(double u) const noexcept {
  std::size_t lo = 0, hi = cum_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (u < cum_[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return support_[lo];
}

TieParameter alpha_of(const DiscreteDistribution& dist) {
  double a = 0.0;
  for (double p : dist.probs()) a += p * p;
  return TieParameter(std::min(a, 1.0));
}

OrientedCube sample_marks(Dimension dim, TieParameter alpha, std::uint64_t seed) {
  const RngStream stream = RngStream::from(seed, kMarksLabel);
  const double a = alpha.alpha;
  const double ab = a + alpha.beta();
  OrientedCube cube{dim, std::vector<EdgeMark>(dim.edge_count()), a};
  for (std::uint64_t e = 0; e < cube.marks.size(); ++e) {
    const double u = stream.uniform01(e);
    cube.marks[e] = u < a    ? EdgeMark::Tie
                    : u < ab ? EdgeMark::TowardOne
                             : EdgeMark::TowardZero;
  }
  return cube;
}

PayoffTable sample_payoffs(Dimension dim, const DiscreteDistribution& dist,
                           std::uint64_t seed) {
  const RngStream stream = RngStream::from(seed, kPayoffsLabel);
  const std::size_t total = static_cast<std::size_t>(dim.n()) << dim.n();
  PayoffTable table{dim, std::vector<double>(total)};
  for (std::size_t k = 0; k < total; ++k) {
    table.z[k] = dist.sample(stream.uniform01(k));
  }
  return table;
}

namespace {

OrientedCube marks_of_impl(const PayoffTable& payoffs, std::optional<double> alpha) {
  const Dimension dim = payoffs.dim;
  OrientedCube cube{dim, std::vector<EdgeMark>(dim.edge_count()), alpha};
  for (int i = 0; i < dim.n(); ++i) {
    const std::uint32_t half = dim.vertex_count() >> 1;
    for (std::uint32_t j = 0; j < half; ++j) {
      const VertexId base = insert_zero_bit(j, i);
      const double z0 = payoffs.at(i, base);
      const double z1 = payoffs.at(i, base | (VertexId{1} << i));
      const std::uint64_t e = edge_index(dim, EdgeRef{base, i});
      cube.marks[e] = z0 < z1   ? EdgeMark::TowardOne
                      : z0 > z1 ? EdgeMark::TowardZero
                                : EdgeMark::Tie;
    }
  }
  return cube;
}

}  // namespace

OrientedCube marks_of(const PayoffTable& payoffs) {
  return marks_of_impl(payoffs, std::nullopt);
}

OrientedCube marks_of(const PayoffTable& payoffs, TieParameter alpha) {
  return marks_of_impl(payoffs, alpha.alpha);
}

}  // namespace hypernash
