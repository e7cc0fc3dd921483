#ifndef HYPERNASH_RANDGAME_HPP
#define HYPERNASH_RANDGAME_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hypernash/hypercube.hpp"

namespace hypernash {

/// Probability that two independent payoff draws tie. Each strict ordering of
/// two draws then has probability beta = (1 - alpha) / 2.
struct TieParameter {
  explicit TieParameter(double a);
  double alpha;
  double beta() const noexcept { return (1.0 - alpha) / 2.0; }
};

/// Purely atomic payoff law: strictly increasing support, probabilities
/// nonnegative and summing to 1 (within 1e-12).
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> support, std::vector<double> probs);
  static DiscreteDistribution uniform(std::vector<double> support);

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  /// Inverse-CDF draw from u in [0, 1).
  double sample(double u) const noexcept;

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<double> cum_;
};

/// Tie probability of a purely atomic law: sum of squared atom masses.
TieParameter alpha_of(const DiscreteDistribution& dist);

/// State of one cube edge (base, player): TowardOne iff the payoff of `player`
/// is strictly larger at the endpoint with bit `player` set, TowardZero for the
/// reverse strict inequality, Tie on equality.
enum class EdgeMark : std::uint8_t { TowardZero = 0, TowardOne = 1, Tie = 2 };

/// Partially oriented n-cube: one mark per canonical edge. `alpha` is the tie
/// probability of the generating law when known.
struct OrientedCube {
  Dimension dim;
  std::vector<EdgeMark> marks;
  std::optional<double> alpha;
};

/// Raw i.i.d. payoff realizations, one per (player, profile).
struct PayoffTable {
  Dimension dim;
  std::vector<double> z;  // [player * 2^n + profile]

  double at(int player, VertexId s) const noexcept {
    return z[(static_cast<std::size_t>(player) << dim.n()) + s];
  }
};

/// Each edge marked independently: Tie with probability alpha, each strict
/// orientation with probability beta. Deterministic in (dim, alpha, seed).
OrientedCube sample_marks(Dimension dim, TieParameter alpha, std::uint64_t seed);

/// n * 2^n i.i.d. draws from dist. Deterministic in (dim, dist, seed).
PayoffTable sample_payoffs(Dimension dim, const DiscreteDistribution& dist,
                           std::uint64_t seed);

/// Edge marks induced by payoff comparisons; orientation runs from the lower
/// to the higher payoff of the differing player. The overload without a tie
/// parameter leaves alpha unknown.
OrientedCube marks_of(const PayoffTable& payoffs);
OrientedCube marks_of(const PayoffTable& payoffs, TieParameter alpha);

inline EdgeMark mark_at(const OrientedCube& cube, VertexId v, int player) noexcept {
  return cube.marks[edge_index_at(cube.dim, v, player)];
}

/// True iff the edge at v along `player` is oriented away from v.
inline bool oriented_away_from(const OrientedCube& cube, VertexId v, int player) noexcept {
  const EdgeMark m = mark_at(cube, v, player);
  return (v >> player) & 1 ? m == EdgeMark::TowardZero : m == EdgeMark::TowardOne;
}

/// True iff the edge at v along `player` is oriented strictly toward v.
inline bool oriented_toward(const OrientedCube& cube, VertexId v, int player) noexcept {
  const EdgeMark m = mark_at(cube, v, player);
  return (v >> player) & 1 ? m == EdgeMark::TowardOne : m == EdgeMark::TowardZero;
}

}  // namespace hypernash

#endif  // HYPERNASH_RANDGAME_HPP
