#ifndef HYPERNASH_EQUILIBRIUM_HPP
#define HYPERNASH_EQUILIBRIUM_HPP

#include <cstddef>
#include <vector>

#include "hypernash/randgame.hpp"

namespace hypernash {

struct EquilibriumReport {
  std::vector<VertexId> pne;   // increasing order
  std::vector<VertexId> spne;  // increasing order, subset of pne

  std::size_t pne_count() const noexcept { return pne.size(); }
  std::size_t spne_count() const noexcept { return spne.size(); }
};

/// Pure equilibrium: no incident edge is oriented away from v.
bool is_pne(const OrientedCube& cube, VertexId v);

/// Strict pure equilibrium: every incident edge is oriented toward v.
bool is_spne(const OrientedCube& cube, VertexId v);

EquilibriumReport enumerate_equilibria(const OrientedCube& cube);

/// Closed-form moments of the pure-equilibrium count at fixed (n, alpha):
/// mean (1+alpha)^n and variance tau_sq, with the per-vertex Bernoulli
/// variance term b_n = (1-beta)^n (1 - (1-beta)^n).
struct ClosedFormMoments {
  double mean;
  double b_n;
  double tau_sq;
};

ClosedFormMoments pne_moments(Dimension dim, TieParameter alpha);
double mean_pne(Dimension dim, TieParameter alpha);
double var_pne(Dimension dim, TieParameter alpha);

/// Expected number of strict pure equilibria: (1 - alpha)^n = (2 beta)^n.
double mean_spne(Dimension dim, TieParameter alpha);

/// Rescaled count (count - (1+alpha)^n) / (1+alpha)^(n/2). Requires alpha > 0.
double clt_statistic(double count, Dimension dim, TieParameter alpha);

/// floor(-1 / ln((1+alpha)/2)); best-response convergence is guaranteed
/// asymptotically when this is at most 3. Requires 0 < alpha < 1.
int brd_threshold(TieParameter alpha);

}  // namespace hypernash

#endif  // HYPERNASH_EQUILIBRIUM_HPP
