#ifndef HYPERNASH_PERCOLATION_HPP
#define HYPERNASH_PERCOLATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hypernash/randgame.hpp"

namespace hypernash {

/// Bond percolation configuration on the n-cube: one open/closed flag per
/// canonical edge. `p` is the open probability used at creation; nullopt for
/// configurations derived from another object rather than sampled.
struct BondConfig {
  Dimension dim;
  Bitset open;
  std::optional<double> p;
};

struct ComponentStats {
  std::vector<VertexId> component_id;  // per vertex; id = smallest member
  std::vector<std::uint32_t> sizes;    // decreasing order
  std::uint32_t largest_size;
  std::uint32_t isolated_count;
};

/// Each edge open independently with probability p. Deterministic per seed.
BondConfig sample_bond(Dimension dim, double p, std::uint64_t seed);

/// Connected components of the open subgraph (union-find, ids canonicalized
/// to the smallest vertex of each component).
ComponentStats components(const BondConfig& bond);

/// Vertex set of the component containing v.
Bitset cluster_of(const BondConfig& bond, VertexId v);

/// Bond configuration whose open edges are exactly the oriented (non-tie)
/// edges of the cube. The implied open probability is 1 - alpha.
BondConfig orientation_subgraph(const OrientedCube& cube);

struct CouplingOutput {
  BondConfig bond;
  Bitset explored;
  std::uint32_t rounds;
};

/// The independent Bernoulli(beta) bond field B1 that coupled_percolation
/// starts from for a given seed (drawn from its own stream, so it is
/// independent of any cube sampled with the same seed).
BondConfig coupling_base_bond(Dimension dim, double beta, std::uint64_t seed);

/// Couples the directed exploration of `cube` from `start` with an independent
/// Bernoulli(beta) bond field B1 (beta = (1-alpha)/2, drawn from a stream keyed
/// separately from the cube's). Round by round, every edge between the explored
/// set and its unexplored neighbors is rewritten as open iff that edge is
/// oriented outward; out-neighbors join the explored set. At stabilization the
/// explored set equals the accessible set of `start` and also equals the open
/// cluster of `start` in the returned bond configuration, while every edge not
/// touching the exploration keeps its B1 state. Requires a known alpha.
CouplingOutput coupled_percolation(const OrientedCube& cube, VertexId start,
                                   std::uint64_t seed);

}  // namespace hypernash

#endif  // HYPERNASH_PERCOLATION_HPP
