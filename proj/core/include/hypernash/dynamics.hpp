#ifndef HYPERNASH_DYNAMICS_HPP
#define HYPERNASH_DYNAMICS_HPP

#include <cstdint>
#include <vector>

#include "hypernash/equilibrium.hpp"
#include "hypernash/randgame.hpp"

namespace hypernash {

/// One best-response run: the vertex path and how it ended. Consecutive path
/// vertices differ in one bit and each traversed edge was oriented away from
/// the earlier vertex; a Converged run ends at a pure equilibrium.
struct BrdTrace {
  enum class Outcome { Converged, StepLimit };

  VertexId start;
  std::vector<VertexId> path;  // path.front() == start, path.back() == last
  std::uint64_t steps;         // moves taken, == path.size() - 1
  Outcome outcome;
  VertexId last;
};

/// Path-free summary of a run, for bulk experiments.
struct BrdStats {
  VertexId start;
  VertexId last;
  std::uint64_t steps;
  bool converged;
};

/// Default move budget: 64 * n * 2^n.
std::uint64_t default_brd_max_steps(Dimension dim);

/// Players whose edge at v points away from v; empty iff v is a pure equilibrium.
std::vector<int> improving_players(const OrientedCube& cube, VertexId v);

/// Repeatedly move to flip(v, i) with i uniform over improving players, using
/// a dedicated per-step random stream keyed by (seed, step), until no player
/// improves (Converged) or max_steps moves were taken (StepLimit).
BrdTrace brd_run(const OrientedCube& cube, VertexId start, std::uint64_t seed,
                 std::uint64_t max_steps);
BrdStats brd_run_stats(const OrientedCube& cube, VertexId start, std::uint64_t seed,
                       std::uint64_t max_steps);

/// Partition of the vertices into the set L reachable from `start` along
/// directed edges (including start) and its complement M.
class AccessPartition {
 public:
  AccessPartition(VertexId start, Bitset accessible)
      : start_(start), accessible_(std::move(accessible)) {}

  VertexId start() const noexcept { return start_; }
  const Bitset& accessible() const noexcept { return accessible_; }
  Bitset inaccessible() const { return accessible_.complement(); }
  std::uint64_t accessible_count() const noexcept { return accessible_.count(); }
  bool is_accessible(VertexId v) const noexcept { return accessible_.test(v); }

 private:
  VertexId start_;
  Bitset accessible_;
};

/// Breadth-first search over outgoing directed edges.
AccessPartition accessible_set(const OrientedCube& cube, VertexId start);

/// Pure equilibria that no best-response run from `start` can reach.
std::vector<VertexId> unreachable_equilibria(const OrientedCube& cube, VertexId start);

/// Vertices all of whose incident edges are ties. Each is a pure equilibrium
/// and is inaccessible from every other vertex.
std::vector<VertexId> all_tie_vertices(const OrientedCube& cube);

}  // namespace hypernash

#endif  // HYPERNASH_DYNAMICS_HPP
