#include "hypernash/dynamics.hpp"

#include <stdexcept>

#include "hypernash/rng.hpp"

namespace hypernash {

namespace {
constexpr std::string_view kBrdLabel = "brd";
}

std::uint64_t default_brd_max_steps(Dimension dim) {
  return std::uint64_t{64} * dim.n() * dim.vertex_count();
}

std::vector<int> improving_players(const OrientedCube& cube, VertexId v) {
  std::vector<int> out;
  for (int i = 0; i < cube.dim.n(); ++i) {
    if (oriented_away_from(cube, v, i)) out.push_back(i);
  }
  return out;
}

namespace {

template <typename OnMove>
BrdStats brd_core(const OrientedCube& cube, VertexId start, std::uint64_t seed,
                  std::uint64_t max_steps, OnMove on_move) {
  const RngStream steps_stream = RngStream::from(seed, kBrdLabel);
  const int n = cube.dim.n();
  VertexId v = start;
  std::uint64_t steps = 0;
  int improving[32];
  while (true) {
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (oriented_away_from(cube, v, i)) improving[k++] = i;
    }
    if (k == 0) return BrdStats{start, v, steps, true};
    if (steps == max_steps) return BrdStats{start, v, steps, false};
    const int chosen = improving[steps_stream.below(steps, static_cast<std::uint32_t>(k))];
    v ^= VertexId{1} << chosen;
    ++steps;
    on_move(v);
  }
}

}  // namespace

BrdTrace brd_run(const OrientedCube& cube, VertexId start, std::uint64_t seed,
                 std::uint64_t max_steps) {
  BrdTrace trace;
  trace.start = start;
  trace.path.push_back(start);
  const BrdStats stats = brd_core(cube, start, seed, max_steps,
                                  [&](VertexId v) { trace.path.push_back(v); });
  trace.steps = stats.steps;
  trace.outcome = stats.converged ? BrdTrace::Outcome::Converged
                                  : BrdTrace::Outcome::StepLimit;
  trace.last = stats.last;
  return trace;
}

BrdStats brd_run_stats(const OrientedCube& cube, VertexId start, std::uint64_t seed,
                       std::uint64_t max_steps) {
  return brd_core(cube, start, seed, max_steps, [](VertexId) {});
}

AccessPartition accessible_set(const OrientedCube& cube, VertexId start) {
  const int n = cube.dim.n();
  Bitset reached(cube.dim.vertex_count());
  reached.set(start);
  std::vector<VertexId> frontier{start};
  std::vector<VertexId> next;
  while (!frontier.empty()) {
    next.clear();
    for (VertexId u : frontier) {
      for (int i = 0; i < n; ++i) {
        if (!oriented_away_from(cube, u, i)) continue;
        const VertexId w = u ^ (VertexId{1} << i);
        if (!reached.test(w)) {
          reached.set(w);
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return AccessPartition(start, std::move(reached));
}

std::vector<VertexId> unreachable_equilibria(const OrientedCube& cube, VertexId start) {
  const AccessPartition part = accessible_set(cube, start);
  std::vector<VertexId> out;
  for (VertexId v : enumerate_equilibria(cube).pne) {
    if (!part.is_accessible(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> all_tie_vertices(const OrientedCube& cube) {
  std::vector<VertexId> out;
  const int n = cube.dim.n();
  for (VertexId v = 0; v < cube.dim.vertex_count(); ++v) {
    bool all_tie = true;
    for (int i = 0; i < n; ++i) {
      if (mark_at(cube, v, i) != EdgeMark::Tie) {
        all_tie = false;
        break;
      }
    }
    if (all_tie) out.push_back(v);
  }
  return out;
}

}  // namespace hypernash
