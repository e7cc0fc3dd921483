#include "hypernash/percolation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hypernash/rng.hpp"

namespace hypernash {

namespace {
constexpr std::string_view kBondLabel = "bond";
constexpr std::string_view kCouplingLabel = "coupling-b1";
}  // namespace

BondConfig sample_bond(Dimension dim, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("open probability must be in [0, 1], got " +
                                std::to_string(p));
  }
  const RngStream stream = RngStream::from(seed, kBondLabel);
  BondConfig bond{dim, Bitset(dim.edge_count()), p};
  for (std::uint64_t e = 0; e < dim.edge_count(); ++e) {
    if (stream.uniform01(e) < p) bond.open.set(e);
  }
  return bond;
}

namespace {

struct UnionFind {
  std::vector<VertexId> parent;

  explicit UnionFind(std::uint32_t size) : parent(size) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  VertexId find(VertexId x) {
    VertexId root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      VertexId up = parent[x];
      parent[x] = root;
      x = up;
    }
    return root;
  }

  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins, so representatives are minimal members.
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

ComponentStats components(const BondConfig& bond) {
  const Dimension dim = bond.dim;
  const int n = dim.n();
  UnionFind uf(dim.vertex_count());
  for (std::uint64_t e = 0; e < dim.edge_count(); ++e) {
    if (!bond.open.test(e)) continue;
    const EdgeRef ref = edge_ref(dim, e);
    uf.unite(ref.base, ref.base | (VertexId{1} << ref.player));
  }
  ComponentStats stats;
  stats.component_id.resize(dim.vertex_count());
  std::vector<std::uint32_t> size_of_root(dim.vertex_count(), 0);
  for (VertexId v = 0; v < dim.vertex_count(); ++v) {
    const VertexId root = uf.find(v);
    stats.component_id[v] = root;
    ++size_of_root[root];
  }
  for (std::uint32_t s : size_of_root) {
    if (s > 0) stats.sizes.push_back(s);
  }
  std::sort(stats.sizes.begin(), stats.sizes.end(), std::greater<>());
  stats.largest_size = stats.sizes.front();
  stats.isolated_count = static_cast<std::uint32_t>(
      std::count(stats.sizes.begin(), stats.sizes.end(), 1u));
  return stats;
}

Bitset cluster_of(const BondConfig& bond, VertexId v) {
  const Dimension dim = bond.dim;
  const int n = dim.n();
  Bitset seen(dim.vertex_count());
  seen.set(v);
  std::vector<VertexId> frontier{v};
  std::vector<VertexId> next;
  while (!frontier.empty()) {
    next.clear();
    for (VertexId u : frontier) {
      for (int i = 0; i < n; ++i) {
        if (!bond.open.test(edge_index_at(dim, u, i))) continue;
        const VertexId w = u ^ (VertexId{1} << i);
        if (!seen.test(w)) {
          seen.set(w);
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return seen;
}

BondConfig orientation_subgraph(const OrientedCube& cube) {
  BondConfig bond{cube.dim, Bitset(cube.dim.edge_count()), std::nullopt};
  for (std::uint64_t e = 0; e < cube.marks.size(); ++e) {
    if (cube.marks[e] != EdgeMark::Tie) bond.open.set(e);
  }
  return bond;
}

BondConfig coupling_base_bond(Dimension dim, double beta, std::uint64_t seed) {
  BondConfig bond =
      sample_bond(dim, beta, RngStream::from(seed, kCouplingLabel).key());
  bond.p = std::nullopt;
  return bond;
}

CouplingOutput coupled_percolation(const OrientedCube& cube, VertexId start,
                                   std::uint64_t seed) {
  if (!cube.alpha.has_value()) {
    throw std::domain_error("coupled_percolation requires a cube with known alpha");
  }
  const Dimension dim = cube.dim;
  const int n = dim.n();
  const double beta = TieParameter(*cube.alpha).beta();
  BondConfig bond = coupling_base_bond(dim, beta, seed);

  Bitset explored(dim.vertex_count());
  explored.set(start);
  std::vector<VertexId> batch{start};
  std::vector<VertexId> discovered;
  std::uint32_t rounds = 0;
  const std::uint64_t round_cap = dim.vertex_count();

  // Each round rewrites exactly the edges between the current explored set and
  // its unexplored neighbors. Rewrites are idempotent (the new state is the
  // fixed orientation event of that edge), so it is enough to process each
  // explored vertex once, after marking the whole incoming batch: edges inside
  // a batch were never between explored and unexplored, and keep their B1 state.
  while (!batch.empty()) {
    if (++rounds > round_cap) {
      throw std::logic_error("coupled exploration failed to stabilize");
    }
    discovered.clear();
    for (VertexId u : batch) {
      for (int i = 0; i < n; ++i) {
        const VertexId w = u ^ (VertexId{1} << i);
        if (explored.test(w)) continue;
        const bool outward = oriented_away_from(cube, u, i);
        bond.open.assign(edge_index_at(dim, u, i), outward);
        if (outward) discovered.push_back(w);
      }
    }
    batch.clear();
    for (VertexId w : discovered) {
      if (!explored.test(w)) {
        explored.set(w);
        batch.push_back(w);
      }
    }
  }
  return CouplingOutput{std::move(bond), std::move(explored), rounds};
}

}  // namespace hypernash
