#ifndef HYPERNASH_HYPERCUBE_HPP
#define HYPERNASH_HYPERCUBE_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace hypernash {

/// Action profile of an n-player binary game, encoded as an n-bit integer.
/// Bit i holds the action of player i.
using VertexId = std::uint32_t;

/// Number of players n, capped so that per-vertex and per-edge arrays of the
/// n-cube stay addressable (2^26 vertices by default).
class Dimension {
 public:
  static constexpr int kDefaultCap = 26;

  explicit Dimension(int n, int cap = kDefaultCap);

  int n() const noexcept { return n_; }
  std::uint32_t vertex_count() const noexcept { return std::uint32_t{1} << n_; }
  std::uint64_t edge_count() const noexcept {
    return static_cast<std::uint64_t>(n_) << (n_ - 1);
  }

  friend bool operator==(Dimension a, Dimension b) noexcept { return a.n_ == b.n_; }
  friend bool operator!=(Dimension a, Dimension b) noexcept { return a.n_ != b.n_; }

 private:
  int n_;
};

enum class Parity { Even, Odd };

/// Undirected cube edge in canonical form: `base` is the endpoint whose bit
/// `player` is 0; the other endpoint is flip(base, player).
struct EdgeRef {
  VertexId base;
  int player;
};

/// Neighbor of v along coordinate `player`. Throws if `player` is outside [0, n).
VertexId flip(Dimension dim, VertexId v, int player);

inline int hamming(VertexId u, VertexId v) noexcept { return std::popcount(u ^ v); }

inline Parity parity(VertexId v) noexcept {
  return (std::popcount(v) & 1) ? Parity::Odd : Parity::Even;
}

std::uint64_t edge_count(Dimension dim);

/// All vertices at Hamming distance <= radius from v, in increasing id order.
std::vector<VertexId> ball(Dimension dim, VertexId v, int radius);

/// Drop bit i from v: bits above i shift down one position.
inline std::uint32_t remove_bit(std::uint32_t v, int i) noexcept {
  std::uint32_t low = v & ((std::uint32_t{1} << i) - 1);
  return low | ((v >> (i + 1)) << i);
}

/// Insert a 0 bit at position i of j: inverse of remove_bit.
inline std::uint32_t insert_zero_bit(std::uint32_t j, int i) noexcept {
  std::uint32_t low = j & ((std::uint32_t{1} << i) - 1);
  return low | ((j >> i) << (i + 1));
}

/// Dense edge index: edges of player i occupy the block [i*2^(n-1), (i+1)*2^(n-1)),
/// position remove_bit(base, i) within the block.
inline std::uint64_t edge_index(Dimension dim, EdgeRef e) noexcept {
  return (static_cast<std::uint64_t>(e.player) << (dim.n() - 1)) |
         remove_bit(e.base, e.player);
}

/// Index of the edge incident to v along `player` (v may be either endpoint).
inline std::uint64_t edge_index_at(Dimension dim, VertexId v, int player) noexcept {
  return edge_index(dim, EdgeRef{v & ~(VertexId{1} << player), player});
}

EdgeRef edge_ref(Dimension dim, std::uint64_t index);

/// Flat bitset used for vertex and edge sets.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::uint64_t size() const noexcept { return size_; }
  bool test(std::uint64_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint64_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::uint64_t i, bool value) noexcept { value ? set(i) : reset(i); }

  std::uint64_t count() const noexcept;
  Bitset complement() const;
  std::vector<VertexId> to_vector() const;

  friend bool operator==(const Bitset& a, const Bitset& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hypernash

#endif  // HYPERNASH_HYPERCUBE_HPP
