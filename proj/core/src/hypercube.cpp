#include "hypernash/hypercube.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hypernash {

Dimension::Dimension(int n, int cap) : n_(n) {
  if (cap < 1 || cap > 30) {
    throw std::invalid_argument("dimension cap must be in [1, 30], got " +
                                std::to_string(cap));
  }
  if (n < 1 || n > cap) {
    throw std::out_of_range("dimension must be in [1, " + std::to_string(cap) +
                            "], got " + std::to_string(n));
  }
}

VertexId flip(Dimension dim, VertexId v, int player) {
  if (player < 0 || player >= dim.n()) {
    throw std::out_of_range("player index " + std::to_string(player) +
                            " outside [0, " + std::to_string(dim.n()) + ")");
  }
  return v ^ (VertexId{1} << player);
}

std::uint64_t edge_count(Dimension dim) { return dim.edge_count(); }

std::vector<VertexId> ball(Dimension dim, VertexId v, int radius) {
  if (radius < 0) {
    throw std::invalid_argument("ball radius must be nonnegative");
  }
  const int n = dim.n();
  std::vector<VertexId> out;
  out.push_back(v);
  const std::uint32_t full = (radius >= n) ? 0 : (std::uint32_t{1} << n);
  if (radius >= n) {
    out.resize(dim.vertex_count());
    for (std::uint32_t u = 0; u < dim.vertex_count(); ++u) out[u] = u;
    return out;
  }
  // Enumerate XOR masks of weight 1..radius (Gosper's hack per weight).
  for (int k = 1; k <= radius; ++k) {
    std::uint32_t mask = (std::uint32_t{1} << k) - 1;
    while (mask < full) {
      out.push_back(v ^ mask);
      std::uint32_t c = mask & -mask;
      std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EdgeRef edge_ref(Dimension dim, std::uint64_t index) {
  if (index >= dim.edge_count()) {
    throw std::out_of_range("edge index " + std::to_string(index) +
                            " outside [0, " + std::to_string(dim.edge_count()) + ")");
  }
  const int player = static_cast<int>(index >> (dim.n() - 1));
  const std::uint32_t compact =
      static_cast<std::uint32_t>(index & ((std::uint64_t{1} << (dim.n() - 1)) - 1));
  return EdgeRef{insert_zero_bit(compact, player), player};
}

std::uint64_t Bitset::count() const noexcept {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

Bitset Bitset::complement() const {
  Bitset out(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  if (size_ & 63) {
    out.words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }
  return out;
}

std::vector<VertexId> Bitset::to_vector() const {
  std::vector<VertexId> out;
  out.reserve(count());
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(static_cast<VertexId>(wi * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

}  // namespace hypernash
