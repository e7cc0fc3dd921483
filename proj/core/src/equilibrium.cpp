#include "hypernash/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace hypernash {

bool is_pne(const OrientedCube& cube, VertexId v) {
  for (int i = 0; i < cube.dim.n(); ++i) {
    if (oriented_away_from(cube, v, i)) return false;
  }
  return true;
}

bool is_spne(const OrientedCube& cube, VertexId v) {
  for (int i = 0; i < cube.dim.n(); ++i) {
    if (!oriented_toward(cube, v, i)) return false;
  }
  return true;
}

EquilibriumReport enumerate_equilibria(const OrientedCube& cube) {
  EquilibriumReport report;
  const std::uint32_t vertices = cube.dim.vertex_count();
  const int n = cube.dim.n();
  for (VertexId v = 0; v < vertices; ++v) {
    bool pne = true;
    bool spne = true;
    for (int i = 0; i < n; ++i) {
      const EdgeMark m = mark_at(cube, v, i);
      const bool bit = (v >> i) & 1;
      const EdgeMark away = bit ? EdgeMark::TowardZero : EdgeMark::TowardOne;
      if (m == away) {
        pne = spne = false;
        break;
      }
      if (m == EdgeMark::Tie) spne = false;
    }
    if (pne) {
      report.pne.push_back(v);
      if (spne) report.spne.push_back(v);
    }
  }
  return report;
}

ClosedFormMoments pne_moments(Dimension dim, TieParameter alpha) {
  const int n = dim.n();
  const double q = 1.0 - alpha.beta();  // per-edge no-escape probability, (1+alpha)/2
  const double qn = std::pow(q, n);
  const double two_n = std::ldexp(1.0, n);
  const double b_n = qn * (1.0 - qn);
  const double neighbor_cov =
      alpha.alpha * std::pow(q, 2 * n - 2) - std::pow(q, 2 * n);
  return ClosedFormMoments{two_n * qn, b_n, two_n * b_n + two_n * n * neighbor_cov};
}

double mean_pne(Dimension dim, TieParameter alpha) {
  return std::pow(1.0 + alpha.alpha, dim.n());
}

double var_pne(Dimension dim, TieParameter alpha) {
  return pne_moments(dim, alpha).tau_sq;
}

double mean_spne(Dimension dim, TieParameter alpha) {
  return std::pow(1.0 - alpha.alpha, dim.n());
}

double clt_statistic(double count, Dimension dim, TieParameter alpha) {
  if (!(alpha.alpha > 0.0)) {
    throw std::domain_error("clt_statistic requires a positive tie probability");
  }
  const double scale = std::pow(1.0 + alpha.alpha, dim.n() / 2.0);
  return (count - mean_pne(dim, alpha)) / scale;
}

int brd_threshold(TieParameter alpha) {
  if (!(alpha.alpha > 0.0 && alpha.alpha < 1.0)) {
    throw std::domain_error("brd_threshold requires 0 < alpha < 1");
  }
  return static_cast<int>(std::floor(-1.0 / std::log((1.0 + alpha.alpha) / 2.0)));
}

}  // namespace hypernash
