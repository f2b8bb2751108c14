#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fvkcone/sector.hpp"

namespace fvk {

enum class Grading { uniform, geometric };

inline std::string to_string(Grading g) {
  return g == Grading::uniform ? "uniform" : "geometric";
}

inline Grading grading_from_string(const std::string& s) {
  if (s == "uniform") return Grading::uniform;
  if (s == "geometric") return Grading::geometric;
  throw std::invalid_argument("unknown grading '" + s + "'");
}

/// Node mask over a grid; one byte per node, ghost nodes always excluded.
using Mask = std::vector<std::uint8_t>;

/// Structured tensor-product polar grid on [r_first, r_max] x [-alpha, alpha].
/// Radial nodes may be uniform or geometrically graded (finer near the tip);
/// angular nodes are uniform and include both lateral edges. An optional
/// ghost ring sits one radial spacing outside r_max; it carries zero
/// quadrature weight and exists so clamped stencils at the outer arc can be
/// centered.
///
/// Node storage is r-major: index(i,j) = i*n_phi + j.
struct PolarGrid {
  double alpha = 0.0;
  double r_first = 0.0;
  double r_max = 1.0;
  int n_r = 0;    // real rings, r[n_r-1] == r_max
  int n_phi = 0;  // angular columns, phi[0] == -alpha, phi[n_phi-1] == alpha
  bool has_ghost = false;
  Grading grading = Grading::uniform;
  double grading_ratio = 1.0;

  std::vector<double> r;       // size rings() = n_r + (has_ghost ? 1 : 0)
  std::vector<double> phi;     // size n_phi
  std::vector<double> weight;  // per node; exact polar cell areas, ghost = 0

  int rings() const { return n_r + (has_ghost ? 1 : 0); }
  int nodes() const { return rings() * n_phi; }
  int index(int i, int j) const { return i * n_phi + j; }
  int arc_ring() const { return n_r - 1; }
  int ghost_ring() const { return has_ghost ? n_r : -1; }
  bool is_real_ring(int i) const { return i < n_r; }
  double dphi() const { return phi[1] - phi[0]; }

  double node_x(int i, int j) const { return r[i] * std::cos(phi[j]); }
  double node_y(int i, int j) const { return r[i] * std::sin(phi[j]); }

  /// Mask of all real nodes.
  Mask mask_all() const {
    Mask m(nodes(), 0);
    for (int i = 0; i < n_r; ++i)
      for (int j = 0; j < n_phi; ++j) m[index(i, j)] = 1;
    return m;
  }

  /// Nodes with r >= r_min and |phi| < alpha - phi_margin (strict).
  Mask mask_reduced(double r_min, double phi_margin) const {
    Mask m(nodes(), 0);
    const double tol = 1e-12;
    for (int i = 0; i < n_r; ++i) {
      if (r[i] < r_min - tol) continue;
      for (int j = 0; j < n_phi; ++j) {
        if (std::abs(phi[j]) < alpha - phi_margin - tol) m[index(i, j)] = 1;
      }
    }
    return m;
  }

  /// Quadrature measure of a masked region (sum of node weights).
  double mask_area(const Mask& m) const {
    double a = 0.0;
    for (int k = 0; k < nodes(); ++k)
      if (m[k]) a += weight[k];
    return a;
  }

  int mask_count(const Mask& m) const {
    int c = 0;
    for (auto b : m) c += b;
    return c;
  }

  /// Largest ring index with r[i] <= value (clamped to real rings).
  int ring_at_or_below(double value) const {
    int i = 0;
    while (i + 1 < n_r && r[i + 1] <= value) ++i;
    return i;
  }
};

namespace detail {

inline std::vector<double> radial_nodes(double r_first, double r_max, int n_r,
                                        Grading grading, double ratio) {
  std::vector<double> r(n_r);
  if (grading == Grading::uniform || ratio == 1.0) {
    const double dr = (r_max - r_first) / (n_r - 1);
    for (int i = 0; i < n_r; ++i) r[i] = r_first + i * dr;
  } else {
    // spacing grows by `ratio` outward; endpoints hit exactly
    const double q = ratio;
    const double d0 =
        (r_max - r_first) * (q - 1.0) / (std::pow(q, n_r - 1) - 1.0);
    double d = d0, x = r_first;
    r[0] = r_first;
    for (int i = 1; i < n_r; ++i) {
      x += d;
      d *= q;
      r[i] = x;
    }
  }
  r[n_r - 1] = r_max;
  return r;
}

}  // namespace detail

/// Builds the polar grid. Cell weights are exact polar areas of the node
/// cells (midpoint tiling of [r_first,r_max] x [-alpha,alpha]), so constants
/// integrate to the truncated sector area exactly.
inline PolarGrid build_grid(const SectorSpec& spec, int n_r, int n_phi,
                            Grading grading = Grading::uniform,
                            double grading_ratio = 1.05,
                            double r_first = -1.0, double r_max = 1.0,
                            bool ghost = false) {
  require(n_r >= 8 && n_phi >= 8, "grid needs n_r, n_phi >= 8");
  if (r_first < 0.0) r_first = spec.h / 4.0;
  require(r_first > 0.0 && r_first <= spec.h / 4.0,
          "r_first must be in (0, h/4]");
  require(r_max > r_first, "r_max must exceed r_first");
  if (grading == Grading::geometric)
    require(grading_ratio > 1.0, "geometric grading needs ratio > 1");

  PolarGrid g;
  g.alpha = spec.alpha;
  g.r_first = r_first;
  g.r_max = r_max;
  g.n_r = n_r;
  g.n_phi = n_phi;
  g.has_ghost = ghost;
  g.grading = grading;
  g.grading_ratio = grading == Grading::geometric ? grading_ratio : 1.0;

  g.r = detail::radial_nodes(r_first, r_max, n_r, grading, grading_ratio);
  for (int i = 1; i < n_r; ++i)
    require(g.r[i] > g.r[i - 1], "radial nodes must be strictly increasing");
  if (ghost) g.r.push_back(r_max + (g.r[n_r - 1] - g.r[n_r - 2]));

  g.phi.resize(n_phi);
  const double dphi = 2.0 * spec.alpha / (n_phi - 1);
  for (int j = 0; j < n_phi; ++j) g.phi[j] = -spec.alpha + j * dphi;
  g.phi[n_phi - 1] = spec.alpha;

  // node cell = [radial midpoints] x [angular midpoints], clipped to the
  // domain; exact integral of the Jacobian r over the cell
  g.weight.assign(g.nodes(), 0.0);
  for (int i = 0; i < n_r; ++i) {
    const double lo = (i == 0) ? r_first : 0.5 * (g.r[i - 1] + g.r[i]);
    const double hi = (i == n_r - 1) ? r_max : 0.5 * (g.r[i] + g.r[i + 1]);
    const double wr = 0.5 * (hi * hi - lo * lo);
    for (int j = 0; j < n_phi; ++j) {
      const double plo = (j == 0) ? -spec.alpha : 0.5 * (g.phi[j - 1] + g.phi[j]);
      const double phi_hi =
          (j == n_phi - 1) ? spec.alpha : 0.5 * (g.phi[j] + g.phi[j + 1]);
      g.weight[g.index(i, j)] = wr * (phi_hi - plo);
    }
  }
  return g;
}

/// Grid covering the doubled sector (radius 2*r_max, same angles), built by
/// appending near-uniform rings beyond the source grid's real rings. Node
/// indices of the source's real rings are preserved, so fields transfer
/// ring-for-ring. The result has no ghost ring.
inline PolarGrid extend_grid_double(const PolarGrid& src) {
  PolarGrid g;
  g.alpha = src.alpha;
  g.r_first = src.r_first;
  g.r_max = 2.0 * src.r_max;
  g.n_phi = src.n_phi;
  g.has_ghost = false;
  g.grading = src.grading;
  g.grading_ratio = src.grading_ratio;
  g.phi = src.phi;

  g.r.assign(src.r.begin(), src.r.begin() + src.n_r);
  const double d_last = src.r[src.n_r - 1] - src.r[src.n_r - 2];
  const int n_ext = std::max(4, (int)std::lround(src.r_max / d_last));
  const double d_ext = src.r_max / n_ext;
  for (int k = 1; k <= n_ext; ++k) g.r.push_back(src.r_max + k * d_ext);
  g.r.back() = g.r_max;
  g.n_r = (int)g.r.size();

  g.weight.assign(g.nodes(), 0.0);
  for (int i = 0; i < g.n_r; ++i) {
    const double lo = (i == 0) ? g.r_first : 0.5 * (g.r[i - 1] + g.r[i]);
    const double hi = (i == g.n_r - 1) ? g.r_max : 0.5 * (g.r[i] + g.r[i + 1]);
    const double wr = 0.5 * (hi * hi - lo * lo);
    for (int j = 0; j < g.n_phi; ++j) {
      const double plo = (j == 0) ? -g.alpha : 0.5 * (g.phi[j - 1] + g.phi[j]);
      const double phi_hi =
          (j == g.n_phi - 1) ? g.alpha : 0.5 * (g.phi[j] + g.phi[j + 1]);
      g.weight[g.index(i, j)] = wr * (phi_hi - plo);
    }
  }
  return g;
}

}  // namespace fvk
