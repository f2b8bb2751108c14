#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "fvkcone/grid.hpp"
#include "fvkcone/sparse.hpp"

namespace fvk {

/// How radial stencils treat the ghost ring. Fields that own clamped ghost
/// values (the out-of-plane deflection) use centered stencils across the
/// outer arc; fields without meaningful ghost data (in-plane displacement)
/// get one-sided stencils at the arc and zero rows on the ghost ring.
enum class GhostPolicy { use_ghost, ignore_ghost };

namespace detail {

/// Finite-difference weights reproducing the `order`-th derivative exactly
/// on polynomials of degree < offsets.size(); small Vandermonde solve.
inline std::vector<double> stencil_weights(const std::vector<double>& offsets,
                                           int order) {
  const int m = (int)offsets.size();
  std::vector<long double> a(m * m), b(m, 0.0L);
  long double fact = 1.0L;
  for (int p = 0; p < m; ++p) {
    if (p > 0) fact *= p;
    for (int k = 0; k < m; ++k)
      a[p * m + k] = std::pow((long double)offsets[k], (long double)p) / fact;
  }
  b[order] = 1.0L;
  // Gaussian elimination with partial pivoting
  for (int cpi = 0; cpi < m; ++cpi) {
    int piv = cpi;
    for (int i = cpi + 1; i < m; ++i)
      if (std::abs((double)a[i * m + cpi]) > std::abs((double)a[piv * m + cpi]))
        piv = i;
    if (piv != cpi) {
      for (int k = 0; k < m; ++k) std::swap(a[cpi * m + k], a[piv * m + k]);
      std::swap(b[cpi], b[piv]);
    }
    for (int i = cpi + 1; i < m; ++i) {
      const long double f = a[i * m + cpi] / a[cpi * m + cpi];
      for (int k = cpi; k < m; ++k) a[i * m + k] -= f * a[cpi * m + k];
      b[i] -= f * b[cpi];
    }
  }
  std::vector<double> w(m);
  for (int i = m - 1; i >= 0; --i) {
    long double s = b[i];
    for (int k = i + 1; k < m; ++k) s -= a[i * m + k] * (long double)w[k];
    w[i] = (double)(s / a[i * m + i]);
  }
  return w;
}

struct Stencil1D {
  int first = 0;               // index of the first participating node
  std::vector<double> w;       // weights
};

/// Per-node 1D stencils along a coordinate line with nodes `x`:
/// central 3-point interior, one-sided 3-point (first derivative) or
/// 4-point (second derivative) at the ends, all second-order accurate
/// on uniform spacing.
inline std::vector<Stencil1D> line_stencils(const std::vector<double>& x,
                                            int order) {
  const int n = (int)x.size();
  std::vector<Stencil1D> s(n);
  const int width = (order == 1) ? 3 : 3;
  const int edge_width = (order == 1) ? 3 : 4;
  for (int i = 0; i < n; ++i) {
    int first;
    int m;
    if (i == 0) {
      first = 0;
      m = edge_width;
    } else if (i == n - 1) {
      first = n - edge_width;
      m = edge_width;
    } else {
      first = i - 1;
      m = width;
    }
    std::vector<double> off(m);
    for (int k = 0; k < m; ++k) off[k] = x[first + k] - x[i];
    s[i].first = first;
    s[i].w = stencil_weights(off, order);
  }
  return s;
}

}  // namespace detail

/// Discrete Cartesian derivative operators on a polar grid, assembled from
/// polar stencils via the chain rule. Transposes are precomputed; they are
/// the exact adjoints used when differentiating the discrete energy.
struct DiffOps {
  const PolarGrid* grid = nullptr;
  GhostPolicy policy = GhostPolicy::use_ghost;
  Csr dx, dy, hxx, hxy, hyy;
  Csr dxT, dyT, hxxT, hxyT, hyyT;
};

inline DiffOps build_diff_ops(const PolarGrid& g,
                              GhostPolicy policy = GhostPolicy::use_ghost) {
  const int rings = g.rings();
  const int np = g.n_phi;
  const int n = g.nodes();

  // radial lines: restrict to real rings when the ghost is ignored
  const bool ghost_active = g.has_ghost && policy == GhostPolicy::use_ghost;
  const int r_count = ghost_active ? rings : g.n_r;
  std::vector<double> rline(g.r.begin(), g.r.begin() + r_count);
  const auto d1r = detail::line_stencils(rline, 1);
  const auto d2r = detail::line_stencils(rline, 2);
  const auto d1p = detail::line_stencils(g.phi, 1);
  const auto d2p = detail::line_stencils(g.phi, 2);

  CsrBuilder bdx(n, n), bdy(n, n), bxx(n, n), bxy(n, n), byy(n, n);

  for (int i = 0; i < rings; ++i) {
    const bool dead = i >= r_count;  // ghost ring under ignore_ghost
    for (int j = 0; j < np; ++j) {
      if (dead) {
        bdx.finish_row();
        bdy.finish_row();
        bxx.finish_row();
        bxy.finish_row();
        byy.finish_row();
        continue;
      }
      const double r = g.r[i];
      const double c = std::cos(g.phi[j]);
      const double s = std::sin(g.phi[j]);

      // first derivatives: grad = f_r e_r + f_phi/r e_phi
      for (std::size_t k = 0; k < d1r[i].w.size(); ++k) {
        const int colr = g.index(d1r[i].first + (int)k, j);
        bdx.add(colr, c * d1r[i].w[k]);
        bdy.add(colr, s * d1r[i].w[k]);
      }
      for (std::size_t l = 0; l < d1p[j].w.size(); ++l) {
        const int colp = g.index(i, d1p[j].first + (int)l);
        bdx.add(colp, -(s / r) * d1p[j].w[l]);
        bdy.add(colp, (c / r) * d1p[j].w[l]);
      }
      bdx.finish_row();
      bdy.finish_row();

      // Hessian in the orthonormal polar frame:
      //   a = f_rr,  b = f_rphi/r - f_phi/r^2,  d = f_phiphi/r^2 + f_r/r
      // rotated to Cartesian components
      const double fa_xx = c * c, fb_xx = -2.0 * s * c, fd_xx = s * s;
      const double fa_xy = s * c, fb_xy = c * c - s * s, fd_xy = -s * c;
      const double fa_yy = s * s, fb_yy = 2.0 * s * c, fd_yy = c * c;

      auto add_abc = [&](CsrBuilder& bb, double fa, double fb, double fd) {
        for (std::size_t k = 0; k < d2r[i].w.size(); ++k)
          bb.add(g.index(d2r[i].first + (int)k, j), fa * d2r[i].w[k]);
        for (std::size_t k = 0; k < d1r[i].w.size(); ++k) {
          const int ri = d1r[i].first + (int)k;
          for (std::size_t l = 0; l < d1p[j].w.size(); ++l)
            bb.add(g.index(ri, d1p[j].first + (int)l),
                   fb * d1r[i].w[k] * d1p[j].w[l] / r);
          bb.add(g.index(ri, j), fd * d1r[i].w[k] / r);
        }
        for (std::size_t l = 0; l < d1p[j].w.size(); ++l)
          bb.add(g.index(i, d1p[j].first + (int)l),
                 -fb * d1p[j].w[l] / (r * r));
        for (std::size_t l = 0; l < d2p[j].w.size(); ++l)
          bb.add(g.index(i, d2p[j].first + (int)l),
                 fd * d2p[j].w[l] / (r * r));
      };
      add_abc(bxx, fa_xx, fb_xx, fd_xx);
      add_abc(bxy, fa_xy, fb_xy, fd_xy);
      add_abc(byy, fa_yy, fb_yy, fd_yy);
      bxx.finish_row();
      bxy.finish_row();
      byy.finish_row();
    }
  }

  DiffOps ops;
  ops.grid = &g;
  ops.policy = policy;
  ops.dx = bdx.take();
  ops.dy = bdy.take();
  ops.hxx = bxx.take();
  ops.hxy = bxy.take();
  ops.hyy = byy.take();
  ops.dxT = transpose(ops.dx);
  ops.dyT = transpose(ops.dy);
  ops.hxxT = transpose(ops.hxx);
  ops.hxyT = transpose(ops.hxy);
  ops.hyyT = transpose(ops.hyy);
  return ops;
}

}  // namespace fvk
