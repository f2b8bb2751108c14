#pragma once

#include <cmath>
#include <stdexcept>

#include "fvkcone/fields.hpp"
#include "fvkcone/grid.hpp"
#include "fvkcone/sector.hpp"

namespace fvk {

/// Conical displacement: u = (arg(x) x_perp - x)/2, v = |x|. The in-plane
/// part exactly cancels grad v (x) grad v in the membrane term. The angle
/// branch cut lies outside the sector for alpha < pi/2.
inline void cone_displacement(double x, double y, double& u1, double& u2,
                              double& v) {
  const double r = std::hypot(x, y);
  if (r == 0.0) throw std::invalid_argument("cone displacement undefined at 0");
  const double ang = std::atan2(y, x);
  u1 = 0.5 * (ang * (-y) - x);
  u2 = 0.5 * (ang * x - y);
  v = r;
}

/// Out-of-plane part of the tip-regularized competitor: a paraboloid cap of
/// radius h glued C^1 onto the cone.
inline double competitor_v(double h, double x, double y) {
  const double r = std::hypot(x, y);
  return r >= h ? r : r * r / (2.0 * h) + h / 2.0;
}

inline void competitor_grad_v(double h, double x, double y, double& gx,
                              double& gy) {
  const double r = std::hypot(x, y);
  if (r >= h) {
    gx = x / r;
    gy = y / r;
  } else {
    gx = x / h;
    gy = y / h;
  }
}

struct State {
  VectorField u;
  ScalarField v;
};

inline State sample_cone(const PolarGrid& g) {
  State s;
  s.u = VectorField(g);
  s.v = ScalarField(g);
  for (int i = 0; i < g.rings(); ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const int k = g.index(i, j);
      cone_displacement(g.node_x(i, j), g.node_y(i, j), s.u.x[k], s.u.y[k],
                        s.v.v[k]);
    }
  return s;
}

inline State sample_competitor(const PolarGrid& g, double h) {
  require(h > 0.0 && h < 1.0, "competitor needs h in (0,1)");
  State s = sample_cone(g);
  for (int i = 0; i < g.rings(); ++i)
    for (int j = 0; j < g.n_phi; ++j)
      s.v.v[g.index(i, j)] = competitor_v(h, g.node_x(i, j), g.node_y(i, j));
  return s;
}

namespace detail {

/// Composite Simpson rule; n is forced even.
template <class F>
double simpson(F f, double a, double b, int n = 4096) {
  if (b <= a) return 0.0;
  if (n % 2) ++n;
  const double dx = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * dx) * (i % 2 ? 4.0 : 2.0);
  return s * dx / 3.0;
}

}  // namespace detail

/// Competitor reference energies. The quadrature values are the oracle the
/// discrete assembly is tested against; the commonly quoted closed form
/// 2*alpha*h^2*(log(1/h)+2) is carried alongside, with a flag raised when
/// the quadrature disagrees with its additive constant.
struct CompetitorEnergyOracle {
  double membrane = 0.0;           // radial quadrature of (1-r^2/h^2)^2
  double bending = 0.0;            // radial quadrature of h^2 |hess v_h|^2
  double total = 0.0;
  double reference_bending = 0.0;  // 2 alpha h^2 (log(1/h) + 2)
  double bending_constant = 0.0;   // bending/(2 alpha h^2) - log(1/h)
  bool constant_discrepancy = false;
};

inline CompetitorEnergyOracle competitor_energy_closed_form(double h,
                                                            double alpha,
                                                            double r_first = 0.0) {
  require(h > 0.0 && h < 1.0, "competitor needs h in (0,1)");
  CompetitorEnergyOracle out;
  const double lo = std::min(r_first, h);
  // membrane deficit is x(x)x (1/h^2 - 1/r^2) inside the cap, zero outside
  out.membrane = 2.0 * alpha * detail::simpson(
                                   [&](double r) {
                                     const double t = 1.0 - r * r / (h * h);
                                     return t * t * r;
                                   },
                                   lo, h);
  // |hess|^2 is 2/h^2 inside the cap and 1/r^2 on the cone
  const double inner = detail::simpson(
      [&](double r) { return 2.0 / (h * h) * r; }, lo, h);
  const double outer = detail::simpson([&](double r) { return 1.0 / r; }, h, 1.0);
  out.bending = h * h * 2.0 * alpha * (inner + outer);
  out.total = out.membrane + out.bending;
  out.reference_bending = 2.0 * alpha * h * h * (std::log(1.0 / h) + 2.0);
  out.bending_constant =
      out.bending / (2.0 * alpha * h * h) - std::log(1.0 / h);
  out.constant_discrepancy = std::abs(out.bending_constant - 2.0) > 0.01;
  return out;
}

/// C^2 bump built from quintic smoothstep ramps: 0 outside the support,
/// 1 on the plateau, with closed-form first and second derivatives.
struct BumpProfile {
  double support_lo = 0.0, plateau_lo = 0.0;
  double plateau_hi = 0.0, support_hi = 0.0;
  bool has_left_ramp = true;

  static double smoothstep(double t) {
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  static double smoothstep_d1(double t) {
    const double u = t * (1.0 - t);
    return 30.0 * u * u;
  }
  static double smoothstep_d2(double t) {
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
  }

  double sup_d1() const {
    double b = 1.875 / (support_hi - plateau_hi);
    if (has_left_ramp) b = std::max(b, 1.875 / (plateau_lo - support_lo));
    return b;
  }
  double sup_d2() const {
    const double c = 10.0 / std::sqrt(3.0);
    double w = support_hi - plateau_hi;
    double b = c / (w * w);
    if (has_left_ramp) {
      w = plateau_lo - support_lo;
      b = std::max(b, c / (w * w));
    }
    return b;
  }

  double value(double t) const {
    if (t >= plateau_lo && t <= plateau_hi) return 1.0;
    if (has_left_ramp && t > support_lo && t < plateau_lo)
      return smoothstep((t - support_lo) / (plateau_lo - support_lo));
    if (t > plateau_hi && t < support_hi)
      return smoothstep((support_hi - t) / (support_hi - plateau_hi));
    return (!has_left_ramp && t < plateau_lo) ? 1.0 : 0.0;
  }
  double d1(double t) const {
    if (has_left_ramp && t > support_lo && t < plateau_lo) {
      const double w = plateau_lo - support_lo;
      return smoothstep_d1((t - support_lo) / w) / w;
    }
    if (t > plateau_hi && t < support_hi) {
      const double w = support_hi - plateau_hi;
      return -smoothstep_d1((support_hi - t) / w) / w;
    }
    return 0.0;
  }
  double d2(double t) const {
    if (has_left_ramp && t > support_lo && t < plateau_lo) {
      const double w = plateau_lo - support_lo;
      return smoothstep_d2((t - support_lo) / w) / (w * w);
    }
    if (t > plateau_hi && t < support_hi) {
      const double w = support_hi - plateau_hi;
      return smoothstep_d2((support_hi - t) / w) / (w * w);
    }
    return 0.0;
  }
};

inline BumpProfile make_bump(double support_lo, double plateau_lo,
                             double plateau_hi, double support_hi) {
  require(plateau_lo <= plateau_hi && plateau_hi < support_hi,
          "bump plateau degenerate");
  BumpProfile b;
  b.support_lo = support_lo;
  b.plateau_lo = plateau_lo;
  b.plateau_hi = plateau_hi;
  b.support_hi = support_hi;
  b.has_left_ramp = support_lo < plateau_lo;
  return b;
}

/// Which radial cutoff the membrane test function uses. `paper_ramps` ramps
/// up across (h, h_star) so the function is |x| exactly on the inner reduced
/// sector; `tip_plateau` keeps the function equal to |x| over the whole tip
/// (and drops the angular cutoff) so pairings against tip-supported
/// curvature have a clean closed form.
enum class BumpChoice { paper_ramps, tip_plateau };

struct TestFunctionPhi {
  ScalarField phi;       // on the doubled-sector grid
  SymMatrixField hess;   // closed-form Hessian sampled at the nodes
  double hess_l2 = 0.0;  // discrete L2 norm of the Hessian over 2S
  double log_bound_ref = 0.0;  // log(1/h)^2, the reference growth rate
  BumpProfile eta_r, eta_phi;
  bool angular_cutoff = true;
};

/// Builds Phi = eta_r(r) * eta_phi(phi) * r on the doubled-sector grid with
/// its closed-form Hessian.
inline TestFunctionPhi test_function_phi(const SectorSpec& spec,
                                         const PolarGrid& grid2s,
                                         BumpChoice choice = BumpChoice::paper_ramps) {
  require(grid2s.r_max > 1.5, "test function needs the doubled-sector grid");
  require(spec.h_star < 1.5, "degenerate radial plateau: h_star >= 3/2");
  require(spec.alpha - 2.0 * spec.beta > -spec.alpha + 2.0 * spec.beta,
          "degenerate angular plateau: beta >= alpha/2");

  TestFunctionPhi out;
  out.log_bound_ref = std::pow(std::log(1.0 / spec.h), 2);
  if (choice == BumpChoice::paper_ramps) {
    require(spec.h < spec.h_star, "degenerate radial ramp: h >= h_star");
    out.eta_r = make_bump(spec.h, spec.h_star, 1.5, 2.0);
    out.eta_phi = make_bump(-spec.alpha + spec.beta, -spec.alpha + 2.0 * spec.beta,
                            spec.alpha - 2.0 * spec.beta, spec.alpha - spec.beta);
    out.angular_cutoff = true;
  } else {
    out.eta_r = make_bump(0.0, 0.0, 1.5, 2.0);
    out.eta_phi = make_bump(-4.0 * spec.alpha, -2.0 * spec.alpha,
                            2.0 * spec.alpha, 4.0 * spec.alpha);
    out.angular_cutoff = false;
  }

  const PolarGrid& g = grid2s;
  out.phi = ScalarField(g);
  out.hess = SymMatrixField(g);
  for (int i = 0; i < g.rings(); ++i) {
    const double rho = g.r[i];
    const double e1 = out.eta_r.value(rho);
    const double e1p = out.eta_r.d1(rho);
    const double e1pp = out.eta_r.d2(rho);
    for (int j = 0; j < g.n_phi; ++j) {
      const double th = g.phi[j];
      const double e2 = out.eta_phi.value(th);
      const double e2p = out.eta_phi.d1(th);
      const double e2pp = out.eta_phi.d2(th);
      const int k = g.index(i, j);
      out.phi.v[k] = e1 * e2 * rho;
      // polar-frame Hessian of eta1(r) eta2(phi) r
      const double a = e1pp * e2 * rho + 2.0 * e1p * e2;
      const double b = e1p * e2p;
      const double d = e1 * e2pp / rho + e1p * e2 + e1 * e2 / rho;
      const double c = std::cos(th), s = std::sin(th);
      out.hess.xx[k] = c * c * a - 2.0 * s * c * b + s * s * d;
      out.hess.xy[k] = s * c * a + (c * c - s * s) * b - s * c * d;
      out.hess.yy[k] = s * s * a + 2.0 * s * c * b + c * c * d;
    }
  }
  out.hess_l2 = std::sqrt(integrate(frobenius_sq(out.hess)));
  return out;
}

}  // namespace fvk
