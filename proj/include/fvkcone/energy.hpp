#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fvkcone/analytic.hpp"
#include "fvkcone/fields.hpp"
#include "fvkcone/grid.hpp"
#include "fvkcone/operators.hpp"
#include "fvkcone/sector.hpp"

namespace fvk {

struct EnergyBreakdown {
  double membrane = 0.0;
  double bending = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double h = 0.0;
};

/// Term selection for isolated energy/gradient evaluation.
enum TermMask : unsigned {
  kMembrane = 1u,
  kBending = 2u,
  kPenalty = 4u,
  kAllTerms = 7u,
};

/// Pins the clamped values on the outer arc: u and v take the conical values
/// on r = r_max, and the ghost ring of v continues the cone so the radial
/// stencil at the arc sees the clamped slope. Ghost values of u are unused
/// and left at zero. Lateral edges and the tip ring stay free.
inline void apply_boundary_conditions(State& st, const PolarGrid& g) {
  require(g.has_ghost, "boundary conditions need a grid with a ghost ring");
  const int ia = g.arc_ring();
  for (int j = 0; j < g.n_phi; ++j) {
    const int k = g.index(ia, j);
    cone_displacement(g.node_x(ia, j), g.node_y(ia, j), st.u.x[k], st.u.y[k],
                      st.v.v[k]);
    const int kg = g.index(g.ghost_ring(), j);
    st.v.v[kg] = g.r[g.ghost_ring()];
    st.u.x[kg] = 0.0;
    st.u.y[kg] = 0.0;
  }
}

/// Index map between free nodal values (u1, u2, v) and the packed vector of
/// unknowns. Pinned entries (arc ring for all components, ghost ring for v)
/// never enter the vector, so axpy-style updates cannot touch them.
struct DofMap {
  const PolarGrid* grid = nullptr;
  std::vector<int> u1_of_node, u2_of_node, v_of_node;  // node -> dof or -1
  int count = 0;

  static DofMap build(const PolarGrid& g) {
    require(g.has_ghost, "dof map needs the ghost-ring grid");
    DofMap m;
    m.grid = &g;
    const int n = g.nodes();
    m.u1_of_node.assign(n, -1);
    m.u2_of_node.assign(n, -1);
    m.v_of_node.assign(n, -1);
    int next = 0;
    const int ia = g.arc_ring();
    for (int i = 0; i < g.n_r; ++i) {
      if (i == ia) continue;
      for (int j = 0; j < g.n_phi; ++j) m.u1_of_node[g.index(i, j)] = next++;
    }
    for (int i = 0; i < g.n_r; ++i) {
      if (i == ia) continue;
      for (int j = 0; j < g.n_phi; ++j) m.u2_of_node[g.index(i, j)] = next++;
    }
    for (int i = 0; i < g.n_r; ++i) {
      if (i == ia) continue;
      for (int j = 0; j < g.n_phi; ++j) m.v_of_node[g.index(i, j)] = next++;
    }
    m.count = next;
    return m;
  }
};

/// Discrete Foppl-von-Karman energy on the clamped sector, with the exact
/// gradient of the discretization. Membrane and bending use Frobenius norms;
/// the optional penalty integrates squared negative Hessian eigenvalues.
class FvkEnergy {
 public:
  FvkEnergy(const SectorSpec& spec, const PolarGrid& grid,
            double penalty_weight = 0.0)
      : spec_(spec),
        grid_(grid),
        ops_v_(build_diff_ops(grid, GhostPolicy::use_ghost)),
        ops_u_(build_diff_ops(grid, GhostPolicy::ignore_ghost)),
        dofs_(DofMap::build(grid)),
        penalty_weight_(penalty_weight) {}

  const SectorSpec& spec() const { return spec_; }
  const PolarGrid& grid() const { return grid_; }
  const DiffOps& ops_v() const { return ops_v_; }
  const DiffOps& ops_u() const { return ops_u_; }
  const DofMap& dofs() const { return dofs_; }
  double penalty_weight() const { return penalty_weight_; }
  int n_dofs() const { return dofs_.count; }

  State make_state() const {
    State st{VectorField(grid_), ScalarField(grid_)};
    apply_boundary_conditions(st, grid_);
    return st;
  }

  std::vector<double> pack(const State& st) const {
    std::vector<double> x(dofs_.count, 0.0);
    for (int k = 0; k < grid_.nodes(); ++k) {
      if (dofs_.u1_of_node[k] >= 0) x[dofs_.u1_of_node[k]] = st.u.x[k];
      if (dofs_.u2_of_node[k] >= 0) x[dofs_.u2_of_node[k]] = st.u.y[k];
      if (dofs_.v_of_node[k] >= 0) x[dofs_.v_of_node[k]] = st.v.v[k];
    }
    return x;
  }

  void unpack(const std::vector<double>& x, State& st) const {
    for (int k = 0; k < grid_.nodes(); ++k) {
      if (dofs_.u1_of_node[k] >= 0) st.u.x[k] = x[dofs_.u1_of_node[k]];
      if (dofs_.u2_of_node[k] >= 0) st.u.y[k] = x[dofs_.u2_of_node[k]];
      if (dofs_.v_of_node[k] >= 0) st.v.v[k] = x[dofs_.v_of_node[k]];
    }
    apply_boundary_conditions(st, grid_);
  }

  EnergyBreakdown energy(const State& st, unsigned terms = kAllTerms) const {
    return eval(st, terms, nullptr);
  }

  EnergyBreakdown energy_and_gradient(const State& st, std::vector<double>& grad,
                                      unsigned terms = kAllTerms) const {
    grad.assign(dofs_.count, 0.0);
    return eval(st, terms, &grad);
  }

 private:
  EnergyBreakdown eval(const State& st, unsigned terms,
                       std::vector<double>* grad) const {
    require(!has_nan(st.u.x) && !has_nan(st.u.y) && !has_nan(st.v.v),
            "energy: NaN in fields");
    const PolarGrid& g = grid_;
    const int n = g.nodes();
    const double h = spec_.h;

    VectorGradient gu = gradient(ops_u_, st.u);
    VectorField gv = gradient(ops_v_, st.v);
    SymMatrixField H = hessian(ops_v_, st.v);

    // membrane deficit M = grad u + grad u^T + grad v (x) grad v
    std::vector<double> m11(n), m12(n), m22(n);
    for (int k = 0; k < n; ++k) {
      m11[k] = 2.0 * gu.u1x[k] + gv.x[k] * gv.x[k];
      m12[k] = gu.u1y[k] + gu.u2x[k] + gv.x[k] * gv.y[k];
      m22[k] = 2.0 * gu.u2y[k] + gv.y[k] * gv.y[k];
    }

    EnergyBreakdown e;
    e.h = h;
    if (terms & kMembrane) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += g.weight[k] *
             (m11[k] * m11[k] + 2.0 * m12[k] * m12[k] + m22[k] * m22[k]);
      e.membrane = s;
    }
    if (terms & kBending) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += g.weight[k] *
             (H.xx[k] * H.xx[k] + 2.0 * H.xy[k] * H.xy[k] + H.yy[k] * H.yy[k]);
      e.bending = h * h * s;
    }

    std::vector<double> pneg, lxx, lxy, lyy;
    if ((terms & kPenalty) && penalty_weight_ > 0.0) {
      pneg.assign(n, 0.0);
      lxx.assign(n, 0.0);
      lxy.assign(n, 0.0);
      lyy.assign(n, 0.0);
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double mean = 0.5 * (H.xx[k] + H.yy[k]);
        const double dd = 0.5 * (H.xx[k] - H.yy[k]);
        const double R = std::sqrt(dd * dd + H.xy[k] * H.xy[k]);
        const double lmin = mean - R;
        if (lmin < 0.0) {
          pneg[k] = -lmin;
          s += g.weight[k] * lmin * lmin;
          if (R > 1e-300) {
            lxx[k] = 0.5 - dd / (2.0 * R);
            lyy[k] = 0.5 + dd / (2.0 * R);
            lxy[k] = -H.xy[k] / R;
          } else {
            lxx[k] = 0.5;
            lyy[k] = 0.5;
          }
        }
      }
      e.penalty = penalty_weight_ * s;
    }
    e.total = e.membrane + e.bending + e.penalty;

    if (grad) {
      std::vector<double> nodal_u1(n, 0.0), nodal_u2(n, 0.0), nodal_v(n, 0.0);
      std::vector<double> a(n), b(n), tmp(n);
      auto axpyT = [&](const Csr& T, const std::vector<double>& src,
                       std::vector<double>& dst) {
        T.apply(src, tmp);
        for (int k = 0; k < n; ++k) dst[k] += tmp[k];
      };
      if (terms & kMembrane) {
        for (int k = 0; k < n; ++k) a[k] = 4.0 * g.weight[k] * m11[k];
        axpyT(ops_u_.dxT, a, nodal_u1);
        for (int k = 0; k < n; ++k) a[k] = 4.0 * g.weight[k] * m12[k];
        axpyT(ops_u_.dyT, a, nodal_u1);
        axpyT(ops_u_.dxT, a, nodal_u2);
        for (int k = 0; k < n; ++k) a[k] = 4.0 * g.weight[k] * m22[k];
        axpyT(ops_u_.dyT, a, nodal_u2);
        for (int k = 0; k < n; ++k) {
          a[k] = 4.0 * g.weight[k] * (m11[k] * gv.x[k] + m12[k] * gv.y[k]);
          b[k] = 4.0 * g.weight[k] * (m12[k] * gv.x[k] + m22[k] * gv.y[k]);
        }
        axpyT(ops_v_.dxT, a, nodal_v);
        axpyT(ops_v_.dyT, b, nodal_v);
      }
      if (terms & kBending) {
        const double h2 = 2.0 * h * h;
        for (int k = 0; k < n; ++k) a[k] = h2 * g.weight[k] * H.xx[k];
        axpyT(ops_v_.hxxT, a, nodal_v);
        for (int k = 0; k < n; ++k) a[k] = 2.0 * h2 * g.weight[k] * H.xy[k];
        axpyT(ops_v_.hxyT, a, nodal_v);
        for (int k = 0; k < n; ++k) a[k] = h2 * g.weight[k] * H.yy[k];
        axpyT(ops_v_.hyyT, a, nodal_v);
      }
      if ((terms & kPenalty) && penalty_weight_ > 0.0) {
        const double w2 = -2.0 * penalty_weight_;
        for (int k = 0; k < n; ++k)
          a[k] = w2 * g.weight[k] * pneg[k] * lxx[k];
        axpyT(ops_v_.hxxT, a, nodal_v);
        for (int k = 0; k < n; ++k)
          a[k] = w2 * g.weight[k] * pneg[k] * lxy[k];
        axpyT(ops_v_.hxyT, a, nodal_v);
        for (int k = 0; k < n; ++k)
          a[k] = w2 * g.weight[k] * pneg[k] * lyy[k];
        axpyT(ops_v_.hyyT, a, nodal_v);
      }
      for (int k = 0; k < n; ++k) {
        if (dofs_.u1_of_node[k] >= 0) (*grad)[dofs_.u1_of_node[k]] = nodal_u1[k];
        if (dofs_.u2_of_node[k] >= 0) (*grad)[dofs_.u2_of_node[k]] = nodal_u2[k];
        if (dofs_.v_of_node[k] >= 0) (*grad)[dofs_.v_of_node[k]] = nodal_v[k];
      }
    }
    return e;
  }

  const SectorSpec& spec_;
  const PolarGrid& grid_;
  DiffOps ops_v_, ops_u_;
  DofMap dofs_;
  double penalty_weight_;
};

/// Minimum Hessian eigenvalue of v over real nodes; the a-posteriori
/// convexity measure reported with every minimization.
inline double min_convexity_eigenvalue(const DiffOps& ops_v,
                                       const ScalarField& v) {
  ScalarField e = min_eig_hessian(ops_v, v);
  const PolarGrid& g = *ops_v.grid;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) m = std::min(m, e.v[g.index(i, j)]);
  return m;
}

}  // namespace fvk
