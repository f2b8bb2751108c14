#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fvkcone/grid.hpp"
#include "fvkcone/operators.hpp"

namespace fvk {

/// Nodal scalar field attached to a grid.
struct ScalarField {
  const PolarGrid* grid = nullptr;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const PolarGrid& g) : grid(&g), v(g.nodes(), 0.0) {}

  double& operator()(int i, int j) { return v[grid->index(i, j)]; }
  double operator()(int i, int j) const { return v[grid->index(i, j)]; }
};

/// Nodal vector field, Cartesian components.
struct VectorField {
  const PolarGrid* grid = nullptr;
  std::vector<double> x, y;

  VectorField() = default;
  explicit VectorField(const PolarGrid& g)
      : grid(&g), x(g.nodes(), 0.0), y(g.nodes(), 0.0) {}
};

/// Nodal symmetric 2x2 matrix field, Cartesian components.
struct SymMatrixField {
  const PolarGrid* grid = nullptr;
  std::vector<double> xx, xy, yy;

  SymMatrixField() = default;
  explicit SymMatrixField(const PolarGrid& g)
      : grid(&g), xx(g.nodes(), 0.0), xy(g.nodes(), 0.0), yy(g.nodes(), 0.0) {}
};

/// Samples f(x1, x2) at every node (including a ghost ring if present).
inline ScalarField sample_scalar(const PolarGrid& g,
                                 const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.rings(); ++i)
    for (int j = 0; j < g.n_phi; ++j)
      out.v[g.index(i, j)] = f(g.node_x(i, j), g.node_y(i, j));
  return out;
}

inline VectorField sample_vector(
    const PolarGrid& g,
    const std::function<void(double, double, double&, double&)>& f) {
  VectorField out(g);
  for (int i = 0; i < g.rings(); ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const int k = g.index(i, j);
      f(g.node_x(i, j), g.node_y(i, j), out.x[k], out.y[k]);
    }
  return out;
}

inline VectorField gradient(const DiffOps& ops, const ScalarField& f) {
  VectorField out(*ops.grid);
  ops.dx.apply(f.v, out.x);
  ops.dy.apply(f.v, out.y);
  return out;
}

inline SymMatrixField hessian(const DiffOps& ops, const ScalarField& f) {
  SymMatrixField out(*ops.grid);
  ops.hxx.apply(f.v, out.xx);
  ops.hxy.apply(f.v, out.xy);
  ops.hyy.apply(f.v, out.yy);
  return out;
}

/// 2x2 gradient of a vector field: (grad u)_{kl} = d_l u_k, returned as
/// four scalar arrays u1x, u1y, u2x, u2y packed in a small struct.
struct VectorGradient {
  std::vector<double> u1x, u1y, u2x, u2y;
};

inline VectorGradient gradient(const DiffOps& ops, const VectorField& u) {
  VectorGradient out;
  ops.dx.apply(u.x, out.u1x);
  ops.dy.apply(u.x, out.u1y);
  ops.dx.apply(u.y, out.u2x);
  ops.dy.apply(u.y, out.u2y);
  return out;
}

struct IntegrateResult {
  double value = 0.0;
  bool empty_mask = false;
};

/// Weighted nodal sum over all real nodes.
inline double integrate(const ScalarField& f) {
  const PolarGrid& g = *f.grid;
  double s = 0.0;
  for (int k = 0; k < g.nodes(); ++k) s += f.v[k] * g.weight[k];
  return s;
}

/// Weighted nodal sum over a masked region; flags an empty mask.
inline IntegrateResult integrate(const ScalarField& f, const Mask& mask) {
  const PolarGrid& g = *f.grid;
  require((int)mask.size() == g.nodes(), "mask size mismatch");
  IntegrateResult out;
  int count = 0;
  for (int k = 0; k < g.nodes(); ++k) {
    if (!mask[k]) continue;
    out.value += f.v[k] * g.weight[k];
    ++count;
  }
  out.empty_mask = (count == 0);
  return out;
}

inline ScalarField det(const SymMatrixField& m) {
  ScalarField out(*m.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = m.xx[k] * m.yy[k] - m.xy[k] * m.xy[k];
  return out;
}

inline ScalarField min_eigenvalue(const SymMatrixField& m) {
  ScalarField out(*m.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k) {
    const double mean = 0.5 * (m.xx[k] + m.yy[k]);
    const double d = 0.5 * (m.xx[k] - m.yy[k]);
    out.v[k] = mean - std::sqrt(d * d + m.xy[k] * m.xy[k]);
  }
  return out;
}

/// Cofactor of a symmetric 2x2: swaps the diagonal, negates the off-diagonal.
inline SymMatrixField cofactor(const SymMatrixField& m) {
  SymMatrixField out(*m.grid);
  out.xx = m.yy;
  out.yy = m.xx;
  for (std::size_t k = 0; k < out.xy.size(); ++k) out.xy[k] = -m.xy[k];
  return out;
}

inline ScalarField det_hessian(const DiffOps& ops, const ScalarField& v) {
  return det(hessian(ops, v));
}

inline ScalarField min_eig_hessian(const DiffOps& ops, const ScalarField& v) {
  return min_eigenvalue(hessian(ops, v));
}

/// Squared Frobenius norm field of a symmetric matrix field.
inline ScalarField frobenius_sq(const SymMatrixField& m) {
  ScalarField out(*m.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = m.xx[k] * m.xx[k] + 2.0 * m.xy[k] * m.xy[k] + m.yy[k] * m.yy[k];
  return out;
}

inline bool has_nan(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return true;
  return false;
}

}  // namespace fvk
