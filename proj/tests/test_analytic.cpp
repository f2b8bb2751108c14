#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fvkcone/analytic.hpp"
#include "fvkcone/energy.hpp"

using namespace fvk;
using Catch::Approx;

namespace {
const double kAlpha = M_PI / 4.0;

SectorSpec desk_spec(double h) {
  ProofScaleOverrides ov;
  ov.beta = kAlpha / 8.0;
  ov.h_star = 0.25;
  return build_spec(kAlpha, h, ov);
}
}  // namespace

TEST_CASE("cone displacement closed form") {
  double u1, u2, v;
  cone_displacement(1.0, 0.0, u1, u2, v);
  REQUIRE(u1 == Approx(-0.5).margin(1e-15));
  REQUIRE(u2 == Approx(0.0).margin(1e-15));
  REQUIRE(v == Approx(1.0).margin(1e-15));

  cone_displacement(0.0, 0.5, u1, u2, v);
  REQUIRE(u1 == Approx(-M_PI / 8.0).margin(1e-15));
  REQUIRE(u2 == Approx(-0.25).margin(1e-15));
  REQUIRE(v == Approx(0.5).margin(1e-15));

  REQUIRE_THROWS_AS(cone_displacement(0.0, 0.0, u1, u2, v),
                    std::invalid_argument);
}

TEST_CASE("cone membrane deficit vanishes under refinement") {
  SectorSpec s = desk_spec(0.1);
  auto membrane = [&](int n_r, int n_phi) {
    PolarGrid g =
        build_grid(s, n_r, n_phi, Grading::uniform, 1.0, 0.025, 1.0, true);
    FvkEnergy E(s, g);
    State st = sample_cone(g);
    apply_boundary_conditions(st, g);
    return E.energy(st, kMembrane).membrane;
  };
  const double c = membrane(48, 32);
  const double f = membrane(96, 64);
  REQUIRE(f < c);
  REQUIRE(std::log2(c / f) > 1.5);
}

TEST_CASE("competitor branches match at the cap radius") {
  const double h = 0.1;
  // both branches give v = h and slope x/h on |x| = h
  REQUIRE(competitor_v(h, h, 0.0) == Approx(h).margin(1e-15));
  REQUIRE(h * h / (2.0 * h) + h / 2.0 == Approx(h).margin(1e-15));
  double gx, gy;
  competitor_grad_v(h, h * std::cos(0.3), h * std::sin(0.3), gx, gy);
  REQUIRE(gx == Approx(std::cos(0.3)).margin(1e-12));
  REQUIRE(gy == Approx(std::sin(0.3)).margin(1e-12));
  // center of the cap
  REQUIRE(competitor_v(h, 0.0, 0.0) == Approx(h / 2.0).margin(1e-15));
  competitor_grad_v(h, 0.0, 0.0, gx, gy);
  REQUIRE(gx == 0.0);
  REQUIRE(gy == 0.0);
}

TEST_CASE("competitor is discretely convex") {
  SectorSpec s = desk_spec(0.1);
  PolarGrid g = build_grid(s, 96, 48, Grading::uniform, 1.0, 0.025);
  DiffOps ops = build_diff_ops(g);
  State st = sample_competitor(g, s.h);
  ScalarField e = min_eig_hessian(ops, st.v);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      REQUIRE(e.v[g.index(i, j)] >= -1e-8);
}

TEST_CASE("competitor hessian determinant inside the cap") {
  SectorSpec s = desk_spec(0.1);
  PolarGrid g = build_grid(s, 128, 48, Grading::uniform, 1.0, 0.02);
  DiffOps ops = build_diff_ops(g);
  State st = sample_competitor(g, s.h);
  ScalarField d = det_hessian(ops, st.v);
  const double inv_h2 = 1.0 / (s.h * s.h);
  for (int i = 0; i < g.n_r; ++i) {
    if (g.r[i] > 0.6 * s.h) continue;  // stay clear of the kink at r = h
    for (int j = 0; j < g.n_phi; ++j)
      REQUIRE(d.v[g.index(i, j)] == Approx(inv_h2).epsilon(1e-6));
  }
  // rank-one on the cone part, away from the kink
  for (int i = 0; i < g.n_r; ++i) {
    if (g.r[i] < 2.0 * s.h) continue;
    for (int j = 0; j < g.n_phi; ++j)
      REQUIRE(d.v[g.index(i, j)] == Approx(0.0).margin(1e-6));
  }
}

TEST_CASE("competitor reference energies") {
  const double h = 0.1;
  CompetitorEnergyOracle o = competitor_energy_closed_form(h, kAlpha);
  // quadrature oracle vs closed-form values of the same integrals
  REQUIRE(o.membrane == Approx(kAlpha * h * h / 3.0).epsilon(1e-9));
  REQUIRE(o.bending ==
          Approx(2.0 * kAlpha * h * h * (std::log(1.0 / h) + 1.0)).epsilon(1e-8));
  REQUIRE(o.membrane == Approx(2.618e-3).epsilon(1e-3));
  // commonly quoted closed form carries constant +2; the quadrature says +1
  REQUIRE(o.reference_bending == Approx(6.7584e-2).epsilon(1e-4));
  REQUIRE(o.bending_constant == Approx(1.0).margin(1e-6));
  REQUIRE(o.constant_discrepancy);
  // truncated-tip variant drops O((r_first/h)^2)
  CompetitorEnergyOracle t = competitor_energy_closed_form(h, kAlpha, h / 4.0);
  REQUIRE(t.bending ==
          Approx(2.0 * kAlpha * h * h *
                 (std::log(1.0 / h) + 1.0 - 1.0 / 16.0)).epsilon(1e-8));
}

TEST_CASE("discrete competitor energy converges to the oracle") {
  SectorSpec s = desk_spec(0.1);
  const double rf = s.h / 64.0;
  CompetitorEnergyOracle o = competitor_energy_closed_form(s.h, kAlpha, rf);
  auto gap = [&](int n_r, int n_phi) {
    PolarGrid g = build_grid(s, n_r, n_phi, Grading::uniform, 1.0, rf, 1.0, true);
    FvkEnergy E(s, g);
    State st = sample_competitor(g, s.h);
    apply_boundary_conditions(st, g);
    EnergyBreakdown e = E.energy(st);
    return std::pair{std::abs(e.membrane - o.membrane),
                     std::abs(e.bending - o.bending)};
  };
  auto [m1, b1] = gap(96, 24);
  auto [m2, b2] = gap(192, 48);
  auto [m3, b3] = gap(384, 96);
  REQUIRE(std::log2(m1 / m3) / 2.0 > 1.5);
  REQUIRE(std::log2(b1 / b3) / 2.0 > 1.5);
  REQUIRE(m3 < 0.002 * o.membrane);
  REQUIRE(b3 < 0.005 * o.bending);
}

TEST_CASE("membrane test function") {
  SectorSpec s = desk_spec(0.1);
  PolarGrid base = build_grid(s, 96, 64, Grading::uniform, 1.0, 0.02, 1.0, true);
  PolarGrid g2 = extend_grid_double(base);
  TestFunctionPhi tf = test_function_phi(s, g2);

  SECTION("equals |x| on the inner reduced sector, zero outside support") {
    Mask m2 = g2.mask_reduced(s.h_star, 2.0 * s.beta);
    for (int i = 0; i < g2.n_r; ++i)
      for (int j = 0; j < g2.n_phi; ++j) {
        const int k = g2.index(i, j);
        if (m2[k] && g2.r[i] <= 1.0)
          REQUIRE(tf.phi.v[k] == Approx(g2.r[i]).margin(1e-14));
        if (g2.r[i] >= 2.0 || std::abs(g2.phi[j]) >= s.alpha - s.beta)
          REQUIRE(tf.phi.v[k] == 0.0);
        REQUIRE(tf.phi.v[k] >= 0.0);
        // plateau of the radial bump leaves r * eta_phi
        if (g2.r[i] >= s.h_star && g2.r[i] <= 1.5)
          REQUIRE(tf.phi.v[k] ==
                  Approx(g2.r[i] * tf.eta_phi.value(g2.phi[j])).margin(1e-14));
      }
  }
  SECTION("vanishes with its gradient on the outer boundary nodes") {
    DiffOps ops = build_diff_ops(g2);
    VectorField gr = gradient(ops, tf.phi);
    for (int j = 0; j < g2.n_phi; ++j) {
      const int k = g2.index(g2.n_r - 1, j);
      REQUIRE(tf.phi.v[k] == 0.0);
      REQUIRE(std::hypot(gr.x[k], gr.y[k]) < 1e-10);
    }
    for (int i = 0; i < g2.n_r; ++i)
      for (int j : {0, g2.n_phi - 1}) {
        const int k = g2.index(i, j);
        REQUIRE(tf.phi.v[k] == 0.0);
        REQUIRE(std::hypot(gr.x[k], gr.y[k]) < 1e-10);
      }
  }
  SECTION("closed-form hessian matches the discrete one") {
    DiffOps ops = build_diff_ops(g2);
    SymMatrixField Hfd = hessian(ops, tf.phi);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < g2.nodes(); ++k) {
      const double w = g2.weight[k];
      num += w * (std::pow(Hfd.xx[k] - tf.hess.xx[k], 2) +
                  2.0 * std::pow(Hfd.xy[k] - tf.hess.xy[k], 2) +
                  std::pow(Hfd.yy[k] - tf.hess.yy[k], 2));
      den += w * (std::pow(tf.hess.xx[k], 2) + 2.0 * std::pow(tf.hess.xy[k], 2) +
                  std::pow(tf.hess.yy[k], 2));
    }
    REQUIRE(std::sqrt(num / den) < 0.05);
  }
  SECTION("degenerate profiles are rejected") {
    SectorSpec bad = s;
    bad.h_star = 1.6;
    REQUIRE_THROWS_AS(test_function_phi(bad, g2), std::invalid_argument);
    SectorSpec bad2 = s;
    bad2.h_star = bad2.h;  // no room for the radial ramp
    REQUIRE_THROWS_AS(test_function_phi(bad2, g2), std::invalid_argument);
  }
}

TEST_CASE("test-function norm respects the logarithmic growth bound") {
  // module constant frozen against the norm reference (log 1/h)^2
  const double kFrozenK = 3.0;
  for (double loginv : {8.0, 10.0, 12.0}) {
    const double h = std::exp(-loginv);
    SectorSpec s = build_spec(kAlpha, h);  // defaults are admissible here
    PolarGrid base = build_grid(s, 160, 64, Grading::geometric, 1.12,
                                h / 4.0, 1.0, true);
    PolarGrid g2 = extend_grid_double(base);
    TestFunctionPhi tf = test_function_phi(s, g2);
    REQUIRE(std::isfinite(tf.hess_l2));
    REQUIRE(tf.hess_l2 <= kFrozenK * tf.log_bound_ref);
    REQUIRE(tf.hess_l2 * tf.hess_l2 <=
            kFrozenK * kFrozenK * std::pow(std::log(1.0 / h), 4));
  }
}
