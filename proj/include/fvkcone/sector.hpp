#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace fvk {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Optional overrides for the reduced-sector scales. When a field is unset
/// the capped default is used; defaults that fall outside the admissible
/// range are rejected rather than silently clamped.
struct ProofScaleOverrides {
  std::optional<double> beta;
  std::optional<double> h_star;
};

/// Problem parameters for the clamped sector: half-angle alpha, thickness h,
/// and the two reduced-sector scales beta (angular) and h_star (radial).
///
/// Defaults: beta = 1/log(1/h), h_star = min(h * log(1/h)^6, 1/4).
/// The beta default is accepted only while it stays below alpha/4; for
/// larger h the caller must override beta (and usually h_star) explicitly.
struct SectorSpec {
  double alpha = 0.0;
  double h = 0.0;
  double beta = 0.0;
  double h_star = 0.0;

  /// Angular extent of the inner reduced sector: phi in (-alpha+beta, alpha-beta).
  double reduced1_phi_margin() const { return beta; }
  /// Angular extent of the innermost reduced sector: phi in (-alpha+2beta, alpha-2beta).
  double reduced2_phi_margin() const { return 2.0 * beta; }
};

inline double default_beta(double h) { return 1.0 / std::log(1.0 / h); }

inline double default_h_star(double h) {
  const double L = std::log(1.0 / h);
  return std::min(h * L * L * L * L * L * L, 0.25);
}

inline SectorSpec build_spec(double alpha, double h,
                             const ProofScaleOverrides& ov = {}) {
  require(alpha > 0.0 && alpha < M_PI / 2.0,
          "alpha must be in (0, pi/2), got " + std::to_string(alpha));
  require(h > 0.0 && h < 1.0, "h must be in (0,1), got " + std::to_string(h));

  SectorSpec s;
  s.alpha = alpha;
  s.h = h;

  if (ov.beta) {
    s.beta = *ov.beta;
    require(s.beta > 0.0 && s.beta < alpha / 2.0,
            "beta override must be in (0, alpha/2): reduced sectors would be "
            "empty at beta=" + std::to_string(s.beta));
  } else {
    s.beta = default_beta(h);
    require(s.beta < alpha / 2.0,
            "default beta=1/log(1/h)=" + std::to_string(s.beta) +
            " >= alpha/2: h too large for reduced-sector diagnostics; "
            "override beta");
    require(s.beta <= alpha / 4.0,
            "default beta=1/log(1/h)=" + std::to_string(s.beta) +
            " exceeds alpha/4: h too large for reduced-sector diagnostics; "
            "override beta (and h_star) explicitly");
  }

  if (ov.h_star) {
    s.h_star = *ov.h_star;
    require(s.h_star < 1.0, "h_star override must be < 1, got " +
                                std::to_string(s.h_star));
    require(s.h_star >= h, "h_star override must be >= h");
  } else {
    s.h_star = default_h_star(h);
    require(s.h_star >= h,
            "default h_star cap 1/4 is below h=" + std::to_string(h) +
            "; override h_star");
  }
  return s;
}

}  // namespace fvk
