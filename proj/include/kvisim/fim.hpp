#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "kvisim/constants.hpp"
#include "kvisim/geometry.hpp"
#include "kvisim/scenario.hpp"

namespace kvisim {

// 2x2 symmetric positional Fisher information matrix, entries in 1/m^2.
// For tdoa scenarios this is already the equivalent FIM with the clock bias
// marginalized out.
struct Fim2D {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }
  double eig_min() const {
    const double mid = 0.5 * (xx + yy);
    const double h = 0.5 * (xx - yy);
    return mid - std::sqrt(h * h + xy * xy);
  }
  double eig_max() const {
    const double mid = 0.5 * (xx + yy);
    const double h = 0.5 * (xx - yy);
    return mid + std::sqrt(h * h + xy * xy);
  }
};

inline bool is_psd(const Fim2D& J, double tol = 1e-9) {
  return J.eig_min() >= -tol * std::abs(J.trace());
}

// A FIM whose condition number exceeds this is treated as singular; its
// inverse would be numeric garbage, so bounds degrade to +inf instead.
inline constexpr double kFimConditionLimit = 1e12;

inline bool fim_invertible(const Fim2D& J) {
  if (!(J.det() > 0.0)) return false;
  const double lmin = J.eig_min();
  if (!(lmin > 0.0)) return false;
  return J.eig_max() <= kFimConditionLimit * lmin;
}

namespace detail {

// Delay gradient u_i/c from BS i to the user. A coincident BS and user
// leaves the direction undefined; a fixed axis keeps the result
// deterministic.
inline void delay_gradient(const Point2D& user, const Point2D& bs, double& gx, double& gy) {
  const double dx = user.x - bs.x;
  const double dy = user.y - bs.y;
  const double r = std::sqrt(dx * dx + dy * dy);
  const double ux = (r > 1e-12) ? dx / r : 1.0;
  const double uy = (r > 1e-12) ? dy / r : 0.0;
  gx = ux / kSpeedOfLight;
  gy = uy / kSpeedOfLight;
}

}  // namespace detail

// Positional FIM from per-BS ToA variances. With u_i the unit vector from
// BS i to the user and g_i = u_i/c:
//   toa:  J = sum_i g_i g_i^T / var_i
//   tdoa: the clock-bias-augmented FIM over h_i = [g_i; 1] is reduced by the
//         Schur complement of the bias block, accumulated in the
//         algebraically identical weighted-centered form
//         sum_i w_i (g_i - gbar)(g_i - gbar)^T, which keeps the result
//         positive semidefinite under rounding even for rank-deficient
//         geometries.
// Infinite-variance links contribute zero information.
inline Fim2D position_fim(const Point2D& user, std::span<const Point2D> bs_positions,
                          std::span<const double> toa_variances_s2, SyncMode sync_mode) {
  if (bs_positions.empty()) throw std::invalid_argument("position_fim: empty BS list");
  if (bs_positions.size() != toa_variances_s2.size())
    throw std::invalid_argument("position_fim: BS and variance counts differ");

  for (const double var : toa_variances_s2)
    if (!std::isinf(var) && !(var > 0.0))
      throw std::invalid_argument("position_fim: variances must be positive");

  double axx = 0.0, axy = 0.0, ayy = 0.0;

  if (sync_mode == SyncMode::toa) {
    for (std::size_t i = 0; i < bs_positions.size(); ++i) {
      const double var = toa_variances_s2[i];
      if (std::isinf(var)) continue;
      double gx, gy;
      detail::delay_gradient(user, bs_positions[i], gx, gy);
      const double w = 1.0 / var;
      axx += w * gx * gx;
      axy += w * gx * gy;
      ayy += w * gy * gy;
    }
    return {axx, axy, ayy};
  }

  double wsum = 0.0, gbx = 0.0, gby = 0.0;
  for (std::size_t i = 0; i < bs_positions.size(); ++i) {
    const double var = toa_variances_s2[i];
    if (std::isinf(var)) continue;
    double gx, gy;
    detail::delay_gradient(user, bs_positions[i], gx, gy);
    const double w = 1.0 / var;
    wsum += w;
    gbx += w * gx;
    gby += w * gy;
  }
  if (!(wsum > 0.0)) return {0.0, 0.0, 0.0};
  gbx /= wsum;
  gby /= wsum;
  for (std::size_t i = 0; i < bs_positions.size(); ++i) {
    const double var = toa_variances_s2[i];
    if (std::isinf(var)) continue;
    double gx, gy;
    detail::delay_gradient(user, bs_positions[i], gx, gy);
    const double w = 1.0 / var;
    axx += w * (gx - gbx) * (gx - gbx);
    axy += w * (gx - gbx) * (gy - gby);
    ayy += w * (gy - gby) * (gy - gby);
  }
  return {axx, axy, ayy};
}

// Position error bound sqrt(trace(J^-1)); +inf for singular geometry.
inline double peb_m(const Fim2D& J) {
  if (!fim_invertible(J)) return std::numeric_limits<double>::infinity();
  return std::sqrt(J.trace() / J.det());
}

// Protection level: radius of the smallest circle containing the Gaussian
// confidence ellipse, sqrt(q * lambda_max(J^-1)) with q = -2*ln(1-confidence).
// Containment probability is therefore >= confidence.
inline double protection_level_m(const Fim2D& J, double confidence = 0.90) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("protection_level_m: confidence must lie in (0, 1)");
  if (!fim_invertible(J)) return std::numeric_limits<double>::infinity();
  const double q = -2.0 * std::log1p(-confidence);
  return std::sqrt(q / J.eig_min());
}

}  // namespace kvisim
