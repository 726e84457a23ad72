#pragma once

#include <cmath>
#include <stdexcept>

#include "kvisim/constants.hpp"
#include "kvisim/geometry.hpp"

namespace kvisim {

// End of the bistatic pair that measured the target bearing.
enum class BearingAnchor { tx, rx };

// One bistatic observation of a passive target: a bearing from the anchor
// and the bistatic range sum |target-tx| + |target-rx| = c * bistatic delay.
struct BistaticMeasurement {
  Point2D tx_pos;
  Point2D rx_pos;
  double bearing_rad = 0.0;
  double range_sum_m = 0.0;
  BearingAnchor anchor = BearingAnchor::tx;
};

// Bistatic range resolution c/B.
inline double range_resolution_m(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("range_resolution_m: bandwidth must be > 0");
  return kSpeedOfLight / bandwidth_hz;
}

// Closed-form ray-ellipse intersection. With u the unit bearing vector from
// the anchor focus, b the vector to the other focus, and R the range sum:
//   r = (R^2 - |b|^2) / (2 (R - u.b)),  target = anchor + r * u.
// R > |b| guarantees r > 0.
inline Point2D locate_target(const BistaticMeasurement& meas) {
  if (!std::isfinite(meas.bearing_rad))
    throw std::invalid_argument("locate_target: bearing must be finite");
  const Point2D& from = (meas.anchor == BearingAnchor::tx) ? meas.tx_pos : meas.rx_pos;
  const Point2D& other = (meas.anchor == BearingAnchor::tx) ? meas.rx_pos : meas.tx_pos;

  const double baseline = distance(meas.tx_pos, meas.rx_pos);
  const double range_sum = meas.range_sum_m;
  if (!(range_sum > baseline))
    throw std::domain_error("locate_target: degenerate ellipse (range sum <= tx-rx baseline)");

  const double ux = std::cos(meas.bearing_rad);
  const double uy = std::sin(meas.bearing_rad);
  const double bx = other.x - from.x;
  const double by = other.y - from.y;
  const double u_dot_b = ux * bx + uy * by;
  const double denom = range_sum - u_dot_b;
  if (denom < 1e-12 * range_sum)
    throw std::domain_error("locate_target: tangent/ill-conditioned bearing");

  // factored form of R^2 - |b|^2: the difference of the near-equal terms is
  // computed before squaring, which keeps thin ellipses accurate
  const double r = (range_sum - baseline) * (range_sum + baseline) / (2.0 * denom);
  return {from.x + r * ux, from.y + r * uy};
}

// locate_target after rounding the range sum to the nearest multiple of the
// delay-bin resolution.
inline Point2D quantized_locate(const BistaticMeasurement& meas, double resolution_m) {
  if (!(resolution_m > 0.0))
    throw std::invalid_argument("quantized_locate: resolution must be > 0");
  BistaticMeasurement q = meas;
  q.range_sum_m = std::round(meas.range_sum_m / resolution_m) * resolution_m;
  return locate_target(q);
}

}  // namespace kvisim
