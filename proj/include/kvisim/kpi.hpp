#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "kvisim/fim.hpp"
#include "kvisim/parallel.hpp"
#include "kvisim/propagation.hpp"

namespace kvisim {

// Per-user KPI triple. Positioning bounds are +inf when the geometry is
// unobservable (e.g. a single BS).
struct UserKpi {
  double rate_bps = 0.0;
  double peb_m = std::numeric_limits<double>::infinity();
  double pl_m = std::numeric_limits<double>::infinity();
};

inline double shannon_rate_bps(double snr_linear, double bandwidth_hz) {
  if (!(snr_linear >= 0.0)) throw std::invalid_argument("shannon_rate_bps: snr must be >= 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("shannon_rate_bps: bandwidth must be > 0");
  return bandwidth_hz * std::log2(1.0 + snr_linear);
}

// ToA CRLB for a flat-spectrum pilot:
//   var = 1 / (8 pi^2 beta^2 G snr),  beta = B/sqrt(12),  G = B * T_pilot.
// snr = 0 yields +inf variance (a dead link, not an error).
inline double toa_variance_s2(double snr_linear, double bandwidth_hz, double pilot_s) {
  if (!(snr_linear >= 0.0)) throw std::invalid_argument("toa_variance_s2: snr must be >= 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("toa_variance_s2: bandwidth must be > 0");
  if (!(pilot_s > 0.0)) throw std::invalid_argument("toa_variance_s2: pilot duration must be > 0");
  if (snr_linear == 0.0) return std::numeric_limits<double>::infinity();
  const double beta_sq = bandwidth_hz * bandwidth_hz / 12.0;
  const double gain = bandwidth_hz * pilot_s;
  return 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * beta_sq * gain * snr_linear);
}

// Rate is served by the closest BS only; the positioning bounds use the
// Fisher information accumulated over every BS.
inline UserKpi evaluate_user(const Scenario& scn, const Point2D& user,
                             std::span<const Point2D> bs_positions) {
  if (bs_positions.empty()) throw std::invalid_argument("evaluate_user: empty BS list");

  double nearest_m = std::numeric_limits<double>::infinity();
  std::vector<double> variances(bs_positions.size());
  for (std::size_t i = 0; i < bs_positions.size(); ++i) {
    const double d = distance(user, bs_positions[i]);
    nearest_m = std::min(nearest_m, d);
    const LinkBudget lb = link_budget(scn, d);
    variances[i] = toa_variance_s2(lb.snr_linear, scn.bandwidth_hz, scn.pilot_s);
  }

  UserKpi kpi;
  kpi.rate_bps = shannon_rate_bps(link_budget(scn, nearest_m).snr_linear, scn.bandwidth_hz);
  const Fim2D J = position_fim(user, bs_positions, variances, scn.sync_mode);
  kpi.peb_m = peb_m(J);
  kpi.pl_m = protection_level_m(J, 0.90);
  return kpi;
}

// Per-user map over an immutable user sample; embarrassingly parallel, each
// worker writes its own slots.
inline std::vector<UserKpi> evaluate_users(const Scenario& scn, std::span<const Point2D> users,
                                           std::span<const Point2D> bs_positions,
                                           unsigned threads = 1) {
  if (bs_positions.empty()) throw std::invalid_argument("evaluate_users: empty BS list");
  std::vector<UserKpi> kpis(users.size());
  parallel_for(users.size(), threads,
               [&](std::size_t i) { kpis[i] = evaluate_user(scn, users[i], bs_positions); });
  return kpis;
}

}  // namespace kvisim
