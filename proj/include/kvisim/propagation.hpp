#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kvisim/constants.hpp"
#include "kvisim/scenario.hpp"

namespace kvisim {

// LoS link budget for one BS-user link.
struct LinkBudget {
  double distance_m = 0.0;   // after the min_dist_m clamp
  double fspl_db = 0.0;
  double rx_power_w = 0.0;
  double noise_power_w = 0.0;
  double snr_linear = 0.0;   // rx_power_w / noise_power_w
};

// Free-space path loss, 20*log10(4*pi*d*f/c).
inline double fspl_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("fspl_db: distance must be > 0");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("fspl_db: carrier must be > 0");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_hz / kSpeedOfLight);
}

// Thermal noise power k_B * T * B scaled by the receiver noise figure.
inline double noise_power_w(double bandwidth_hz, double noise_temp_k, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("noise_power_w: bandwidth must be > 0");
  if (!(noise_temp_k > 0.0)) throw std::invalid_argument("noise_power_w: temperature must be > 0");
  return kBoltzmann * noise_temp_k * bandwidth_hz * std::pow(10.0, noise_figure_db / 10.0);
}

// Full link budget at a given distance; distances below the scenario clamp
// are evaluated at min_dist_m. Antenna gain is counted once per link end.
inline LinkBudget link_budget(const Scenario& scn, double distance_m) {
  LinkBudget lb;
  lb.distance_m = std::max(distance_m, scn.min_dist_m);
  lb.fspl_db = fspl_db(lb.distance_m, scn.carrier_hz);
  lb.rx_power_w = scn.tx_power_w * std::pow(10.0, (2.0 * scn.antenna_gain_db - lb.fspl_db) / 10.0);
  lb.noise_power_w = noise_power_w(scn.bandwidth_hz, scn.noise_temp_k, scn.noise_figure_db);
  lb.snr_linear = lb.rx_power_w / lb.noise_power_w;
  return lb;
}

}  // namespace kvisim
