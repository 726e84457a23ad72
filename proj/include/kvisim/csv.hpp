#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <string>

#include "kvisim/beams.hpp"
#include "kvisim/kpi.hpp"
#include "kvisim/planner.hpp"

namespace kvisim {

// Shortest round-trip decimal representation; infinities print as the
// literal "inf"/"-inf".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Per-user KPI table: one row per user, header always present.
inline std::string users_csv(std::span<const Point2D> users, std::span<const UserKpi> kpis) {
  std::string out = "user_x,user_y,rate_bps,peb_m,pl_m\n";
  for (std::size_t i = 0; i < users.size(); ++i) {
    out += format_double(users[i].x);
    out += ',';
    out += format_double(users[i].y);
    out += ',';
    out += format_double(kpis[i].rate_bps);
    out += ',';
    out += format_double(kpis[i].peb_m);
    out += ',';
    out += format_double(kpis[i].pl_m);
    out += '\n';
  }
  return out;
}

// One row per sweep cell.
inline std::string sweep_csv(const SweepResult& result) {
  std::string out = "n_bs,tx_power_w,capex_bs,opex_w,inclusive_rate_bps,inclusive_peb_m,inclusive_pl_m\n";
  for (const KviReport& r : result.cells) {
    out += std::to_string(r.n_bs);
    out += ',';
    out += format_double(r.tx_power_w);
    out += ',';
    out += std::to_string(r.n_bs);
    out += ',';
    out += format_double(r.opex_w);
    out += ',';
    out += format_double(r.inclusive_rate_bps);
    out += ',';
    out += format_double(r.inclusive_peb_m);
    out += ',';
    out += format_double(r.inclusive_pl_m);
    out += '\n';
  }
  return out;
}

// Long-format spectrum dump, tx slot outer, rx slot inner.
inline std::string spectrum_csv(const BeamSweepSpectrum& spec) {
  std::string out = "tx_angle_rad,rx_angle_rad,power\n";
  for (std::size_t m = 0; m < spec.tx_slots(); ++m)
    for (std::size_t t = 0; t < spec.rx_slots(); ++t) {
      out += format_double(spec.tx_angles_rad[m]);
      out += ',';
      out += format_double(spec.rx_angles_rad[t]);
      out += ',';
      out += format_double(spec.at(m, t));
      out += '\n';
    }
  return out;
}

}  // namespace kvisim
