#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kvisim/geometry.hpp"
#include "kvisim/rng.hpp"

namespace kvisim {

// Malformed or invalid configuration input; the message names the offending key.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Clock model behind the positioning Fisher analysis: toa assumes BS-user
// synchronization, tdoa treats a common user clock bias as a nuisance
// parameter that is marginalized out of the information matrix.
enum class SyncMode { toa, tdoa };

inline const char* to_string(SyncMode m) { return m == SyncMode::toa ? "toa" : "tdoa"; }

// Immutable simulation configuration. Construct, validate(), then share
// read-only; every operation takes it by const reference.
struct Scenario {
  double area_side_m = 2000.0;    // square deployment area side
  int n_bs = 100;                 // base stations on a regular grid
  double carrier_hz = 5.9e9;
  double bandwidth_hz = 80.0e6;
  double tx_power_w = 0.1;        // per-BS pilot transmit power
  double pilot_s = 25.0e-6;       // pilot duration per BS
  double noise_figure_db = 0.0;
  double antenna_gain_db = 0.0;   // applied at both link ends
  double noise_temp_k = 290.0;
  int n_users = 1000;
  std::uint64_t seed = 1;
  double percentile = 0.95;       // inclusiveness percentile in (0, 1]
  SyncMode sync_mode = SyncMode::toa;
  double min_dist_m = 1.0;        // near-field distance clamp

  void validate() const {
    if (!(std::isfinite(area_side_m) && area_side_m > 0.0))
      throw config_error("area_side_m must be > 0");
    if (n_bs < 1) throw config_error("n_bs must be a positive integer");
    if (!(std::isfinite(carrier_hz) && carrier_hz > 0.0))
      throw config_error("carrier_hz must be > 0");
    if (!(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0))
      throw config_error("bandwidth_hz must be > 0");
    if (!(std::isfinite(tx_power_w) && tx_power_w > 0.0))
      throw config_error("tx_power_w must be > 0");
    if (!(std::isfinite(pilot_s) && pilot_s > 0.0))
      throw config_error("pilot_s must be > 0");
    if (!(std::isfinite(noise_figure_db) && noise_figure_db >= 0.0))
      throw config_error("noise_figure_db must be >= 0");
    if (!std::isfinite(antenna_gain_db))
      throw config_error("antenna_gain_db must be finite");
    if (!(std::isfinite(noise_temp_k) && noise_temp_k > 0.0))
      throw config_error("noise_temp_k must be > 0");
    if (n_users < 1) throw config_error("n_users must be a positive integer");
    if (!(std::isfinite(percentile) && percentile > 0.0 && percentile <= 1.0))
      throw config_error("percentile must lie in (0, 1]");
    if (!(std::isfinite(min_dist_m) && min_dist_m > 0.0))
      throw config_error("min_dist_m must be > 0");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline double parse_config_double(std::string_view key, std::string_view v) {
  double out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw config_error("non-numeric value for key '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

inline int parse_config_int(std::string_view key, std::string_view v) {
  long long out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw config_error("non-numeric value for key '" + std::string(key) +
                       "' (expected integer): '" + std::string(v) + "'");
  if (out < INT32_MIN || out > INT32_MAX)
    throw config_error("value out of range for key '" + std::string(key) + "'");
  return static_cast<int>(out);
}

inline std::uint64_t parse_config_u64(std::string_view key, std::string_view v) {
  std::uint64_t out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw config_error("non-numeric value for key '" + std::string(key) +
                       "' (expected unsigned integer): '" + std::string(v) + "'");
  return out;
}

}  // namespace detail

// Parses a flat `key = value` configuration document. `#` starts a comment,
// blank lines are ignored, later assignments win, missing keys keep defaults.
// Throws config_error on unknown keys, non-numeric values, or violated
// invariants, naming the key in the message.
inline Scenario load_scenario(std::string_view text) {
  Scenario scn;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                         std::string(line) + "'");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(line_no) + ": missing key before '='");
    if (value.empty())
      throw config_error("empty value for key '" + std::string(key) + "'");

    if (key == "area_side_m") scn.area_side_m = detail::parse_config_double(key, value);
    else if (key == "n_bs") scn.n_bs = detail::parse_config_int(key, value);
    else if (key == "carrier_hz") scn.carrier_hz = detail::parse_config_double(key, value);
    else if (key == "bandwidth_hz") scn.bandwidth_hz = detail::parse_config_double(key, value);
    else if (key == "tx_power_w") scn.tx_power_w = detail::parse_config_double(key, value);
    else if (key == "pilot_s") scn.pilot_s = detail::parse_config_double(key, value);
    else if (key == "noise_figure_db") scn.noise_figure_db = detail::parse_config_double(key, value);
    else if (key == "antenna_gain_db") scn.antenna_gain_db = detail::parse_config_double(key, value);
    else if (key == "noise_temp_k") scn.noise_temp_k = detail::parse_config_double(key, value);
    else if (key == "n_users") scn.n_users = detail::parse_config_int(key, value);
    else if (key == "seed") scn.seed = detail::parse_config_u64(key, value);
    else if (key == "percentile") scn.percentile = detail::parse_config_double(key, value);
    else if (key == "min_dist_m") scn.min_dist_m = detail::parse_config_double(key, value);
    else if (key == "sync_mode") {
      if (value == "toa") scn.sync_mode = SyncMode::toa;
      else if (value == "tdoa") scn.sync_mode = SyncMode::tdoa;
      else throw config_error("sync_mode must be 'toa' or 'tdoa', got '" + std::string(value) + "'");
    } else {
      throw config_error("unknown key '" + std::string(key) + "'");
    }
  }
  scn.validate();
  return scn;
}

// Regular BS grid: k = ceil(sqrt(n_bs)) cells per side, BSs at cell centers
// ((i+0.5)s, (j+0.5)s) in row-major order (x varies fastest), truncated to
// the first n_bs points. Perfect squares give the full symmetric grid.
inline std::vector<Point2D> place_bs_grid(double area_side_m, int n_bs) {
  if (n_bs < 1) throw std::invalid_argument("place_bs_grid: n_bs must be >= 1");
  if (!(area_side_m > 0.0)) throw std::invalid_argument("place_bs_grid: area_side_m must be > 0");
  int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_bs))));
  while (k * k < n_bs) ++k;
  while (k > 1 && (k - 1) * (k - 1) >= n_bs) --k;
  const double s = area_side_m / k;
  std::vector<Point2D> out;
  out.reserve(static_cast<std::size_t>(n_bs));
  for (int j = 0; j < k && static_cast<int>(out.size()) < n_bs; ++j)
    for (int i = 0; i < k && static_cast<int>(out.size()) < n_bs; ++i)
      out.push_back({(i + 0.5) * s, (j + 0.5) * s});
  return out;
}

// n_users i.i.d. uniform points on the area square. Point i is a pure
// function of (seed, i) via the counter-based generator, so the sample is
// reproducible under any evaluation order or parallel split.
inline std::vector<Point2D> sample_users(const Scenario& scn) {
  scn.validate();
  std::vector<Point2D> users(static_cast<std::size_t>(scn.n_users));
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto ctr = static_cast<std::uint64_t>(i);
    users[i].x = counter_rng_unit(scn.seed, 2 * ctr) * scn.area_side_m;
    users[i].y = counter_rng_unit(scn.seed, 2 * ctr + 1) * scn.area_side_m;
  }
  return users;
}

}  // namespace kvisim
