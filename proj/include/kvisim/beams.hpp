#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kvisim {

using CVec = std::vector<std::complex<double>>;

struct Ula {
  int n_elements = 16;
  double spacing_wl = 0.5;  // element spacing in wavelengths

  void validate() const {
    if (n_elements < 2) throw std::invalid_argument("Ula: n_elements must be >= 2");
    if (!(spacing_wl > 0.0)) throw std::invalid_argument("Ula: spacing must be > 0");
  }
};

// Sweep codebook of beam angles, strictly increasing.
struct Codebook {
  std::vector<double> angles_rad;

  // Cell-center beam angles over [-pi/2, pi/2]. A half-wavelength ULA
  // aliases the two endfire directions (their sines differ by the grating
  // period 2), so the grid stays strictly inside the interval.
  static Codebook uniform(int n_beams = 64) {
    if (n_beams < 2) throw std::invalid_argument("Codebook: need at least 2 beams");
    Codebook cb;
    cb.angles_rad.resize(static_cast<std::size_t>(n_beams));
    const double lo = -std::numbers::pi / 2.0;
    const double cell = std::numbers::pi / n_beams;
    for (int i = 0; i < n_beams; ++i)
      cb.angles_rad[static_cast<std::size_t>(i)] = lo + (i + 0.5) * cell;
    return cb;
  }

  void validate() const {
    if (angles_rad.size() < 2) throw std::invalid_argument("Codebook: need at least 2 beams");
    for (std::size_t i = 1; i < angles_rad.size(); ++i)
      if (!(angles_rad[i] > angles_rad[i - 1]))
        throw std::invalid_argument("Codebook: angles must be strictly increasing");
  }

  double span_min() const { return angles_rad.front(); }
  double span_max() const { return angles_rad.back(); }
  bool in_span(double theta) const { return theta >= span_min() && theta <= span_max(); }
  double step_rad() const { return angles_rad[1] - angles_rad[0]; }

  std::size_t nearest_index(double theta) const {
    std::size_t best = 0;
    double best_d = std::abs(angles_rad[0] - theta);
    for (std::size_t i = 1; i < angles_rad.size(); ++i) {
      const double d = std::abs(angles_rad[i] - theta);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }
};

// ULA steering vector, element n = exp(i*2*pi*spacing*n*sin(theta)).
inline CVec steering(const Ula& ula, double theta_rad) {
  ula.validate();
  if (!(std::abs(theta_rad) <= std::numbers::pi / 2.0 + 1e-12))
    throw std::domain_error("steering: angle outside [-pi/2, pi/2]");
  CVec a(static_cast<std::size_t>(ula.n_elements));
  const double phase_step = 2.0 * std::numbers::pi * ula.spacing_wl * std::sin(theta_rad);
  for (std::size_t n = 0; n < a.size(); ++n)
    a[n] = std::polar(1.0, phase_step * static_cast<double>(n));
  return a;
}

// Unit-power matched (conjugate) beamformer pointed at theta. Under the
// a^H(.) response convention used here the weight vector is a(theta)/sqrt(N),
// so |a(theta)^H f| attains the full coherent gain sqrt(N).
inline CVec conj_beamformer(const Ula& ula, double theta_rad) {
  CVec f = steering(ula, theta_rad);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
  for (auto& z : f) z *= scale;
  return f;
}

// a^H b
inline std::complex<double> inner(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Received-power profile over (tx beam slot, rx beam slot), row-major with
// the rx slot varying fastest.
struct BeamSweepSpectrum {
  std::vector<double> tx_angles_rad;
  std::vector<double> rx_angles_rad;
  std::vector<double> power;

  std::size_t tx_slots() const { return tx_angles_rad.size(); }
  std::size_t rx_slots() const { return rx_angles_rad.size(); }
  double at(std::size_t m, std::size_t t) const { return power[m * rx_slots() + t]; }
};

inline std::vector<CVec> honest_precoders(const Ula& ula_tx, const Codebook& cb_tx) {
  cb_tx.validate();
  std::vector<CVec> f;
  f.reserve(cb_tx.angles_rad.size());
  for (const double theta : cb_tx.angles_rad) f.push_back(conj_beamformer(ula_tx, theta));
  return f;
}

// Core sweep assembly over the rank-1 unit-gain LoS channel a_rx a_tx^H:
//   power(m, t) = |w_t^H a_rx(aoa)|^2 * |a_tx(aod)^H f_m|^2 * |g_t|^2
// with w_t the codebook conjugate combiners and g_t optional per-rx-slot
// complex gains (all-ones when absent).
inline BeamSweepSpectrum sweep_spectrum(const Ula& ula_tx, const Ula& ula_rx,
                                        const std::vector<CVec>& precoders,
                                        const Codebook& cb_tx, const Codebook& cb_rx,
                                        double aod_rad, double aoa_rad,
                                        const CVec& rx_slot_gains = {}) {
  cb_tx.validate();
  cb_rx.validate();
  if (precoders.size() != cb_tx.angles_rad.size())
    throw std::invalid_argument("sweep_spectrum: one precoder per tx slot required");
  if (!rx_slot_gains.empty() && rx_slot_gains.size() != cb_rx.angles_rad.size())
    throw std::invalid_argument("sweep_spectrum: one gain per rx slot required");

  const CVec a_tx = steering(ula_tx, aod_rad);
  const CVec a_rx = steering(ula_rx, aoa_rad);

  std::vector<double> tx_factor(precoders.size());
  for (std::size_t m = 0; m < precoders.size(); ++m)
    tx_factor[m] = std::norm(inner(a_tx, precoders[m]));

  std::vector<double> rx_factor(cb_rx.angles_rad.size());
  for (std::size_t t = 0; t < rx_factor.size(); ++t) {
    const CVec w = conj_beamformer(ula_rx, cb_rx.angles_rad[t]);
    rx_factor[t] = std::norm(inner(w, a_rx));
    if (!rx_slot_gains.empty()) rx_factor[t] *= std::norm(rx_slot_gains[t]);
  }

  BeamSweepSpectrum spec{cb_tx.angles_rad, cb_rx.angles_rad, {}};
  spec.power.resize(tx_factor.size() * rx_factor.size());
  for (std::size_t m = 0; m < tx_factor.size(); ++m)
    for (std::size_t t = 0; t < rx_factor.size(); ++t)
      spec.power[m * rx_factor.size() + t] = tx_factor[m] * rx_factor[t];
  return spec;
}

// Honest beam sweep: both ends step through their codebooks on the true
// LoS geometry.
inline BeamSweepSpectrum honest_sweep(const Ula& ula_tx, const Ula& ula_rx,
                                      const Codebook& cb_tx, const Codebook& cb_rx,
                                      double true_aod_rad, double true_aoa_rad) {
  cb_tx.validate();
  cb_rx.validate();
  if (!cb_tx.in_span(true_aod_rad))
    throw std::domain_error("honest_sweep: AoD outside codebook span");
  if (!cb_rx.in_span(true_aoa_rad))
    throw std::domain_error("honest_sweep: AoA outside codebook span");
  return sweep_spectrum(ula_tx, ula_rx, honest_precoders(ula_tx, cb_tx), cb_tx, cb_rx,
                        true_aod_rad, true_aoa_rad);
}

// Limited-knowledge AoD spoof: slot m transmits the honest precoder of angle
// theta_m - shift, rotating the whole sweep labeling. Needs no knowledge of
// the rx combiner schedule. Per-slot angles are clamped to the codebook span;
// the spoofed peak angle itself must lie in span.
inline std::vector<CVec> spoof_aod_precoders(const Ula& ula_tx, const Codebook& cb_tx,
                                             double true_aod_rad, double shift_rad) {
  cb_tx.validate();
  if (!cb_tx.in_span(true_aod_rad + shift_rad))
    throw std::domain_error("spoof_aod_precoders: shifted AoD outside codebook span");
  std::vector<CVec> f;
  f.reserve(cb_tx.angles_rad.size());
  for (const double theta : cb_tx.angles_rad) {
    const double target = std::clamp(theta - shift_rad, cb_tx.span_min(), cb_tx.span_max());
    f.push_back(conj_beamformer(ula_tx, target));
  }
  return f;
}

// Complete-knowledge AoA spoof: per-rx-slot complex gains
//   c_t = (w_t^H a(spoof)) / (w_t^H a(true)),
// denominator magnitude floored at clip_epsilon * n_elements, then
// normalized to max |c_t| = 1 (unit power budget). The received profile is
// proportional to |w_t^H a(spoof)|^2 in every unclipped slot. Throws when
// the spoofed profile peak falls in a clipped slot.
inline CVec spoof_aoa_gains(const Ula& ula_rx, const Codebook& cb_rx, double true_aoa_rad,
                            double spoof_aoa_rad, double clip_epsilon = 1e-3) {
  cb_rx.validate();
  if (!cb_rx.in_span(spoof_aoa_rad))
    throw std::domain_error("spoof_aoa_gains: spoofed AoA outside codebook span");
  if (!(clip_epsilon > 0.0))
    throw std::invalid_argument("spoof_aoa_gains: clip_epsilon must be > 0");

  const std::size_t n_slots = cb_rx.angles_rad.size();
  // Identity attack: exact unit gains, leaving the honest sweep untouched.
  if (spoof_aoa_rad == true_aoa_rad) return CVec(n_slots, {1.0, 0.0});

  const CVec a_true = steering(ula_rx, true_aoa_rad);
  const CVec a_spoof = steering(ula_rx, spoof_aoa_rad);
  const double floor = clip_epsilon * static_cast<double>(ula_rx.n_elements);

  CVec gains(n_slots);
  std::vector<bool> clipped(n_slots, false);
  std::size_t peak_slot = 0;
  double peak_val = -1.0;
  for (std::size_t t = 0; t < n_slots; ++t) {
    const CVec w = conj_beamformer(ula_rx, cb_rx.angles_rad[t]);
    const std::complex<double> num = inner(w, a_spoof);
    std::complex<double> den = inner(w, a_true);
    const double den_mag = std::abs(den);
    if (den_mag < floor) {
      clipped[t] = true;
      den = (den_mag > 0.0) ? den * (floor / den_mag) : std::complex<double>{floor, 0.0};
    }
    gains[t] = num / den;
    if (std::norm(num) > peak_val) {
      peak_val = std::norm(num);
      peak_slot = t;
    }
  }
  if (clipped[peak_slot])
    throw std::runtime_error("spoof_aoa_gains: attack infeasible at this epsilon "
                             "(spoofed peak falls in a clipped slot)");

  double max_mag = 0.0;
  for (const auto& c : gains) max_mag = std::max(max_mag, std::abs(c));
  for (auto& c : gains) c /= max_mag;
  return gains;
}

// Codebook angles at the global power argmax; ties break toward the lowest
// (tx, rx) index pair.
inline std::pair<double, double> estimate_angles(const BeamSweepSpectrum& spec) {
  if (spec.power.empty()) throw std::invalid_argument("estimate_angles: empty spectrum");
  std::size_t best = 0;
  for (std::size_t i = 1; i < spec.power.size(); ++i)
    if (spec.power[i] > spec.power[best]) best = i;
  const std::size_t m = best / spec.rx_slots();
  const std::size_t t = best % spec.rx_slots();
  return {spec.tx_angles_rad[m], spec.rx_angles_rad[t]};
}

enum class AttackKnowledge { honest, limited, complete };

inline const char* to_string(AttackKnowledge k) {
  switch (k) {
    case AttackKnowledge::honest: return "honest";
    case AttackKnowledge::limited: return "limited";
    default: return "complete";
  }
}

struct AttackConfig {
  AttackKnowledge knowledge = AttackKnowledge::honest;
  double shift_rad = std::numbers::pi / 4.0;
  double true_aod_rad = 0.0;
  double true_aoa_rad = 0.0;
  double clip_epsilon = 1e-3;

  void validate() const {
    if (!(std::abs(shift_rad) < std::numbers::pi / 2.0))
      throw std::invalid_argument("AttackConfig: shift must lie in (-pi/2, pi/2)");
    if (!(clip_epsilon > 0.0))
      throw std::invalid_argument("AttackConfig: clip_epsilon must be > 0");
  }
};

// Runs the configured sweep: honest, AoD-spoofed (limited knowledge), or
// AoA-spoofed (complete knowledge). shift = 0 reproduces the honest
// spectrum bitwise for every knowledge level.
inline BeamSweepSpectrum run_attack(const Ula& ula_tx, const Ula& ula_rx, const Codebook& cb_tx,
                                    const Codebook& cb_rx, const AttackConfig& cfg) {
  cfg.validate();
  switch (cfg.knowledge) {
    case AttackKnowledge::honest:
      return honest_sweep(ula_tx, ula_rx, cb_tx, cb_rx, cfg.true_aod_rad, cfg.true_aoa_rad);
    case AttackKnowledge::limited: {
      const auto precoders = spoof_aod_precoders(ula_tx, cb_tx, cfg.true_aod_rad, cfg.shift_rad);
      return sweep_spectrum(ula_tx, ula_rx, precoders, cb_tx, cb_rx, cfg.true_aod_rad,
                            cfg.true_aoa_rad);
    }
    default: {
      const double spoof_aoa = cfg.true_aoa_rad + cfg.shift_rad;
      const CVec gains =
          spoof_aoa_gains(ula_rx, cb_rx, cfg.true_aoa_rad, spoof_aoa, cfg.clip_epsilon);
      return sweep_spectrum(ula_tx, ula_rx, honest_precoders(ula_tx, cb_tx), cb_tx, cb_rx,
                            cfg.true_aod_rad, cfg.true_aoa_rad, gains);
    }
  }
}

}  // namespace kvisim
