#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kvisim/kpi.hpp"
#include "kvisim/scenario.hpp"

namespace kvisim {

namespace detail {

// Nearest-rank quantile on an ascending-sorted vector: element at index
// ceil(p*n)-1, floored at the first element (p = 0 returns the minimum).
inline double nearest_rank_sorted(const std::vector<double>& sorted, double p) {
  const double n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::ptrdiff_t>(std::ceil(p * n)) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(sorted.size()) - 1);
  return sorted[static_cast<std::size_t>(idx)];
}

}  // namespace detail

// Nearest-rank quantile: sort ascending, take the element at ceil(p*n)-1.
// +inf entries are legal and sort last.
inline double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty value list");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  return detail::nearest_rank_sorted(values, p);
}

// KVI-induced KPIs for one (n_bs, tx_power) deployment point.
//   CAPEX: number of BSs. OPEX: total radiated pilot power.
//   Inclusiveness: the KPI value attained by >= `percentile` of users —
//   the (1-percentile) rate quantile, the `percentile` error quantiles.
struct KviReport {
  int n_bs = 0;
  double tx_power_w = 0.0;
  double duty_fraction = 1.0;
  double opex_w = 0.0;
  double inclusive_rate_bps = 0.0;
  double inclusive_peb_m = std::numeric_limits<double>::infinity();
  double inclusive_pl_m = std::numeric_limits<double>::infinity();
  double percentile = 0.95;

  // Ascending per-user KPI values, kept for coverage queries.
  std::vector<double> rates_sorted;
  std::vector<double> pebs_sorted;
  std::vector<double> pls_sorted;

  // Fraction of users with rate >= target (non-increasing in the target).
  double coverage_fraction_rate(double rate_bps_min) const {
    const auto it = std::lower_bound(rates_sorted.begin(), rates_sorted.end(), rate_bps_min);
    return static_cast<double>(rates_sorted.end() - it) / static_cast<double>(rates_sorted.size());
  }
  // Fraction of users with peb <= target (non-decreasing in the target).
  double coverage_fraction_peb(double peb_m_max) const {
    const auto it = std::upper_bound(pebs_sorted.begin(), pebs_sorted.end(), peb_m_max);
    return static_cast<double>(it - pebs_sorted.begin()) / static_cast<double>(pebs_sorted.size());
  }
  double coverage_fraction_pl(double pl_m_max) const {
    const auto it = std::upper_bound(pls_sorted.begin(), pls_sorted.end(), pl_m_max);
    return static_cast<double>(it - pls_sorted.begin()) / static_cast<double>(pls_sorted.size());
  }
};

inline KviReport kvi_report(const Scenario& scn, const std::vector<UserKpi>& kpis,
                            double duty_fraction = 1.0) {
  if (kpis.empty()) throw std::invalid_argument("kvi_report: empty KPI list");
  if (!(duty_fraction > 0.0 && duty_fraction <= 1.0))
    throw std::invalid_argument("kvi_report: duty_fraction must lie in (0, 1]");

  KviReport r;
  r.n_bs = scn.n_bs;
  r.tx_power_w = scn.tx_power_w;
  r.duty_fraction = duty_fraction;
  r.opex_w = scn.n_bs * scn.tx_power_w * duty_fraction;
  r.percentile = scn.percentile;

  r.rates_sorted.reserve(kpis.size());
  r.pebs_sorted.reserve(kpis.size());
  r.pls_sorted.reserve(kpis.size());
  for (const auto& k : kpis) {
    r.rates_sorted.push_back(k.rate_bps);
    r.pebs_sorted.push_back(k.peb_m);
    r.pls_sorted.push_back(k.pl_m);
  }
  std::sort(r.rates_sorted.begin(), r.rates_sorted.end());
  std::sort(r.pebs_sorted.begin(), r.pebs_sorted.end());
  std::sort(r.pls_sorted.begin(), r.pls_sorted.end());

  r.inclusive_rate_bps = detail::nearest_rank_sorted(r.rates_sorted, 1.0 - scn.percentile);
  r.inclusive_peb_m = detail::nearest_rank_sorted(r.pebs_sorted, scn.percentile);
  r.inclusive_pl_m = detail::nearest_rank_sorted(r.pls_sorted, scn.percentile);
  return r;
}

// One KviReport per (n_bs, tx_power) cell, n_bs outer, power inner. The same
// user sample is reused across all cells so cross-cell comparisons are paired.
struct SweepResult {
  Scenario scenario;
  std::vector<int> n_bs_list;
  std::vector<double> tx_power_list;
  std::vector<KviReport> cells;

  const KviReport& cell(std::size_t n_idx, std::size_t p_idx) const {
    return cells.at(n_idx * tx_power_list.size() + p_idx);
  }
};

inline SweepResult sweep(const Scenario& scn, std::vector<int> n_bs_list,
                         std::vector<double> tx_power_list, unsigned threads = 1,
                         double duty_fraction = 1.0) {
  if (n_bs_list.empty() || tx_power_list.empty())
    throw std::invalid_argument("sweep: candidate lists must be non-empty");
  scn.validate();

  SweepResult result{scn, std::move(n_bs_list), std::move(tx_power_list), {}};
  result.cells.reserve(result.n_bs_list.size() * result.tx_power_list.size());

  const std::vector<Point2D> users = sample_users(scn);
  for (const int n : result.n_bs_list) {
    const std::vector<Point2D> bs = place_bs_grid(scn.area_side_m, n);
    for (const double p : result.tx_power_list) {
      Scenario cell_scn = scn;
      cell_scn.n_bs = n;
      cell_scn.tx_power_w = p;
      cell_scn.validate();
      const auto kpis = evaluate_users(cell_scn, users, bs, threads);
      result.cells.push_back(kvi_report(cell_scn, kpis, duty_fraction));
    }
  }
  return result;
}

// Deployment targets at the scenario's inclusiveness percentile; absent
// targets are ignored.
struct PlanTargets {
  std::optional<double> rate_bps_min;
  std::optional<double> peb_m_max;
  std::optional<double> pl_m_max;
};

inline bool targets_met(const KviReport& r, const PlanTargets& t) {
  if (t.rate_bps_min && !(r.inclusive_rate_bps >= *t.rate_bps_min)) return false;
  if (t.peb_m_max && !(r.inclusive_peb_m <= *t.peb_m_max)) return false;
  if (t.pl_m_max && !(r.inclusive_pl_m <= *t.pl_m_max)) return false;
  return true;
}

struct PlanResult {
  bool feasible = false;
  int n_bs = 0;
  double tx_power_w = 0.0;
  KviReport report;
};

namespace detail {

// Worst relative target violation; 1.0 means all targets met.
inline double violation_score(const KviReport& r, const PlanTargets& t) {
  double score = 1.0;
  if (t.rate_bps_min)
    score = std::max(score, *t.rate_bps_min / std::max(r.inclusive_rate_bps, 1e-300));
  if (t.peb_m_max) score = std::max(score, r.inclusive_peb_m / *t.peb_m_max);
  if (t.pl_m_max) score = std::max(score, r.inclusive_pl_m / *t.pl_m_max);
  return score;
}

}  // namespace detail

// Minimum-cost deployment search: first candidate meeting every target in
// lexicographic (n_bs, tx_power) order — CAPEX before OPEX. Infeasible
// searches return feasible=false with the closest report found.
inline PlanResult plan_min_cost(const Scenario& scn, const PlanTargets& targets,
                                std::span<const int> n_bs_candidates,
                                std::span<const double> tx_power_candidates,
                                unsigned threads = 1, double duty_fraction = 1.0) {
  if (n_bs_candidates.empty() || tx_power_candidates.empty())
    throw std::invalid_argument("plan_min_cost: candidate lists must be non-empty");
  if (!std::is_sorted(n_bs_candidates.begin(), n_bs_candidates.end()) ||
      !std::is_sorted(tx_power_candidates.begin(), tx_power_candidates.end()))
    throw std::invalid_argument("plan_min_cost: candidate lists must be sorted ascending");
  scn.validate();

  const std::vector<Point2D> users = sample_users(scn);
  PlanResult best;
  double best_score = std::numeric_limits<double>::infinity();

  for (const int n : n_bs_candidates) {
    const std::vector<Point2D> bs = place_bs_grid(scn.area_side_m, n);
    for (const double p : tx_power_candidates) {
      Scenario cell_scn = scn;
      cell_scn.n_bs = n;
      cell_scn.tx_power_w = p;
      cell_scn.validate();
      const auto kpis = evaluate_users(cell_scn, users, bs, threads);
      KviReport report = kvi_report(cell_scn, kpis, duty_fraction);

      if (targets_met(report, targets)) {
        return {true, n, p, std::move(report)};
      }
      const double score = detail::violation_score(report, targets);
      if (score < best_score) {
        best_score = score;
        best = {false, n, p, std::move(report)};
      }
    }
  }
  return best;
}

}  // namespace kvisim
