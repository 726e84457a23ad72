// kvisim command-line tool: scenario evaluation, deployment sweeps and
// planning, beam-spoofing simulation, and bistatic target location.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 I/O error,
// 3 infeasible plan.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kvisim/kvisim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kvisim;

namespace {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("read failure on '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw io_error("write failure on '" + path.string() + "'");
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON cannot carry IEEE infinities; emit them as the string "inf".
json json_num(double v) {
  if (std::isinf(v)) return v > 0.0 ? json("inf") : json("-inf");
  if (std::isnan(v)) return json("nan");
  return json(v);
}

json scenario_json(const Scenario& scn) {
  return json{{"area_side_m", scn.area_side_m},
              {"n_bs", scn.n_bs},
              {"carrier_hz", scn.carrier_hz},
              {"bandwidth_hz", scn.bandwidth_hz},
              {"tx_power_w", scn.tx_power_w},
              {"pilot_s", scn.pilot_s},
              {"noise_figure_db", scn.noise_figure_db},
              {"antenna_gain_db", scn.antenna_gain_db},
              {"noise_temp_k", scn.noise_temp_k},
              {"n_users", scn.n_users},
              {"seed", scn.seed},
              {"percentile", scn.percentile},
              {"sync_mode", to_string(scn.sync_mode)},
              {"min_dist_m", scn.min_dist_m}};
}

json report_json(const KviReport& r, int n_users) {
  return json{{"n_bs", r.n_bs},
              {"tx_power_w", r.tx_power_w},
              {"duty_fraction", r.duty_fraction},
              {"opex_w", r.opex_w},
              {"inclusive_rate_bps", json_num(r.inclusive_rate_bps)},
              {"inclusive_peb_m", json_num(r.inclusive_peb_m)},
              {"inclusive_pl_m", json_num(r.inclusive_pl_m)},
              {"percentile", r.percentile},
              {"n_users", n_users}};
}

fs::path sibling_with_suffix(const fs::path& out, const char* suffix) {
  fs::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

// Replay manifest, written next to every file-producing run. The timestamp
// is informational only; all replay inputs are in `scenario` and `args`.
void write_manifest(const fs::path& out, const std::string& subcommand,
                    const std::optional<Scenario>& scn, const json& args,
                    const std::vector<fs::path>& outputs) {
  json manifest{{"tool", "kvisim"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"timestamp_utc", iso8601_utc_now()},
                {"args", args}};
  if (scn) {
    manifest["scenario"] = scenario_json(*scn);
    manifest["seed"] = scn->seed;
  }
  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  manifest["outputs"] = outs;
  write_text_file(sibling_with_suffix(out, ".manifest.json"), manifest.dump(2) + "\n");
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> overrides;  // key=value, applied after the file
  double duty = 1.0;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool require_out) {
  cmd->add_option("--config", opts.config_path, "scenario configuration file (key = value lines)");
  auto* out = cmd->add_option("--out", opts.out_path, "output path");
  if (require_out) out->required();
  cmd->add_option("--seed", opts.seed, "override the scenario seed");
  cmd->add_option("--threads", opts.threads, "worker thread cap");
  cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set n_users=5000")
      ->take_all();
  cmd->add_option("--duty", opts.duty, "pilot duty fraction for the OPEX proxy")
      ->check(CLI::Range(1e-9, 1.0));
}

Scenario load_with_overrides(const CommonOpts& opts) {
  std::string text;
  if (!opts.config_path.empty()) text = read_text_file(opts.config_path);
  // overrides reuse the config grammar; later assignments win
  for (const auto& kv : opts.overrides) {
    text += '\n';
    text += kv;
  }
  Scenario scn = load_scenario(text);
  if (opts.seed) {
    scn.seed = *opts.seed;
    scn.validate();
  }
  return scn;
}

int run_evaluate(const CommonOpts& opts) {
  const Scenario scn = load_with_overrides(opts);
  const auto users = sample_users(scn);
  const auto bs = place_bs_grid(scn.area_side_m, scn.n_bs);
  const auto kpis = evaluate_users(scn, users, bs, opts.threads);
  const KviReport report = kvi_report(scn, kpis, opts.duty);

  const fs::path csv_path = opts.out_path;
  const fs::path json_path = sibling_with_suffix(csv_path, ".json");
  write_text_file(csv_path, users_csv(users, kpis));
  write_text_file(json_path, report_json(report, scn.n_users).dump(2) + "\n");
  write_manifest(csv_path, "evaluate", scn,
                 json{{"duty", opts.duty}, {"out", opts.out_path}}, {csv_path, json_path});

  std::cout << "evaluate: " << scn.n_users << " users, " << scn.n_bs
            << " BSs -> inclusive rate " << format_double(report.inclusive_rate_bps)
            << " bps, PEB " << format_double(report.inclusive_peb_m) << " m, PL "
            << format_double(report.inclusive_pl_m) << " m\n";
  return 0;
}

int run_sweep(const CommonOpts& opts, std::vector<int> n_list, std::vector<double> p_list) {
  const Scenario scn = load_with_overrides(opts);
  if (n_list.empty()) n_list = {scn.n_bs};
  if (p_list.empty()) p_list = {scn.tx_power_w};
  const SweepResult result = sweep(scn, n_list, p_list, opts.threads, opts.duty);

  const fs::path csv_path = opts.out_path;
  write_text_file(csv_path, sweep_csv(result));
  write_manifest(csv_path, "sweep", scn,
                 json{{"n_list", n_list}, {"p_list", p_list}, {"duty", opts.duty}},
                 {csv_path});

  std::cout << "sweep: " << result.cells.size() << " cells -> " << csv_path.string() << "\n";
  return 0;
}

int run_plan(const CommonOpts& opts, std::vector<int> n_list, std::vector<double> p_list,
             const PlanTargets& targets) {
  const Scenario scn = load_with_overrides(opts);
  if (n_list.empty()) n_list = {scn.n_bs};
  if (p_list.empty()) p_list = {scn.tx_power_w};
  const PlanResult res = plan_min_cost(scn, targets, n_list, p_list, opts.threads, opts.duty);

  json out{{"feasible", res.feasible},
           {"n_bs", res.n_bs},
           {"tx_power_w", res.tx_power_w},
           {"report", report_json(res.report, scn.n_users)}};
  const std::string body = out.dump(2) + "\n";
  std::cout << body;
  if (!opts.out_path.empty()) {
    const fs::path json_path = opts.out_path;
    write_text_file(json_path, body);
    json args{{"n_list", n_list}, {"p_list", p_list}, {"duty", opts.duty}};
    if (targets.rate_bps_min) args["target_rate_bps"] = *targets.rate_bps_min;
    if (targets.peb_m_max) args["target_peb_m"] = *targets.peb_m_max;
    if (targets.pl_m_max) args["target_pl_m"] = *targets.pl_m_max;
    write_manifest(json_path, "plan", scn, args, {json_path});
  }
  return res.feasible ? 0 : 3;
}

struct AttackOpts {
  std::string knowledge = "honest";
  double shift = std::numbers::pi / 4.0;
  double true_aod = 0.0;
  double true_aoa = 0.0;
  double clip_epsilon = 1e-3;
  int elements = 16;
  int beams = 64;
  double spacing_wl = 0.5;
  std::string out_path;
};

int run_attack(const AttackOpts& opts) {
  const Ula ula{opts.elements, opts.spacing_wl};
  const Codebook cb = Codebook::uniform(opts.beams);

  AttackConfig cfg;
  if (opts.knowledge == "honest") cfg.knowledge = AttackKnowledge::honest;
  else if (opts.knowledge == "limited") cfg.knowledge = AttackKnowledge::limited;
  else if (opts.knowledge == "complete") cfg.knowledge = AttackKnowledge::complete;
  else throw std::invalid_argument("--knowledge must be honest, limited, or complete");
  cfg.shift_rad = opts.shift;
  cfg.true_aod_rad = opts.true_aod;
  cfg.true_aoa_rad = opts.true_aoa;
  cfg.clip_epsilon = opts.clip_epsilon;

  const BeamSweepSpectrum spec = run_attack(ula, ula, cb, cb, cfg);
  const auto [aod_est, aoa_est] = estimate_angles(spec);

  json out{{"knowledge", opts.knowledge},
           {"shift_rad", opts.shift},
           {"aod_est_rad", aod_est},
           {"aoa_est_rad", aoa_est}};
  const std::string body = out.dump(2) + "\n";
  std::cout << body;
  if (!opts.out_path.empty()) {
    const fs::path csv_path = opts.out_path;
    const fs::path json_path = sibling_with_suffix(csv_path, ".json");
    write_text_file(csv_path, spectrum_csv(spec));
    write_text_file(json_path, body);
    json args{{"knowledge", opts.knowledge},   {"shift_rad", opts.shift},
              {"true_aod_rad", opts.true_aod}, {"true_aoa_rad", opts.true_aoa},
              {"clip_epsilon", opts.clip_epsilon}, {"elements", opts.elements},
              {"beams", opts.beams},           {"spacing_wl", opts.spacing_wl}};
    write_manifest(csv_path, "attack", std::nullopt, args, {csv_path, json_path});
  }
  return 0;
}

struct SenseOpts {
  std::vector<double> tx{0.0, 0.0};
  std::vector<double> rx{0.0, 0.0};
  double bearing = 0.0;
  double range_sum = 0.0;
  double resolution = 0.0;  // 0 disables delay-bin quantization
  std::string anchor = "tx";
  std::string out_path;
};

int run_sense(const SenseOpts& opts) {
  BistaticMeasurement meas;
  meas.tx_pos = {opts.tx[0], opts.tx[1]};
  meas.rx_pos = {opts.rx[0], opts.rx[1]};
  meas.bearing_rad = opts.bearing;
  meas.range_sum_m = opts.range_sum;
  if (opts.anchor == "tx") meas.anchor = BearingAnchor::tx;
  else if (opts.anchor == "rx") meas.anchor = BearingAnchor::rx;
  else throw std::invalid_argument("--anchor must be tx or rx");

  const Point2D target =
      (opts.resolution > 0.0) ? quantized_locate(meas, opts.resolution) : locate_target(meas);

  json out{{"target_x", target.x}, {"target_y", target.y}};
  const std::string body = out.dump(2) + "\n";
  std::cout << body;
  if (!opts.out_path.empty()) {
    const fs::path json_path = opts.out_path;
    write_text_file(json_path, body);
    json args{{"tx", opts.tx},           {"rx", opts.rx},
              {"bearing_rad", opts.bearing}, {"range_sum_m", opts.range_sum},
              {"resolution_m", opts.resolution}, {"anchor", opts.anchor}};
    write_manifest(json_path, "sense", std::nullopt, args, {json_path});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KVI-driven deployment analysis for positioning and sensing"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts eval_opts;
  auto* cmd_eval = app.add_subcommand("evaluate", "per-user KPI evaluation of one deployment");
  add_common_flags(cmd_eval, eval_opts, true);

  CommonOpts sweep_opts;
  std::vector<int> sweep_n;
  std::vector<double> sweep_p;
  auto* cmd_sweep = app.add_subcommand("sweep", "KVI report over a (BS count x power) grid");
  add_common_flags(cmd_sweep, sweep_opts, true);
  cmd_sweep->add_option("--n-list", sweep_n, "BS counts, e.g. 1,4,16,64")->delimiter(',');
  cmd_sweep->add_option("--p-list", sweep_p, "transmit powers in W, e.g. 0.1,1.0")->delimiter(',');

  CommonOpts plan_opts;
  std::vector<int> plan_n;
  std::vector<double> plan_p;
  double target_rate = 0.0, target_peb = 0.0, target_pl = 0.0;
  auto* cmd_plan = app.add_subcommand("plan", "minimum-cost deployment meeting KPI targets");
  add_common_flags(cmd_plan, plan_opts, false);
  cmd_plan->add_option("--n-list", plan_n, "candidate BS counts (ascending)")->delimiter(',');
  cmd_plan->add_option("--p-list", plan_p, "candidate powers in W (ascending)")->delimiter(',');
  auto* t_rate = cmd_plan->add_option("--target-rate-bps", target_rate, "inclusive rate floor");
  auto* t_peb = cmd_plan->add_option("--target-peb-m", target_peb, "inclusive PEB ceiling");
  auto* t_pl = cmd_plan->add_option("--target-pl-m", target_pl, "inclusive PL ceiling");

  AttackOpts attack_opts;
  auto* cmd_attack = app.add_subcommand("attack", "beam-sweep spoofing simulation");
  cmd_attack->add_option("--knowledge", attack_opts.knowledge, "honest | limited | complete");
  cmd_attack->add_option("--shift", attack_opts.shift, "spoofing shift in radians");
  cmd_attack->add_option("--true-aod", attack_opts.true_aod, "true AoD in radians");
  cmd_attack->add_option("--true-aoa", attack_opts.true_aoa, "true AoA in radians");
  cmd_attack->add_option("--clip-epsilon", attack_opts.clip_epsilon, "gain synthesis clip");
  cmd_attack->add_option("--elements", attack_opts.elements, "ULA elements per end");
  cmd_attack->add_option("--beams", attack_opts.beams, "codebook beams per end");
  cmd_attack->add_option("--spacing-wl", attack_opts.spacing_wl, "element spacing in wavelengths");
  cmd_attack->add_option("--out", attack_opts.out_path, "spectrum CSV path");

  SenseOpts sense_opts;
  auto* cmd_sense = app.add_subcommand("sense", "bistatic bearing+ellipse target location");
  cmd_sense->add_option("--tx", sense_opts.tx, "tx position x,y")->delimiter(',')->expected(2);
  cmd_sense->add_option("--rx", sense_opts.rx, "rx position x,y")->delimiter(',')->expected(2);
  cmd_sense->add_option("--bearing", sense_opts.bearing, "bearing from the anchor, radians")
      ->required();
  cmd_sense->add_option("--range-sum", sense_opts.range_sum, "bistatic range sum in meters")
      ->required();
  cmd_sense->add_option("--resolution", sense_opts.resolution, "delay-bin size in meters");
  cmd_sense->add_option("--anchor", sense_opts.anchor, "bearing anchor: tx | rx");
  cmd_sense->add_option("--out", sense_opts.out_path, "result JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_eval->parsed()) return run_evaluate(eval_opts);
    if (cmd_sweep->parsed()) return run_sweep(sweep_opts, sweep_n, sweep_p);
    if (cmd_plan->parsed()) {
      PlanTargets targets;
      if (t_rate->count() > 0) targets.rate_bps_min = target_rate;
      if (t_peb->count() > 0) targets.peb_m_max = target_peb;
      if (t_pl->count() > 0) targets.pl_m_max = target_pl;
      return run_plan(plan_opts, plan_n, plan_p, targets);
    }
    if (cmd_attack->parsed()) return run_attack(attack_opts);
    if (cmd_sense->parsed()) return run_sense(sense_opts);
  } catch (const io_error& e) {
    std::cerr << "kvisim: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kvisim: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
