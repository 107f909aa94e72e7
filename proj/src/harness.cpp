#include "gridfuzz/harness.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "gridfuzz/errors.hpp"
#include "gridfuzz/microgrid.hpp"
#include <nlohmann/json.hpp>

namespace gridfuzz {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw Error("unknown config key '" + key + "' in " + where);
  }
}

void apply_synth(SynthParams& p, const json& j) {
  reject_unknown_keys(j,
                      {"days", "seed", "pv_peak_kw", "wind_mean_kw", "demand_base_kw",
                       "morning_peak_kw", "evening_peak_kw", "noise_level", "c_buy_day",
                       "c_buy_night", "c_sell_day", "c_sell_night", "day_start_hour",
                       "day_end_hour", "start_timestamp"},
                      "scenario.synth");
  if (j.contains("pv_peak_kw")) p.pv_peak_kw = j["pv_peak_kw"].get<double>();
  if (j.contains("wind_mean_kw")) p.wind_mean_kw = j["wind_mean_kw"].get<double>();
  if (j.contains("demand_base_kw")) p.demand_base_kw = j["demand_base_kw"].get<double>();
  if (j.contains("morning_peak_kw")) p.morning_peak_kw = j["morning_peak_kw"].get<double>();
  if (j.contains("evening_peak_kw")) p.evening_peak_kw = j["evening_peak_kw"].get<double>();
  if (j.contains("noise_level")) p.noise_level = j["noise_level"].get<double>();
  if (j.contains("c_buy_day")) p.c_buy_day = j["c_buy_day"].get<double>();
  if (j.contains("c_buy_night")) p.c_buy_night = j["c_buy_night"].get<double>();
  if (j.contains("c_sell_day")) p.c_sell_day = j["c_sell_day"].get<double>();
  if (j.contains("c_sell_night")) p.c_sell_night = j["c_sell_night"].get<double>();
  if (j.contains("day_start_hour")) p.day_start_hour = j["day_start_hour"].get<double>();
  if (j.contains("day_end_hour")) p.day_end_hour = j["day_end_hour"].get<double>();
  if (j.contains("start_timestamp")) p.start_timestamp = j["start_timestamp"].get<std::int64_t>();
}

void apply_battery(RunConfig& cfg, const json& j) {
  if (j.is_string()) {
    cfg.battery_preset = j.get<std::string>();
    cfg.battery = BatteryModel::preset(cfg.battery_preset);
    return;
  }
  reject_unknown_keys(j,
                      {"preset", "energy_capacity_kwh", "charge_capacity_ah",
                       "round_trip_efficiency", "r_charge_ohm", "r_discharge_ohm", "max_c_rate",
                       "soc_min", "soc_max", "soc_ini", "efficiency_mode"},
                      "battery");
  if (j.contains("preset")) {
    cfg.battery_preset = j["preset"].get<std::string>();
    cfg.battery = cfg.battery_preset == "custom" ? BatteryModel{}
                                                 : BatteryModel::preset(cfg.battery_preset);
  }
  auto& b = cfg.battery;
  if (j.contains("energy_capacity_kwh")) b.energy_capacity_kwh = j["energy_capacity_kwh"].get<double>();
  if (j.contains("charge_capacity_ah")) b.charge_capacity_ah = j["charge_capacity_ah"].get<double>();
  if (j.contains("round_trip_efficiency"))
    b.round_trip_efficiency = j["round_trip_efficiency"].get<double>();
  if (j.contains("r_charge_ohm")) b.r_charge_ohm = j["r_charge_ohm"].get<double>();
  if (j.contains("r_discharge_ohm")) b.r_discharge_ohm = j["r_discharge_ohm"].get<double>();
  if (j.contains("max_c_rate")) b.max_c_rate = j["max_c_rate"].get<double>();
  if (j.contains("soc_min")) b.soc_min = j["soc_min"].get<double>();
  if (j.contains("soc_max")) b.soc_max = j["soc_max"].get<double>();
  if (j.contains("soc_ini")) b.soc_ini = j["soc_ini"].get<double>();
  if (j.contains("efficiency_mode")) {
    const auto mode = j["efficiency_mode"].get<std::string>();
    if (mode == "fixed_round_trip")
      b.efficiency_mode = EfficiencyMode::FixedRoundTrip;
    else if (mode == "circuit")
      b.efficiency_mode = EfficiencyMode::CircuitComputed;
    else
      throw Error("unknown efficiency_mode: " + mode);
  }
  b.validate();
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config file is not valid JSON: " + std::string(e.what()));
  }
  reject_unknown_keys(j, {"scenario", "battery", "scheme", "evolution", "out_dir"}, "config");

  if (j.contains("scenario")) {
    const auto& js = j["scenario"];
    reject_unknown_keys(js, {"file", "synth"}, "scenario");
    if (js.contains("file") && js.contains("synth"))
      throw Error("scenario: choose either 'file' or 'synth'");
    if (js.contains("file")) {
      cfg.scenario_file = js["file"].get<std::string>();
    } else if (js.contains("synth")) {
      cfg.scenario_file.clear();
      const auto& jy = js["synth"];
      if (jy.contains("days")) cfg.synth_days = jy["days"].get<int>();
      if (jy.contains("seed")) cfg.synth_seed = jy["seed"].get<std::uint64_t>();
      apply_synth(cfg.synth, jy);
    }
  }
  if (j.contains("battery")) apply_battery(cfg, j["battery"]);
  if (j.contains("scheme")) cfg.scheme = scheme_from_name(j["scheme"].get<std::string>());
  if (j.contains("evolution")) {
    const auto& je = j["evolution"];
    reject_unknown_keys(je,
                        {"population", "generations", "crossover_fraction", "mutation_rate",
                         "decay_exponent", "elite_count", "seed"},
                        "evolution");
    auto& e = cfg.evolution;
    if (je.contains("population")) e.population_size = je["population"].get<int>();
    if (je.contains("generations")) e.generations = je["generations"].get<int>();
    if (je.contains("crossover_fraction")) e.crossover_fraction = je["crossover_fraction"].get<double>();
    if (je.contains("mutation_rate")) e.mutation_rate = je["mutation_rate"].get<double>();
    if (je.contains("decay_exponent")) e.decay_exponent = je["decay_exponent"].get<double>();
    if (je.contains("elite_count")) e.elite_count = je["elite_count"].get<int>();
    if (je.contains("seed")) e.master_seed = je["seed"].get<std::uint64_t>();
  }
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
}

int env_threads() {
  const char* env = std::getenv("GRIDFUZZ_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  int value = 0;
  const auto res = std::from_chars(env, env + std::string_view(env).size(), value);
  if (res.ec != std::errc{} || value < 1) throw Error("GRIDFUZZ_THREADS must be a positive integer");
  return value;
}

Scenario resolve_scenario(const RunConfig& cfg) {
  if (!cfg.scenario_file.empty()) return load_scenario(cfg.scenario_file);
  return synth_scenario(cfg.synth_days, cfg.synth_seed, cfg.synth);
}

FitnessFn make_profit_fitness(Scheme scheme, Scenario train, BatteryModel battery,
                              NormalizationRanges ranges) {
  battery.validate();
  return [scheme, train = std::move(train), battery, ranges](const Chromosome& c) {
    const auto controller = std::make_shared<const FuzzyController>(decode(scheme, c));
    return simulate(train, battery, fuzzy_policy(controller), ranges).total_profit;
  };
}

TrainOutputs cmd_train(const RunConfig& cfg) {
  const Scenario scenario = resolve_scenario(cfg);
  const auto [train, test] = split_train_test(scenario);
  const NormalizationRanges ranges = extract_ranges(train);

  EvolutionConfig evo = cfg.evolution;
  evo.threads = env_threads();
  const RunHistory history =
      evolve(evo, cfg.scheme, default_bounds(cfg.scheme), make_profit_fitness(cfg.scheme, train, cfg.battery, ranges));

  fs::create_directories(cfg.out_dir);
  TrainOutputs out;
  out.bundle = ControllerBundle{cfg.scheme, history.final_best, decode(cfg.scheme, history.final_best),
                                ranges};
  out.train_fitness = history.final_best_fitness;
  out.controller_path = (fs::path(cfg.out_dir) / "controller.json").string();
  out.history_path = (fs::path(cfg.out_dir) / "history.csv").string();
  out.checkpoint_path = (fs::path(cfg.out_dir) / "checkpoint.txt").string();

  save_controller(out.bundle, out.controller_path);
  write_history_csv(history, cfg.scheme, out.history_path);
  write_checkpoint(history.final_best, out.checkpoint_path);

  std::cout << "scheme: " << scheme_name(cfg.scheme) << "\n"
            << "final train fitness (MU): " << out.train_fitness << "\n"
            << "active rules alpha: " << active_rule_count(out.bundle.controller.alpha) << "\n"
            << "active rules beta: " << active_rule_count(out.bundle.controller.beta) << "\n"
            << "controller: " << out.controller_path << "\n"
            << "history: " << out.history_path << "\n";
  return out;
}

namespace {

EvaluationSummary evaluate_bundle(const RunConfig& cfg, const ControllerBundle& bundle) {
  const Scenario scenario = resolve_scenario(cfg);
  const auto [train, test] = split_train_test(scenario);
  if (test.samples.empty()) throw IngestError("test split is empty");

  const auto controller = std::make_shared<const FuzzyController>(bundle.controller);
  const SimResult sim = simulate(test, cfg.battery, fuzzy_policy(controller), bundle.ranges);

  fs::create_directories(cfg.out_dir);
  save_ledger_csv(sim.ledger, (fs::path(cfg.out_dir) / "ledger.csv").string());

  EvaluationSummary s;
  s.expense = sim.total_expense;
  s.revenue = sim.total_revenue;
  s.profit = sim.total_profit;
  s.rules_alpha = active_rule_count(bundle.controller.alpha);
  s.rules_beta = active_rule_count(bundle.controller.beta);
  write_summary_csv(s, (fs::path(cfg.out_dir) / "summary.csv").string());

  std::cout << "expense (MU): " << s.expense << "\n"
            << "revenue (MU): " << s.revenue << "\n"
            << "profit (MU): " << s.profit << "\n"
            << "fis rules alpha: " << s.rules_alpha << "\n"
            << "fis rules beta: " << s.rules_beta << "\n";
  return s;
}

}  // namespace

EvaluationSummary cmd_evaluate(const RunConfig& cfg, const std::string& controller_path) {
  return evaluate_bundle(cfg, load_controller(controller_path));
}

CompareOutputs cmd_compare(const RunConfig& cfg) {
  CompareOutputs out;
  for (const Scheme scheme : {Scheme::Classic, Scheme::Hier}) {
    RunConfig sub = cfg;
    sub.scheme = scheme;
    sub.out_dir = (fs::path(cfg.out_dir) / scheme_name(scheme)).string();
    const TrainOutputs trained = cmd_train(sub);
    const EvaluationSummary summary = evaluate_bundle(sub, trained.bundle);
    if (scheme == Scheme::Classic)
      out.classic = summary;
    else
      out.hga = summary;
  }
  out.profit_ratio = out.classic.profit != 0.0 ? out.hga.profit / out.classic.profit : 0.0;

  fs::create_directories(cfg.out_dir);
  const auto path = (fs::path(cfg.out_dir) / "compare.csv").string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write comparison file: " + path);
  char buf[32];
  const auto fmt = [&buf](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  f << "metric,classic,hga\n";
  f << "expense_mu," << fmt(out.classic.expense) << ',' << fmt(out.hga.expense) << '\n';
  f << "revenue_mu," << fmt(out.classic.revenue) << ',' << fmt(out.hga.revenue) << '\n';
  f << "profit_mu," << fmt(out.classic.profit) << ',' << fmt(out.hga.profit) << '\n';
  f << "fis_rules_alpha," << out.classic.rules_alpha << ',' << out.hga.rules_alpha << '\n';
  f << "fis_rules_beta," << out.classic.rules_beta << ',' << out.hga.rules_beta << '\n';
  f << "profit_ratio_hga_over_classic,," << fmt(out.profit_ratio) << '\n';
  f << "# reference result on the original year-long dataset: hga 4277.713 MU vs classic "
       "2560.446 MU profit (+67%)\n";

  std::cout << "comparison written to " << path << "\n"
            << "profit classic (MU): " << out.classic.profit << "\n"
            << "profit hga (MU): " << out.hga.profit << "\n"
            << "ratio hga/classic: " << out.profit_ratio << "\n";
  return out;
}

void cmd_report(const std::string& ledger_path, double dt_hours, const std::string& out_dir) {
  const auto ledger = load_ledger_csv(ledger_path);
  write_report_files(ledger, dt_hours, out_dir);
  std::cout << "report files written to " << out_dir << "\n";
}

std::string cmd_synth(const RunConfig& cfg, const std::string& out_file) {
  const Scenario s = synth_scenario(cfg.synth_days, cfg.synth_seed, cfg.synth);
  std::string path = out_file;
  if (path.empty()) {
    fs::create_directories(cfg.out_dir);
    path = (fs::path(cfg.out_dir) / "scenario.csv").string();
  } else if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  save_scenario(s, path);
  std::cout << "scenario (" << s.samples.size() << " samples) written to " << path << "\n";
  return path;
}

}  // namespace gridfuzz
