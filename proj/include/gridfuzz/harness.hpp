#pragma once

#include <cstdint>
#include <string>

#include "gridfuzz/battery.hpp"
#include "gridfuzz/codec.hpp"
#include "gridfuzz/controller_io.hpp"
#include "gridfuzz/evolution.hpp"
#include "gridfuzz/reporting.hpp"
#include "gridfuzz/scenario.hpp"

namespace gridfuzz {

/// Resolved run configuration: scenario source, battery selection, scheme
/// and GA settings. Populated from defaults, then a JSON config file, then
/// command-line overrides (later layers win).
struct RunConfig {
  std::string scenario_file;  // empty: use the synthetic generator
  int synth_days = 30;
  std::uint64_t synth_seed = 42;
  SynthParams synth;

  std::string battery_preset = "config2";
  BatteryModel battery = BatteryModel::config2();

  Scheme scheme = Scheme::Hier;
  EvolutionConfig evolution;
  std::string out_dir = "out";
};

/// Merge a JSON config file into cfg. Unknown keys are rejected so typos
/// fail loudly.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// GRIDFUZZ_THREADS caps fitness-evaluation parallelism (default 1).
int env_threads();

Scenario resolve_scenario(const RunConfig& cfg);

/// Fitness of a chromosome: total trading profit of the decoded controller
/// simulated over the training series.
FitnessFn make_profit_fitness(Scheme scheme, Scenario train, BatteryModel battery,
                              NormalizationRanges ranges);

struct TrainOutputs {
  ControllerBundle bundle;
  double train_fitness = 0.0;
  std::string controller_path;
  std::string history_path;
  std::string checkpoint_path;
};

/// train: learn on the odd-sample split, write controller/history/checkpoint.
TrainOutputs cmd_train(const RunConfig& cfg);

/// evaluate: simulate a saved controller on the even-sample split, write
/// ledger and summary.
EvaluationSummary cmd_evaluate(const RunConfig& cfg, const std::string& controller_path);

struct CompareOutputs {
  EvaluationSummary classic;
  EvaluationSummary hga;
  double profit_ratio = 0.0;  // hga / classic
};

/// compare: train both schemes with identical seeds and scenario, evaluate
/// both on the test split, emit the two-column table with the profit ratio.
CompareOutputs cmd_compare(const RunConfig& cfg);

/// report: regenerate plot-data files from a ledger CSV.
void cmd_report(const std::string& ledger_path, double dt_hours, const std::string& out_dir);

/// synth: write a synthetic scenario CSV.
std::string cmd_synth(const RunConfig& cfg, const std::string& out_file);

}  // namespace gridfuzz
