#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gridfuzz/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string scheme;
  std::string battery;
  std::string out_dir;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--seed", flags.seed, "master seed override")->each([&flags](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--scheme", flags.scheme, "encoding scheme")->check(CLI::IsMember({"classic", "hga"}));
  cmd->add_option("--battery", flags.battery, "battery preset")
      ->check(CLI::IsMember({"config1", "config2"}));
  cmd->add_option("--out", flags.out_dir, "output directory");
}

gridfuzz::RunConfig resolve(const CommonFlags& flags) {
  gridfuzz::RunConfig cfg;
  if (!flags.config_path.empty()) gridfuzz::apply_config_file(cfg, flags.config_path);
  // flags win over the config file
  if (flags.seed_set) {
    cfg.evolution.master_seed = flags.seed;
    cfg.synth_seed = flags.seed;
  }
  if (!flags.scheme.empty()) cfg.scheme = gridfuzz::scheme_from_name(flags.scheme);
  if (!flags.battery.empty()) {
    cfg.battery_preset = flags.battery;
    cfg.battery = gridfuzz::BatteryModel::preset(flags.battery);
  }
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microgrid power-flow controller: fuzzy inference tuned by genetic search"};
  app.require_subcommand(1);

  CommonFlags train_flags, eval_flags, compare_flags, synth_flags;

  auto* train = app.add_subcommand("train", "learn a controller on the training split");
  add_common(train, train_flags);

  auto* evaluate = app.add_subcommand("evaluate", "run a saved controller on the test split");
  add_common(evaluate, eval_flags);
  std::string controller_path;
  evaluate->add_option("controller", controller_path, "controller JSON file")->required();

  auto* compare = app.add_subcommand("compare", "train and evaluate both schemes head to head");
  add_common(compare, compare_flags);

  auto* report = app.add_subcommand("report", "emit plot-data files from a ledger CSV");
  std::string ledger_path;
  std::string report_out = "out";
  double report_dt = 0.25;
  report->add_option("ledger", ledger_path, "ledger CSV file")->required();
  report->add_option("--dt", report_dt, "slot width in hours (default 0.25)");
  report->add_option("--out", report_out, "output directory");

  auto* synth = app.add_subcommand("synth", "generate a synthetic scenario CSV");
  add_common(synth, synth_flags);
  int synth_days = 0;
  std::string synth_file;
  synth->add_option("--days", synth_days, "days to generate");
  synth->add_option("--file", synth_file, "output CSV path (default <out>/scenario.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      gridfuzz::cmd_train(resolve(train_flags));
    } else if (evaluate->parsed()) {
      gridfuzz::cmd_evaluate(resolve(eval_flags), controller_path);
    } else if (compare->parsed()) {
      gridfuzz::cmd_compare(resolve(compare_flags));
    } else if (report->parsed()) {
      gridfuzz::cmd_report(ledger_path, report_dt, report_out);
    } else if (synth->parsed()) {
      auto cfg = resolve(synth_flags);
      if (synth_days > 0) cfg.synth_days = synth_days;
      gridfuzz::cmd_synth(cfg, synth_file);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
