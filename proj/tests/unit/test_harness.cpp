#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gridfuzz/errors.hpp"
#include "gridfuzz/harness.hpp"
#include "gridfuzz/microgrid.hpp"

using namespace gridfuzz;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("harness_test_tmp") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all("harness_test_tmp"); }
  std::string str(const char* child = nullptr) const {
    return child ? (path / child).string() : path.string();
  }
};

RunConfig tiny_config(const TempDir& dir) {
  RunConfig cfg;
  cfg.synth_days = 2;
  cfg.synth_seed = 5;
  cfg.evolution.population_size = 6;
  cfg.evolution.generations = 2;
  cfg.evolution.master_seed = 5;
  cfg.out_dir = dir.str("out");
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("train writes the full artifact set") {
  TempDir dir("train");
  auto cfg = tiny_config(dir);
  cfg.scheme = Scheme::Hier;
  const auto out = cmd_train(cfg);

  CHECK(fs::exists(out.controller_path));
  CHECK(fs::exists(out.history_path));
  CHECK(fs::exists(out.checkpoint_path));

  // history carries exactly G data rows
  std::ifstream hist(out.history_path);
  std::string line;
  int rows = -1;  // discount the header
  while (std::getline(hist, line))
    if (!line.empty()) ++rows;
  CHECK(rows == cfg.evolution.generations);

  // the checkpoint reproduces the trained chromosome
  CHECK(read_checkpoint(out.checkpoint_path) == out.bundle.chromosome);

  // the controller file reloads bit-exactly
  const auto loaded = load_controller(out.controller_path);
  CHECK(loaded.scheme == Scheme::Hier);
  CHECK(loaded.chromosome == out.bundle.chromosome);
  CHECK(loaded.controller == out.bundle.controller);
}

TEST_CASE("classic training yields the fixed 27-rule bases") {
  TempDir dir("classic");
  auto cfg = tiny_config(dir);
  cfg.scheme = Scheme::Classic;
  const auto out = cmd_train(cfg);
  const auto loaded = load_controller(out.controller_path);
  CHECK(loaded.controller.alpha.rules.size() == 27);
  CHECK(active_rule_count(loaded.controller.alpha) == 27);
  CHECK(active_rule_count(loaded.controller.beta) == 27);
}

TEST_CASE("identical configs train byte-identical artifacts") {
  TempDir dir("determinism");
  auto cfg1 = tiny_config(dir);
  cfg1.out_dir = dir.str("a");
  auto cfg2 = tiny_config(dir);
  cfg2.out_dir = dir.str("b");
  const auto out1 = cmd_train(cfg1);
  const auto out2 = cmd_train(cfg2);
  CHECK(slurp(out1.history_path) == slurp(out2.history_path));
  CHECK(slurp(out1.controller_path) == slurp(out2.controller_path));
  CHECK(slurp(out1.checkpoint_path) == slurp(out2.checkpoint_path));
}

TEST_CASE("evaluating a degenerate controller reproduces the no-storage profit") {
  TempDir dir("evaluate");
  auto cfg = tiny_config(dir);

  // a controller with every MF deactivated always falls back to the
  // pure-grid action
  auto chrom = seed_chromosome(Scheme::Hier);
  std::fill(chrom.control.begin(), chrom.control.end(), 0);
  const auto scenario = resolve_scenario(cfg);
  const auto [train, test] = split_train_test(scenario);
  ControllerBundle bundle{Scheme::Hier, chrom, decode_hierarchical(chrom), extract_ranges(train)};
  const auto controller_path = dir.str("baseline.json");
  save_controller(bundle, controller_path);

  const auto summary = cmd_evaluate(cfg, controller_path);
  CHECK(summary.profit == doctest::Approx(no_storage_profit(test)).epsilon(1e-12));
  CHECK(summary.profit == doctest::Approx(summary.revenue - summary.expense).epsilon(1e-12));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "ledger.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "summary.csv"));
}

TEST_CASE("evaluate rejects a scenario too short to split") {
  TempDir dir("short");
  auto cfg = tiny_config(dir);
  // one-sample file cannot provide a test half
  Scenario s;
  s.dt_hours = 0.25;
  s.samples = {{0, 1.0, 2.0, 0.3, 0.2}};
  const auto scn_path = dir.str("one.csv");
  save_scenario(s, scn_path);
  cfg.scenario_file = scn_path;

  ControllerBundle bundle{Scheme::Classic, seed_chromosome(Scheme::Classic),
                          baseline_controller(Scheme::Classic), NormalizationRanges{}};
  const auto controller_path = dir.str("c.json");
  save_controller(bundle, controller_path);
  CHECK_THROWS_AS(cmd_evaluate(cfg, controller_path), IngestError);
}

TEST_CASE("compare emits both schemes and the profit ratio") {
  TempDir dir("compare");
  auto cfg = tiny_config(dir);
  cfg.evolution.generations = 1;
  const auto out = cmd_compare(cfg);

  CHECK(out.classic.profit == doctest::Approx(out.classic.revenue - out.classic.expense));
  CHECK(out.hga.profit == doctest::Approx(out.hga.revenue - out.hga.expense));

  const auto text = slurp((fs::path(cfg.out_dir) / "compare.csv").string());
  CHECK(text.find("metric,classic,hga") != std::string::npos);
  CHECK(text.find("profit_mu,") != std::string::npos);
  CHECK(text.find("profit_ratio_hga_over_classic") != std::string::npos);
  CHECK(text.find("4277.713") != std::string::npos);
}

TEST_CASE("report aggregates a one-day ledger into a single row") {
  TempDir dir("report");
  const auto batt = BatteryModel::config2();
  const auto s = synth_scenario(1, 9);
  const auto sim = simulate(s, batt, grid_only_policy(), extract_ranges(s));
  REQUIRE(sim.ledger.size() == 96);
  const auto ledger_path = dir.str("ledger.csv");
  save_ledger_csv(sim.ledger, ledger_path);

  cmd_report(ledger_path, 0.25, dir.str("rep"));
  const auto daily = slurp((fs::path(dir.str("rep")) / "daily.csv").string());
  // header plus exactly one aggregate row
  CHECK(std::count(daily.begin(), daily.end(), '\n') == 2);

  // per-day profits sum to the simulated total
  std::istringstream is(daily);
  std::string line;
  std::getline(is, line);  // header
  std::getline(is, line);
  const auto last_comma = line.rfind(',');
  const double day_profit = std::stod(line.substr(last_comma + 1));
  CHECK(day_profit == doctest::Approx(sim.total_profit).epsilon(1e-9));

  // regeneration is byte-identical
  cmd_report(ledger_path, 0.25, dir.str("rep2"));
  CHECK(slurp((fs::path(dir.str("rep")) / "daily.csv").string()) ==
        slurp((fs::path(dir.str("rep2")) / "daily.csv").string()));
  CHECK(slurp((fs::path(dir.str("rep")) / "soc_series.csv").string()) ==
        slurp((fs::path(dir.str("rep2")) / "soc_series.csv").string()));
}

TEST_CASE("synth writes a loadable scenario") {
  TempDir dir("synth");
  auto cfg = tiny_config(dir);
  cfg.synth_days = 3;
  const auto path = cmd_synth(cfg, dir.str("scn.csv"));
  const auto s = load_scenario(path);
  CHECK(s.samples.size() == 3 * 96);
}

TEST_CASE("config files merge and reject unknown keys") {
  TempDir dir("config");
  const auto cfg_path = dir.str("run.json");
  {
    std::ofstream out(cfg_path);
    out << R"({
      "scenario": {"synth": {"days": 4, "seed": 11, "pv_peak_kw": 9.5}},
      "battery": "config1",
      "scheme": "classic",
      "evolution": {"population": 8, "generations": 3, "mutation_rate": 0.05, "seed": 77},
      "out_dir": ")" << dir.str("cfg_out") << R"("
    })";
  }
  RunConfig cfg;
  apply_config_file(cfg, cfg_path);
  CHECK(cfg.synth_days == 4);
  CHECK(cfg.synth_seed == 11);
  CHECK(cfg.synth.pv_peak_kw == 9.5);
  CHECK(cfg.battery_preset == "config1");
  CHECK(cfg.battery.round_trip_efficiency == 0.86);
  CHECK(cfg.scheme == Scheme::Classic);
  CHECK(cfg.evolution.population_size == 8);
  CHECK(cfg.evolution.master_seed == 77);

  SUBCASE("typos fail loudly") {
    const auto bad_path = dir.str("bad.json");
    {
      std::ofstream out(bad_path);
      out << R"({"schem": "classic"})";
    }
    RunConfig fresh;
    CHECK_THROWS_AS(apply_config_file(fresh, bad_path), Error);
  }
}
