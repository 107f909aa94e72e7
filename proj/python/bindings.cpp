#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "gridfuzz/battery.hpp"
#include "gridfuzz/codec.hpp"
#include "gridfuzz/controller_io.hpp"
#include "gridfuzz/errors.hpp"
#include "gridfuzz/evolution.hpp"
#include "gridfuzz/fis.hpp"
#include "gridfuzz/harness.hpp"
#include "gridfuzz/microgrid.hpp"
#include "gridfuzz/scenario.hpp"

namespace py = pybind11;
using namespace gridfuzz;

PYBIND11_MODULE(_core, m) {
  m.doc() = "microgrid power-flow controller: Mamdani inference pair tuned by a "
            "classic or hierarchical genetic search";

  // ---- fuzzy inference -------------------------------------------------
  py::enum_<MfKind>(m, "MfKind")
      .value("Triangular", MfKind::Triangular)
      .value("LeftShoulder", MfKind::LeftShoulder)
      .value("RightShoulder", MfKind::RightShoulder);

  py::class_<MembershipFunction>(m, "MembershipFunction")
      .def_static("triangular", &MembershipFunction::triangular, py::arg("a"), py::arg("b"),
                  py::arg("c"), py::arg("active") = true)
      .def_static("left_shoulder", &MembershipFunction::left_shoulder, py::arg("p1"), py::arg("p2"),
                  py::arg("active") = true)
      .def_static("right_shoulder", &MembershipFunction::right_shoulder, py::arg("p1"),
                  py::arg("p2"), py::arg("active") = true)
      .def_readwrite("kind", &MembershipFunction::kind)
      .def_readwrite("params", &MembershipFunction::params)
      .def_readwrite("active", &MembershipFunction::active)
      .def("center", &MembershipFunction::center);

  m.def("eval_membership", &eval_membership, py::arg("mf"), py::arg("x"));

  py::class_<FuzzyRule>(m, "FuzzyRule")
      .def(py::init<>())
      .def_readwrite("antecedents", &FuzzyRule::antecedents)
      .def_readwrite("consequent", &FuzzyRule::consequent)
      .def_readwrite("weight", &FuzzyRule::weight);

  py::class_<Fis>(m, "Fis")
      .def(py::init<>())
      .def_readwrite("input_mfs", &Fis::input_mfs)
      .def_readwrite("output_mfs", &Fis::output_mfs)
      .def_readwrite("rules", &Fis::rules)
      .def_readwrite("defuzz_resolution", &Fis::defuzz_resolution);

  m.def("infer", [](const Fis& fis, const std::array<double, 3>& inputs) { return infer(fis, inputs); },
        py::arg("fis"), py::arg("inputs"));
  m.def("active_rule_count", &active_rule_count);
  m.def("fis_degenerate", &fis_degenerate);
  m.def("fis_to_json", &fis_to_json);
  m.def("fis_from_json", &fis_from_json);

  py::class_<FuzzyController>(m, "FuzzyController")
      .def(py::init<>())
      .def_readwrite("alpha", &FuzzyController::alpha)
      .def_readwrite("beta", &FuzzyController::beta);

  // ---- chromosome codec --------------------------------------------------
  py::enum_<Scheme>(m, "Scheme").value("Classic", Scheme::Classic).value("Hier", Scheme::Hier);

  py::class_<Chromosome>(m, "Chromosome")
      .def(py::init<>())
      .def_readwrite("control", &Chromosome::control)
      .def_readwrite("parametric", &Chromosome::parametric)
      .def("__eq__", [](const Chromosome& a, const Chromosome& b) { return a == b; });

  py::class_<GeneBounds>(m, "GeneBounds")
      .def(py::init<>())
      .def_readwrite("lower", &GeneBounds::lower)
      .def_readwrite("upper", &GeneBounds::upper)
      .def("__len__", &GeneBounds::size);

  m.def("decode", &decode);
  m.def("encode", &encode);
  m.def("decode_classic", &decode_classic);
  m.def("decode_hierarchical", &decode_hierarchical);
  m.def("default_bounds", &default_bounds);
  m.def("seed_chromosome", &seed_chromosome);
  m.def("baseline_controller", &baseline_controller);
  m.def("random_chromosome", &random_chromosome, py::arg("scheme"), py::arg("bounds"),
        py::arg("seed"));
  m.def("chromosome_to_line", &chromosome_to_line);
  m.def("chromosome_from_line", &chromosome_from_line);
  m.def("assign_consequents", &assign_consequents);

  // ---- battery -----------------------------------------------------------
  py::enum_<EfficiencyMode>(m, "EfficiencyMode")
      .value("FixedRoundTrip", EfficiencyMode::FixedRoundTrip)
      .value("CircuitComputed", EfficiencyMode::CircuitComputed);
  py::enum_<FlowDirection>(m, "FlowDirection")
      .value("Charge", FlowDirection::Charge)
      .value("Discharge", FlowDirection::Discharge);

  py::class_<BatteryModel>(m, "BatteryModel")
      .def(py::init<>())
      .def_static("config1", &BatteryModel::config1)
      .def_static("config2", &BatteryModel::config2)
      .def_static("preset", &BatteryModel::preset)
      .def_readwrite("energy_capacity_kwh", &BatteryModel::energy_capacity_kwh)
      .def_readwrite("charge_capacity_ah", &BatteryModel::charge_capacity_ah)
      .def_readwrite("round_trip_efficiency", &BatteryModel::round_trip_efficiency)
      .def_readwrite("r_charge_ohm", &BatteryModel::r_charge_ohm)
      .def_readwrite("r_discharge_ohm", &BatteryModel::r_discharge_ohm)
      .def_readwrite("max_c_rate", &BatteryModel::max_c_rate)
      .def_readwrite("soc_min", &BatteryModel::soc_min)
      .def_readwrite("soc_max", &BatteryModel::soc_max)
      .def_readwrite("soc_ini", &BatteryModel::soc_ini)
      .def_readwrite("efficiency_mode", &BatteryModel::efficiency_mode)
      .def("nominal_voltage", &BatteryModel::nominal_voltage)
      .def("power_limit_kw", &BatteryModel::power_limit_kw);

  m.def("circuit_efficiency", &circuit_efficiency, py::arg("battery"), py::arg("i_bat"),
        py::arg("direction"));

  // ---- scenarios -----------------------------------------------------------
  py::class_<ScenarioSample>(m, "ScenarioSample")
      .def(py::init<>())
      .def_readwrite("timestamp", &ScenarioSample::timestamp)
      .def_readwrite("production_kw", &ScenarioSample::production_kw)
      .def_readwrite("demand_kw", &ScenarioSample::demand_kw)
      .def_readwrite("c_buy", &ScenarioSample::c_buy)
      .def_readwrite("c_sell", &ScenarioSample::c_sell);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("dt_hours", &Scenario::dt_hours)
      .def_readwrite("samples", &Scenario::samples)
      .def("validate", &Scenario::validate)
      .def("__len__", [](const Scenario& s) { return s.samples.size(); });

  py::class_<SynthParams>(m, "SynthParams")
      .def(py::init<>())
      .def_readwrite("pv_peak_kw", &SynthParams::pv_peak_kw)
      .def_readwrite("wind_mean_kw", &SynthParams::wind_mean_kw)
      .def_readwrite("demand_base_kw", &SynthParams::demand_base_kw)
      .def_readwrite("morning_peak_kw", &SynthParams::morning_peak_kw)
      .def_readwrite("evening_peak_kw", &SynthParams::evening_peak_kw)
      .def_readwrite("noise_level", &SynthParams::noise_level)
      .def_readwrite("c_buy_day", &SynthParams::c_buy_day)
      .def_readwrite("c_buy_night", &SynthParams::c_buy_night)
      .def_readwrite("c_sell_day", &SynthParams::c_sell_day)
      .def_readwrite("c_sell_night", &SynthParams::c_sell_night);

  py::class_<Range>(m, "Range")
      .def(py::init<>())
      .def_readwrite("lo", &Range::lo)
      .def_readwrite("hi", &Range::hi)
      .def("degenerate", &Range::degenerate);

  py::class_<NormalizationRanges>(m, "NormalizationRanges")
      .def(py::init<>())
      .def_readwrite("balance", &NormalizationRanges::balance)
      .def_readwrite("c_buy", &NormalizationRanges::c_buy)
      .def_readwrite("c_sell", &NormalizationRanges::c_sell);

  m.def("synth_scenario", &synth_scenario, py::arg("days"), py::arg("seed"),
        py::arg("params") = SynthParams{});
  m.def("load_scenario", &load_scenario);
  m.def("save_scenario", &save_scenario);
  m.def("split_train_test", &split_train_test);
  m.def("extract_ranges", &extract_ranges);
  m.def("no_storage_profit", &no_storage_profit);

  // ---- simulation ----------------------------------------------------------
  py::enum_<Action>(m, "Action")
      .value("ForcedCharge", Action::ForcedCharge)
      .value("ForcedSell", Action::ForcedSell)
      .value("ForcedBuy", Action::ForcedBuy)
      .value("FuzzyAlpha", Action::FuzzyAlpha)
      .value("FuzzyBeta", Action::FuzzyBeta)
      .value("Idle", Action::Idle);

  py::class_<StepLedger>(m, "StepLedger")
      .def_readonly("t", &StepLedger::t)
      .def_readonly("balance_kw", &StepLedger::balance_kw)
      .def_readonly("soc", &StepLedger::soc)
      .def_readonly("e_sold", &StepLedger::e_sold)
      .def_readonly("e_bought", &StepLedger::e_bought)
      .def_readonly("e_charged", &StepLedger::e_charged)
      .def_readonly("e_discharged", &StepLedger::e_discharged)
      .def_readonly("revenue", &StepLedger::revenue)
      .def_readonly("expense", &StepLedger::expense)
      .def_readonly("profit", &StepLedger::profit)
      .def_readonly("action", &StepLedger::action)
      .def_readonly("control_value", &StepLedger::control_value);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("total_profit", &SimResult::total_profit)
      .def_readonly("total_revenue", &SimResult::total_revenue)
      .def_readonly("total_expense", &SimResult::total_expense)
      .def_readonly("ledger", &SimResult::ledger);

  m.def(
      "simulate",
      [](const Scenario& scenario, const BatteryModel& batt, const FuzzyController& fc,
         const NormalizationRanges& ranges) {
        const auto shared = std::make_shared<const FuzzyController>(fc);
        py::gil_scoped_release release;
        return simulate(scenario, batt, fuzzy_policy(shared), ranges);
      },
      py::arg("scenario"), py::arg("battery"), py::arg("controller"), py::arg("ranges"));
  m.def(
      "simulate_constant",
      [](const Scenario& scenario, const BatteryModel& batt, double alpha, double beta,
         const NormalizationRanges& ranges) {
        py::gil_scoped_release release;
        return simulate(scenario, batt, constant_policy(alpha, beta), ranges);
      },
      py::arg("scenario"), py::arg("battery"), py::arg("alpha"), py::arg("beta"),
      py::arg("ranges"));
  m.def("save_ledger_csv", &save_ledger_csv);
  m.def("load_ledger_csv", &load_ledger_csv);

  // ---- evolution -------------------------------------------------------------
  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &EvolutionConfig::population_size)
      .def_readwrite("generations", &EvolutionConfig::generations)
      .def_readwrite("crossover_fraction", &EvolutionConfig::crossover_fraction)
      .def_readwrite("mutation_rate", &EvolutionConfig::mutation_rate)
      .def_readwrite("decay_exponent", &EvolutionConfig::decay_exponent)
      .def_readwrite("elite_count", &EvolutionConfig::elite_count)
      .def_readwrite("master_seed", &EvolutionConfig::master_seed)
      .def_readwrite("threads", &EvolutionConfig::threads);

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("best_fitness", &GenerationStats::best_fitness)
      .def_readonly("mean_fitness", &GenerationStats::mean_fitness)
      .def_readonly("best", &GenerationStats::best);

  py::class_<RunHistory>(m, "RunHistory")
      .def_readonly("generations", &RunHistory::generations)
      .def_readonly("final_best", &RunHistory::final_best)
      .def_readonly("final_best_fitness", &RunHistory::final_best_fitness);

  m.def(
      "evolve",
      [](const EvolutionConfig& config, Scheme scheme, const GeneBounds& bounds,
         const std::function<double(const Chromosome&)>& fitness) {
        EvolutionConfig cfg = config;
        cfg.threads = 1;  // python callbacks hold the GIL
        return evolve(cfg, scheme, bounds, fitness);
      },
      py::arg("config"), py::arg("scheme"), py::arg("bounds"), py::arg("fitness"));

  m.def(
      "train_profit",
      [](const EvolutionConfig& config, Scheme scheme, const Scenario& train,
         const BatteryModel& batt, const NormalizationRanges& ranges) {
        py::gil_scoped_release release;
        return evolve(config, scheme, default_bounds(scheme),
                      make_profit_fitness(scheme, train, batt, ranges));
      },
      py::arg("config"), py::arg("scheme"), py::arg("train"), py::arg("battery"),
      py::arg("ranges"),
      "run the GA against the trading-profit fitness on a training series");

  // ---- selected operators (exposed for experimentation) ---------------------
  m.def("stochastic_uniform_selection",
        [](const std::vector<double>& f, std::size_t n, std::uint64_t seed) {
          return stochastic_uniform_selection(f, n, seed);
        });
  m.def("non_uniform_mutation", &non_uniform_mutation);
  m.def("convex_crossover_real", &convex_crossover_real);
  m.def("one_point_crossover_binary", &one_point_crossover_binary);

  // ---- error mapping ----------------------------------------------------------
  py::register_exception<NoRuleFired>(m, "NoRuleFiredError");
  py::register_exception<CodecError>(m, "CodecError");
  py::register_exception<IngestError>(m, "IngestError");
}
