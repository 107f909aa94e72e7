#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gridfuzz/battery.hpp"
#include "gridfuzz/fis.hpp"
#include "gridfuzz/scenario.hpp"

namespace gridfuzz {

/// Controller-level view of the grid at one time slot.
struct MgState {
  double balance_kw = 0.0;
  double soc = 0.0;
  double c_buy = 0.0;
  double c_sell = 0.0;
};

double balance(double p_agg_kw, double d_agg_kw);

enum class Action { ForcedCharge, ForcedSell, ForcedBuy, FuzzyAlpha, FuzzyBeta, Idle };

/// Route the state: SOC below the admissible floor forces a recharge;
/// a saturated store forces selling the whole surplus and an empty one
/// buying the whole deficit; otherwise the surplus/deficit split is
/// delegated to the alpha/beta inference.
Action classify(const MgState& state, const BatteryModel& batt);

/// Per-step record; energy fields are magnitudes, direction lives in the
/// action tag.
struct StepLedger {
  int t = 0;
  double balance_kw = 0.0;
  double soc = 0.0;  // after the step
  double e_sold = 0.0;
  double e_bought = 0.0;
  double e_charged = 0.0;
  double e_discharged = 0.0;
  double revenue = 0.0;
  double expense = 0.0;
  double profit = 0.0;
  Action action = Action::Idle;
  double control_value = 0.0;  // alpha or beta when the action is fuzzy
};

std::string action_tag(const StepLedger& row);

/// The split decisions feeding the simulation: alpha = sold fraction of a
/// surplus, beta = purchased fraction of a deficit, both over normalized
/// (balance, SOC, price) inputs.
struct ControlPolicy {
  std::function<double(const std::array<double, 3>&)> alpha;
  std::function<double(const std::array<double, 3>&)> beta;
};

/// alpha = beta = 1: trade everything with the main grid, touch no storage.
ControlPolicy grid_only_policy();
ControlPolicy constant_policy(double alpha, double beta);

/// Wraps the two FISs. A degenerate FIS or an inference where no rule fires
/// falls back to the pure-grid action (fraction 1).
ControlPolicy fuzzy_policy(std::shared_ptr<const FuzzyController> controller);

std::array<double, 3> normalize_inputs(double bal_kw, double soc, double price, const Range& bal_range,
                                       const Range& price_range, const Range& soc_range);

/// One simulation step. Dispatches on classify(), moves energy through the
/// battery, and settles the cash flows. Battery clamping overflow or
/// shortfall is routed to the grid within the same step, so the terminal
/// energy balance always closes.
StepLedger step(const ScenarioSample& sample, double dt_hours, const BatteryModel& batt,
                BatteryState& bstate, const ControlPolicy& policy, const NormalizationRanges& ranges,
                int t);

struct SimResult {
  double total_profit = 0.0;
  double total_revenue = 0.0;
  double total_expense = 0.0;
  std::vector<StepLedger> ledger;
};

/// Fold of step() over the scenario from the model's initial SOC.
/// Pure in all arguments; safe to run concurrently.
SimResult simulate(const Scenario& scenario, const BatteryModel& batt, const ControlPolicy& policy,
                   const NormalizationRanges& ranges);

/// Profit of the alpha=beta=1 policy in closed form; the simulate()
/// counterpart must reproduce it exactly.
double no_storage_profit(const Scenario& scenario);

/// Ledger CSV: t,balance_kw,soc,e_sold,e_bought,e_charged,e_discharged,
/// revenue,expense,profit,action_tag
void save_ledger_csv(const std::vector<StepLedger>& ledger, const std::string& path);
std::vector<StepLedger> load_ledger_csv(const std::string& path);

}  // namespace gridfuzz
