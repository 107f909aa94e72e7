#pragma once

#include <string>

namespace gridfuzz {

enum class EfficiencyMode { FixedRoundTrip, CircuitComputed };
enum class FlowDirection { Charge, Discharge };

/// Storage model: energy bookkeeping plus the equivalent-circuit constants
/// (open-circuit voltage derived from capacity ratings, internal resistance
/// split by flow direction, C-rate current limit).
struct BatteryModel {
  double energy_capacity_kwh = 24.0;
  double charge_capacity_ah = 80.0;
  double round_trip_efficiency = 0.9;
  double r_charge_ohm = 0.0015;
  double r_discharge_ohm = 0.0015;
  double max_c_rate = 8.0;  // 1/h
  double soc_min = 0.15;
  double soc_max = 1.0;
  double soc_ini = 0.80;
  EfficiencyMode efficiency_mode = EfficiencyMode::FixedRoundTrip;

  double nominal_voltage() const { return energy_capacity_kwh * 1000.0 / charge_capacity_ah; }
  double power_limit_kw() const { return max_c_rate * charge_capacity_ah * nominal_voltage() / 1000.0; }

  void validate() const;  // throws ModelRangeError

  /// Table-driven presets for the two evaluated device configurations.
  static BatteryModel config1();
  static BatteryModel config2();
  static BatteryModel preset(const std::string& name);
};

struct BatteryState {
  double soc = 0.0;
};

/// Per-direction efficiency from the equivalent circuit at battery current
/// i_bat (A): charging eta = V/(V + R_ch*i), discharging
/// eta = (V - R_dis*i)/V. Throws ModelRangeError outside the validity range.
double circuit_efficiency(const BatteryModel& batt, double i_bat, FlowDirection dir);

struct FlowResult {
  double energy_kwh = 0.0;  // absorbed or delivered at the terminals
  BatteryState state;
  double eta = 1.0;  // per-direction efficiency actually applied
};

/// Offer energy at the terminals; the battery absorbs at most the
/// SOC headroom (expressed at the terminals) and the C-rate power limit.
FlowResult battery_charge(const BatteryModel& batt, BatteryState state, double e_offered_kwh,
                          double dt_hours);

/// Request energy at the terminals; delivery is capped by the charge above
/// soc_min (scaled by the discharge efficiency) and the power limit.
FlowResult battery_discharge(const BatteryModel& batt, BatteryState state, double e_requested_kwh,
                             double dt_hours);

/// Terminal energy that battery_charge must be offered to raise the SOC to
/// target_soc in one step, inverting the mode's efficiency (power limit not
/// considered; the charge call still applies it).
double charge_need_terminal(const BatteryModel& batt, BatteryState state, double target_soc,
                            double dt_hours);

}  // namespace gridfuzz
