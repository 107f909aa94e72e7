#include "gridfuzz/battery.hpp"

#include <algorithm>
#include <cmath>

#include "gridfuzz/errors.hpp"

namespace gridfuzz {

void BatteryModel::validate() const {
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
    throw ModelRangeError("SOC bounds must satisfy 0 <= soc_min < soc_max <= 1");
  if (!(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0))
    throw ModelRangeError("round-trip efficiency must be in (0,1]");
  if (!(charge_capacity_ah > 0.0 && energy_capacity_kwh > 0.0))
    throw ModelRangeError("capacities must be positive");
  if (!(r_charge_ohm > 0.0 && r_discharge_ohm > 0.0))
    throw ModelRangeError("internal resistance must be positive");
  if (!(max_c_rate > 0.0)) throw ModelRangeError("C-rate limit must be positive");
  if (!(soc_ini >= 0.0 && soc_ini <= 1.0)) throw ModelRangeError("initial SOC outside [0,1]");
}

BatteryModel BatteryModel::config1() {
  BatteryModel b;
  b.round_trip_efficiency = 0.86;
  b.r_charge_ohm = 0.002;
  b.r_discharge_ohm = 0.002;
  b.soc_ini = 0.40;
  b.soc_min = 0.0;
  return b;
}

BatteryModel BatteryModel::config2() {
  BatteryModel b;
  b.round_trip_efficiency = 0.90;
  b.r_charge_ohm = 0.0015;
  b.r_discharge_ohm = 0.0015;
  b.soc_ini = 0.80;
  b.soc_min = 0.15;
  return b;
}

BatteryModel BatteryModel::preset(const std::string& name) {
  if (name == "config1") return config1();
  if (name == "config2") return config2();
  throw ModelRangeError("unknown battery preset: " + name);
}

double circuit_efficiency(const BatteryModel& batt, double i_bat, FlowDirection dir) {
  const double v = batt.nominal_voltage();
  if (dir == FlowDirection::Charge) {
    const double den = v + batt.r_charge_ohm * i_bat;
    if (!(den > 0.0)) throw ModelRangeError("charge efficiency undefined: nonpositive denominator");
    return v / den;
  }
  const double num = v - batt.r_discharge_ohm * i_bat;
  if (!(num > 0.0)) throw ModelRangeError("discharge current exceeds the circuit model range");
  return num / v;
}

namespace {

double direction_efficiency(const BatteryModel& batt, double terminal_power_kw, FlowDirection dir) {
  if (batt.efficiency_mode == EfficiencyMode::FixedRoundTrip)
    return std::sqrt(batt.round_trip_efficiency);
  // circuit mode: current taken at the power-clamped terminal flow
  const double i_bat = terminal_power_kw * 1000.0 / batt.nominal_voltage();
  return circuit_efficiency(batt, i_bat, dir);
}

}  // namespace

FlowResult battery_charge(const BatteryModel& batt, BatteryState state, double e_offered_kwh,
                          double dt_hours) {
  if (e_offered_kwh < 0.0) throw ModelRangeError("negative energy offered to battery");
  FlowResult out;
  out.state = state;
  const double e_cap = std::min(e_offered_kwh, batt.power_limit_kw() * dt_hours);
  const double eta = direction_efficiency(batt, dt_hours > 0.0 ? e_cap / dt_hours : 0.0,
                                          FlowDirection::Charge);
  out.eta = eta;
  const double headroom_terminal = (batt.soc_max - state.soc) * batt.energy_capacity_kwh / eta;
  if (headroom_terminal <= 0.0) return out;
  if (e_cap >= headroom_terminal) {
    out.energy_kwh = headroom_terminal;
    out.state.soc = batt.soc_max;  // exact saturation, no fp drift
  } else {
    out.energy_kwh = e_cap;
    out.state.soc = state.soc + eta * e_cap / batt.energy_capacity_kwh;
  }
  return out;
}

double charge_need_terminal(const BatteryModel& batt, BatteryState state, double target_soc,
                            double dt_hours) {
  const double gap_internal = (target_soc - state.soc) * batt.energy_capacity_kwh;
  if (gap_internal <= 0.0) return 0.0;
  if (batt.efficiency_mode == EfficiencyMode::FixedRoundTrip)
    return gap_internal / std::sqrt(batt.round_trip_efficiency);
  // circuit mode: eta depends on the terminal power, solve
  // e * eta(e/dt) = gap for e in closed form
  const double v = batt.nominal_voltage();
  const double k = batt.r_charge_ohm * 1000.0 / (v * v * dt_hours);
  const double den = 1.0 - k * gap_internal;
  if (den <= 0.0) return batt.power_limit_kw() * dt_hours;  // out of one-step range anyway
  return gap_internal / den;
}

FlowResult battery_discharge(const BatteryModel& batt, BatteryState state, double e_requested_kwh,
                             double dt_hours) {
  if (e_requested_kwh < 0.0) throw ModelRangeError("negative energy requested from battery");
  FlowResult out;
  out.state = state;
  const double e_cap = std::min(e_requested_kwh, batt.power_limit_kw() * dt_hours);
  const double eta = direction_efficiency(batt, dt_hours > 0.0 ? e_cap / dt_hours : 0.0,
                                          FlowDirection::Discharge);
  out.eta = eta;
  const double available_terminal = (state.soc - batt.soc_min) * batt.energy_capacity_kwh * eta;
  if (available_terminal <= 0.0) return out;
  if (e_cap >= available_terminal) {
    out.energy_kwh = available_terminal;
    out.state.soc = batt.soc_min;  // exact depletion to the floor
  } else {
    out.energy_kwh = e_cap;
    out.state.soc = state.soc - e_cap / (eta * batt.energy_capacity_kwh);
  }
  return out;
}

}  // namespace gridfuzz
