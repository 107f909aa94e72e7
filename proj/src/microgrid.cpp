#include "gridfuzz/microgrid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridfuzz/errors.hpp"

namespace gridfuzz {

double balance(double p_agg_kw, double d_agg_kw) { return p_agg_kw - d_agg_kw; }

Action classify(const MgState& state, const BatteryModel& batt) {
  if (state.soc < batt.soc_min) return Action::ForcedCharge;
  if (state.balance_kw > 0.0 && state.soc >= batt.soc_max) return Action::ForcedSell;
  if (state.balance_kw < 0.0 && state.soc <= batt.soc_min) return Action::ForcedBuy;
  if (state.balance_kw == 0.0) return Action::Idle;
  return state.balance_kw > 0.0 ? Action::FuzzyAlpha : Action::FuzzyBeta;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string action_tag(const StepLedger& row) {
  switch (row.action) {
    case Action::ForcedCharge: return "forced_charge";
    case Action::ForcedSell: return "forced_sell";
    case Action::ForcedBuy: return "forced_buy";
    case Action::FuzzyAlpha: return "fuzzy_alpha(" + format_double(row.control_value) + ")";
    case Action::FuzzyBeta: return "fuzzy_beta(" + format_double(row.control_value) + ")";
    case Action::Idle: return "idle";
  }
  return "idle";
}

ControlPolicy grid_only_policy() { return constant_policy(1.0, 1.0); }

ControlPolicy constant_policy(double alpha, double beta) {
  ControlPolicy p;
  p.alpha = [alpha](const std::array<double, 3>&) { return alpha; };
  p.beta = [beta](const std::array<double, 3>&) { return beta; };
  return p;
}

ControlPolicy fuzzy_policy(std::shared_ptr<const FuzzyController> controller) {
  struct Hold {
    std::shared_ptr<const FuzzyController> fc;
    FisEvaluator alpha;
    FisEvaluator beta;
    bool alpha_degenerate;
    bool beta_degenerate;
  };
  auto hold = std::make_shared<Hold>(Hold{controller, FisEvaluator(controller->alpha),
                                          FisEvaluator(controller->beta),
                                          fis_degenerate(controller->alpha),
                                          fis_degenerate(controller->beta)});
  ControlPolicy p;
  p.alpha = [hold](const std::array<double, 3>& in) {
    if (hold->alpha_degenerate) return 1.0;
    try {
      return hold->alpha.infer(in);
    } catch (const NoRuleFired&) {
      return 1.0;  // fall back to the pure-grid action
    }
  };
  p.beta = [hold](const std::array<double, 3>& in) {
    if (hold->beta_degenerate) return 1.0;
    try {
      return hold->beta.infer(in);
    } catch (const NoRuleFired&) {
      return 1.0;
    }
  };
  return p;
}

std::array<double, 3> normalize_inputs(double bal_kw, double soc, double price, const Range& bal_range,
                                       const Range& price_range, const Range& soc_range) {
  return {normalize(bal_kw, bal_range), normalize(soc, soc_range), normalize(price, price_range)};
}

StepLedger step(const ScenarioSample& sample, double dt_hours, const BatteryModel& batt,
                BatteryState& bstate, const ControlPolicy& policy, const NormalizationRanges& ranges,
                int t) {
  StepLedger row;
  row.t = t;
  const double bal = balance(sample.production_kw, sample.demand_kw);
  row.balance_kw = bal;

  const MgState state{bal, bstate.soc, sample.c_buy, sample.c_sell};
  row.action = classify(state, batt);
  const Range soc_range{batt.soc_min, batt.soc_max};

  switch (row.action) {
    case Action::ForcedCharge: {
      // bring the store back to the admissible floor, buying what the
      // local balance cannot cover
      const double need_terminal = charge_need_terminal(batt, bstate, batt.soc_min, dt_hours);
      const auto res = battery_charge(batt, bstate, need_terminal, dt_hours);
      bstate = res.state;
      row.e_charged = res.energy_kwh;
      row.e_bought = res.energy_kwh + std::max(-bal, 0.0) * dt_hours;
      row.e_sold = std::max(bal, 0.0) * dt_hours;
      break;
    }
    case Action::ForcedSell:
      row.e_sold = bal * dt_hours;
      break;
    case Action::ForcedBuy:
      row.e_bought = -bal * dt_hours;
      break;
    case Action::Idle:
      break;
    case Action::FuzzyAlpha: {
      const auto inputs =
          normalize_inputs(bal, bstate.soc, sample.c_sell, ranges.balance, ranges.c_sell, soc_range);
      const double alpha = std::clamp(policy.alpha(inputs), 0.0, 1.0);
      row.control_value = alpha;
      const double surplus = bal * dt_hours;
      const double offer = (1.0 - alpha) * surplus;
      const auto res = battery_charge(batt, bstate, offer, dt_hours);
      bstate = res.state;
      row.e_charged = res.energy_kwh;
      // whatever the battery could not take goes to the grid in-step
      row.e_sold = alpha * surplus + (offer - res.energy_kwh);
      break;
    }
    case Action::FuzzyBeta: {
      const auto inputs =
          normalize_inputs(bal, bstate.soc, sample.c_buy, ranges.balance, ranges.c_buy, soc_range);
      const double beta = std::clamp(policy.beta(inputs), 0.0, 1.0);
      row.control_value = beta;
      const double deficit = -bal * dt_hours;
      const double request = (1.0 - beta) * deficit;
      const auto res = battery_discharge(batt, bstate, request, dt_hours);
      bstate = res.state;
      row.e_discharged = res.energy_kwh;
      row.e_bought = beta * deficit + (request - res.energy_kwh);
      break;
    }
  }

  row.soc = bstate.soc;
  row.revenue = sample.c_sell * row.e_sold;
  row.expense = sample.c_buy * row.e_bought;
  row.profit = row.revenue - row.expense;
  return row;
}

SimResult simulate(const Scenario& scenario, const BatteryModel& batt, const ControlPolicy& policy,
                   const NormalizationRanges& ranges) {
  if (scenario.samples.empty()) throw IngestError("cannot simulate an empty scenario");
  batt.validate();
  SimResult out;
  out.ledger.reserve(scenario.samples.size());
  BatteryState bstate{batt.soc_ini};
  for (std::size_t i = 0; i < scenario.samples.size(); ++i) {
    const StepLedger row =
        step(scenario.samples[i], scenario.dt_hours, batt, bstate, policy, ranges, static_cast<int>(i));
    out.total_profit += row.profit;
    out.total_revenue += row.revenue;
    out.total_expense += row.expense;
    out.ledger.push_back(row);
  }
  return out;
}

double no_storage_profit(const Scenario& scenario) {
  double total = 0.0;
  for (const auto& s : scenario.samples) {
    const double bal = balance(s.production_kw, s.demand_kw);
    if (bal > 0.0)
      total += s.c_sell * (bal * scenario.dt_hours);
    else if (bal < 0.0)
      total -= s.c_buy * (-bal * scenario.dt_hours);
  }
  return total;
}

void save_ledger_csv(const std::vector<StepLedger>& ledger, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write ledger file: " + path);
  out << "t,balance_kw,soc,e_sold,e_bought,e_charged,e_discharged,revenue,expense,profit,action_tag\n";
  for (const auto& r : ledger) {
    out << r.t << ',' << format_double(r.balance_kw) << ',' << format_double(r.soc) << ','
        << format_double(r.e_sold) << ',' << format_double(r.e_bought) << ','
        << format_double(r.e_charged) << ',' << format_double(r.e_discharged) << ','
        << format_double(r.revenue) << ',' << format_double(r.expense) << ','
        << format_double(r.profit) << ',' << action_tag(r) << '\n';
  }
}

std::vector<StepLedger> load_ledger_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open ledger file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty ledger file: " + path);
  std::vector<StepLedger> out;
  std::size_t rowno = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rowno;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cols.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 11) {
      std::ostringstream os;
      os << "row " << rowno << ": expected 11 columns, got " << cols.size();
      throw IngestError(os.str());
    }
    StepLedger r;
    const auto num = [&](int c, const char* name) {
      double v = 0.0;
      const auto& tok = cols[static_cast<std::size_t>(c)];
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        std::ostringstream os;
        os << "row " << rowno << ": malformed " << name << " value '" << tok << "'";
        throw IngestError(os.str());
      }
      return v;
    };
    r.t = static_cast<int>(num(0, "t"));
    r.balance_kw = num(1, "balance_kw");
    r.soc = num(2, "soc");
    r.e_sold = num(3, "e_sold");
    r.e_bought = num(4, "e_bought");
    r.e_charged = num(5, "e_charged");
    r.e_discharged = num(6, "e_discharged");
    r.revenue = num(7, "revenue");
    r.expense = num(8, "expense");
    r.profit = num(9, "profit");
    const auto& tag = cols[10];
    if (tag == "forced_charge") r.action = Action::ForcedCharge;
    else if (tag == "forced_sell") r.action = Action::ForcedSell;
    else if (tag == "forced_buy") r.action = Action::ForcedBuy;
    else if (tag == "idle") r.action = Action::Idle;
    else if (tag.rfind("fuzzy_alpha(", 0) == 0) r.action = Action::FuzzyAlpha;
    else if (tag.rfind("fuzzy_beta(", 0) == 0) r.action = Action::FuzzyBeta;
    else {
      std::ostringstream os;
      os << "row " << rowno << ": unknown action tag '" << tag << "'";
      throw IngestError(os.str());
    }
    if (r.action == Action::FuzzyAlpha || r.action == Action::FuzzyBeta) {
      const auto open = tag.find('(');
      const auto close = tag.find(')');
      if (close == std::string::npos || close <= open + 1) {
        std::ostringstream os;
        os << "row " << rowno << ": malformed action tag '" << tag << "'";
        throw IngestError(os.str());
      }
      const std::string inner = tag.substr(open + 1, close - open - 1);
      const auto res = std::from_chars(inner.data(), inner.data() + inner.size(), r.control_value);
      if (res.ec != std::errc{}) {
        std::ostringstream os;
        os << "row " << rowno << ": malformed control value in '" << tag << "'";
        throw IngestError(os.str());
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gridfuzz
