#include "gridfuzz/reporting.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "gridfuzz/errors.hpp"

namespace gridfuzz {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_history_csv(const RunHistory& history, Scheme scheme, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write history file: " + path);
  out << "generation,best,mean,active_rules_alpha,active_rules_beta\n";
  for (std::size_t g = 0; g < history.generations.size(); ++g) {
    const auto& row = history.generations[g];
    const auto fc = decode(scheme, row.best);
    out << g + 1 << ',' << fmt(row.best_fitness) << ',' << fmt(row.mean_fitness) << ','
        << active_rule_count(fc.alpha) << ',' << active_rule_count(fc.beta) << '\n';
  }
}

void write_checkpoint(const Chromosome& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint file: " + path);
  out << chromosome_to_line(c) << '\n';
}

Chromosome read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty checkpoint file: " + path);
  return chromosome_from_line(line);
}

void write_summary_csv(const EvaluationSummary& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write summary file: " + path);
  out << "metric,value\n";
  out << "expense_mu," << fmt(s.expense) << '\n';
  out << "revenue_mu," << fmt(s.revenue) << '\n';
  out << "profit_mu," << fmt(s.profit) << '\n';
  out << "fis_rules_alpha," << s.rules_alpha << '\n';
  out << "fis_rules_beta," << s.rules_beta << '\n';
}

void write_report_files(const std::vector<StepLedger>& ledger, double dt_hours,
                        const std::string& out_dir) {
  if (!(dt_hours > 0.0)) throw Error("report needs a positive dt");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  const int steps_per_day = std::max(1, static_cast<int>(std::lround(24.0 / dt_hours)));

  struct DayAgg {
    double e_sold = 0, e_bought = 0, e_charged = 0, e_discharged = 0;
    double revenue = 0, expense = 0, profit = 0;
  };
  std::map<int, DayAgg> days;
  for (const auto& r : ledger) {
    auto& d = days[r.t / steps_per_day];
    d.e_sold += r.e_sold;
    d.e_bought += r.e_bought;
    d.e_charged += r.e_charged;
    d.e_discharged += r.e_discharged;
    d.revenue += r.revenue;
    d.expense += r.expense;
    d.profit += r.profit;
  }

  {
    std::ofstream out(path("daily.csv"), std::ios::binary);
    if (!out) throw Error("cannot write daily report");
    out << "day,e_sold,e_bought,e_charged,e_discharged,revenue,expense,profit\n";
    for (const auto& [day, d] : days)
      out << day << ',' << fmt(d.e_sold) << ',' << fmt(d.e_bought) << ',' << fmt(d.e_charged) << ','
          << fmt(d.e_discharged) << ',' << fmt(d.revenue) << ',' << fmt(d.expense) << ','
          << fmt(d.profit) << '\n';
  }
  {
    std::ofstream out(path("soc_series.csv"), std::ios::binary);
    if (!out) throw Error("cannot write soc series");
    out << "t,soc\n";
    for (const auto& r : ledger) out << r.t << ',' << fmt(r.soc) << '\n';
  }
  {
    std::ofstream out(path("flows_series.csv"), std::ios::binary);
    if (!out) throw Error("cannot write flows series");
    out << "t,balance_kw,e_sold,e_bought,e_charged,e_discharged\n";
    for (const auto& r : ledger)
      out << r.t << ',' << fmt(r.balance_kw) << ',' << fmt(r.e_sold) << ',' << fmt(r.e_bought) << ','
          << fmt(r.e_charged) << ',' << fmt(r.e_discharged) << '\n';
  }
  {
    std::ofstream out(path("cash_series.csv"), std::ios::binary);
    if (!out) throw Error("cannot write cash series");
    out << "t,revenue,expense,profit\n";
    for (const auto& r : ledger)
      out << r.t << ',' << fmt(r.revenue) << ',' << fmt(r.expense) << ',' << fmt(r.profit) << '\n';
  }
}

}  // namespace gridfuzz
