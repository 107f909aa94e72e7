#pragma once

#include <string>
#include <vector>

#include "gridfuzz/codec.hpp"
#include "gridfuzz/evolution.hpp"
#include "gridfuzz/microgrid.hpp"

namespace gridfuzz {

/// Per-generation CSV: generation,best,mean,active_rules_alpha,active_rules_beta
void write_history_csv(const RunHistory& history, Scheme scheme, const std::string& path);

/// Single-line checkpoint holding the best chromosome.
void write_checkpoint(const Chromosome& c, const std::string& path);
Chromosome read_checkpoint(const std::string& path);

struct EvaluationSummary {
  double expense = 0.0;
  double revenue = 0.0;
  double profit = 0.0;
  std::size_t rules_alpha = 0;
  std::size_t rules_beta = 0;
};

void write_summary_csv(const EvaluationSummary& s, const std::string& path);

/// Plot-data emission from a ledger: per-day aggregates plus the SOC,
/// energy-flow and cash time series.
void write_report_files(const std::vector<StepLedger>& ledger, double dt_hours,
                        const std::string& out_dir);

}  // namespace gridfuzz
