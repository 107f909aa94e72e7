#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gridfuzz {

struct ScenarioSample {
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  double production_kw = 0.0;
  double demand_kw = 0.0;
  double c_buy = 0.0;   // MU/kWh
  double c_sell = 0.0;  // MU/kWh
  bool operator==(const ScenarioSample&) const = default;
};

/// Uniformly spaced aggregate time series: production, demand, and the two
/// tariff signals, one row per slot.
struct Scenario {
  double dt_hours = 0.25;
  std::vector<ScenarioSample> samples;
  bool operator==(const Scenario&) const = default;

  void validate() const;  // throws IngestError on any invariant violation
};

std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t timestamp);

/// CSV interchange. Header:
/// timestamp_iso8601,production_kw,demand_kw,c_buy_mu_per_kwh,c_sell_mu_per_kwh
/// Loading validates spacing, sign constraints and column layout; errors
/// name the offending row. Values round-trip bit-exactly through save/load.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// Odd-positioned samples (1st, 3rd, ...) become the training series, the
/// even-positioned ones the test series. Both are re-timed onto the nominal
/// dt so each half simulates as a contiguous scenario.
std::pair<Scenario, Scenario> split_train_test(const Scenario& s);

/// Synthetic profile knobs: PV is a daylight sinusoid under a per-day
/// weather factor, wind a mean-reverting process running day and night,
/// demand a double-peak residential curve, and the tariff a two-level
/// multi-hour schedule with the high window during the day.
struct SynthParams {
  double pv_peak_kw = 12.0;
  double wind_mean_kw = 6.0;
  double demand_base_kw = 4.0;
  double morning_peak_kw = 6.0;
  double evening_peak_kw = 8.0;
  double noise_level = 0.08;  // relative
  double c_buy_day = 0.32;
  double c_buy_night = 0.12;
  double c_sell_day = 0.25;
  double c_sell_night = 0.05;
  double day_start_hour = 8.0;
  double day_end_hour = 20.0;
  std::int64_t start_timestamp = 1704067200;  // 2024-01-01T00:00:00
};

Scenario synth_scenario(int days, std::uint64_t seed, const SynthParams& params = {});

/// Min/max of the training signals used to map controller inputs onto
/// [0,1]. A degenerate (constant) signal is flagged; normalization maps it
/// to 0.5.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate() const { return !(lo < hi); }
};

struct NormalizationRanges {
  Range balance;
  Range c_buy;
  Range c_sell;
};

NormalizationRanges extract_ranges(const Scenario& train);

/// Min-max map clamped to [0,1]; degenerate ranges map to 0.5.
double normalize(double x, const Range& r);

}  // namespace gridfuzz
