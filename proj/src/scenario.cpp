#include "gridfuzz/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gridfuzz/errors.hpp"
#include "gridfuzz/rng.hpp"

namespace gridfuzz {

namespace {

// civil-calendar <-> day-count conversion (Howard Hinnant's algorithms)
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, std::size_t row, const char* column) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    std::ostringstream os;
    os << "row " << row << ": malformed " << column << " value '" << tok << "'";
    throw IngestError(os.str());
  }
  return v;
}

constexpr const char* kHeader =
    "timestamp_iso8601,production_kw,demand_kw,c_buy_mu_per_kwh,c_sell_mu_per_kwh";

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
  int y, mo, d, h, mi, s;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d", &y, &mo, &d, &h, &mi, &s) != 6)
    throw IngestError("malformed ISO-8601 timestamp: " + text);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
    throw IngestError("timestamp field out of range: " + text);
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t timestamp) {
  std::int64_t days = timestamp / 86400;
  std::int64_t rem = timestamp % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02lld:%02lld:%02lld", y, m, d,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem % 3600) / 60),
                static_cast<long long>(rem % 60));
  return buf;
}

void Scenario::validate() const {
  if (samples.empty()) throw IngestError("scenario has no samples");
  if (!(dt_hours > 0.0)) throw IngestError("scenario dt must be positive");
  const auto spacing = static_cast<std::int64_t>(std::llround(dt_hours * 3600.0));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    std::ostringstream os;
    if (s.production_kw < 0.0 || s.demand_kw < 0.0) {
      os << "row " << i + 1 << ": negative power";
      throw IngestError(os.str());
    }
    if (!(s.c_buy > 0.0) || !(s.c_sell > 0.0)) {
      os << "row " << i + 1 << ": prices must be positive";
      throw IngestError(os.str());
    }
    if (i > 0 && s.timestamp - samples[i - 1].timestamp != spacing) {
      os << "row " << i + 1 << ": non-uniform spacing (expected " << spacing << " s, got "
         << s.timestamp - samples[i - 1].timestamp << " s)";
      throw IngestError(os.str());
    }
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open scenario file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty scenario file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw IngestError("scenario header mismatch: expected '" + std::string(kHeader) + "'");

  Scenario s;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    std::array<std::string, 5> cols;
    std::size_t start = 0;
    for (int c = 0; c < 5; ++c) {
      const std::size_t comma = line.find(',', start);
      if (c < 4 && comma == std::string::npos) {
        std::ostringstream os;
        os << "row " << row << ": expected 5 columns";
        throw IngestError(os.str());
      }
      cols[static_cast<std::size_t>(c)] =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      start = comma + 1;
    }
    ScenarioSample sample;
    sample.timestamp = parse_iso8601(cols[0]);
    sample.production_kw = parse_double(cols[1], row, "production_kw");
    sample.demand_kw = parse_double(cols[2], row, "demand_kw");
    sample.c_buy = parse_double(cols[3], row, "c_buy_mu_per_kwh");
    sample.c_sell = parse_double(cols[4], row, "c_sell_mu_per_kwh");
    s.samples.push_back(sample);
  }
  if (s.samples.size() >= 2)
    s.dt_hours = static_cast<double>(s.samples[1].timestamp - s.samples[0].timestamp) / 3600.0;
  s.validate();
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write scenario file: " + path);
  out << kHeader << '\n';
  for (const auto& sample : s.samples) {
    out << format_iso8601(sample.timestamp) << ',' << format_double(sample.production_kw) << ','
        << format_double(sample.demand_kw) << ',' << format_double(sample.c_buy) << ','
        << format_double(sample.c_sell) << '\n';
  }
}

std::pair<Scenario, Scenario> split_train_test(const Scenario& s) {
  if (s.samples.size() < 2) throw IngestError("scenario too short to split");
  Scenario train, test;
  train.dt_hours = s.dt_hours;
  test.dt_hours = s.dt_hours;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    if (i % 2 == 0)
      train.samples.push_back(s.samples[i]);
    else
      test.samples.push_back(s.samples[i]);
  }
  // re-time each half onto the nominal dt so the result is a valid scenario
  const auto spacing = static_cast<std::int64_t>(std::llround(s.dt_hours * 3600.0));
  for (auto* half : {&train, &test})
    for (std::size_t i = 0; i < half->samples.size(); ++i)
      half->samples[i].timestamp = half->samples[0].timestamp + static_cast<std::int64_t>(i) * spacing;
  return {train, test};
}

Scenario synth_scenario(int days, std::uint64_t seed, const SynthParams& params) {
  if (days < 1) throw IngestError("synthetic scenario needs at least one day");
  Rng rng(derive_seed(seed, 0x5c3a));
  Scenario s;
  s.dt_hours = 0.25;
  const int per_day = 96;

  double wind = params.wind_mean_kw;
  for (int day = 0; day < days; ++day) {
    // one weather draw per day scales the PV profile
    const double weather = 0.55 + 0.45 * rng.uniform();
    for (int k = 0; k < per_day; ++k) {
      const double hour = static_cast<double>(k) * 0.25;
      ScenarioSample smp;
      smp.timestamp = params.start_timestamp + (static_cast<std::int64_t>(day) * per_day + k) * 900;

      double pv = 0.0;
      if (hour > 6.0 && hour < 18.0) {
        pv = params.pv_peak_kw * weather * std::sin(M_PI * (hour - 6.0) / 12.0);
        pv *= 1.0 + params.noise_level * (2.0 * rng.uniform() - 1.0);
      }
      // mean-reverting wind, never negative
      wind += 0.2 * (params.wind_mean_kw - wind) + params.wind_mean_kw * 0.15 * rng.gaussian() * 0.5;
      wind = std::clamp(wind, 0.0, 2.5 * params.wind_mean_kw);
      smp.production_kw = std::max(0.0, pv + wind);

      const double morning = params.morning_peak_kw * std::exp(-0.5 * std::pow((hour - 8.0) / 1.5, 2));
      const double evening = params.evening_peak_kw * std::exp(-0.5 * std::pow((hour - 20.0) / 2.0, 2));
      double demand = params.demand_base_kw + morning + evening;
      demand *= 1.0 + params.noise_level * (2.0 * rng.uniform() - 1.0);
      smp.demand_kw = std::max(0.0, demand);

      const bool daytime = hour >= params.day_start_hour && hour < params.day_end_hour;
      smp.c_buy = daytime ? params.c_buy_day : params.c_buy_night;
      smp.c_sell = daytime ? params.c_sell_day : params.c_sell_night;

      s.samples.push_back(smp);
    }
  }
  s.validate();
  return s;
}

NormalizationRanges extract_ranges(const Scenario& train) {
  if (train.samples.empty()) throw IngestError("cannot extract ranges from an empty scenario");
  NormalizationRanges r;
  bool first = true;
  for (const auto& s : train.samples) {
    const double bal = s.production_kw - s.demand_kw;
    if (first) {
      r.balance = {bal, bal};
      r.c_buy = {s.c_buy, s.c_buy};
      r.c_sell = {s.c_sell, s.c_sell};
      first = false;
      continue;
    }
    r.balance.lo = std::min(r.balance.lo, bal);
    r.balance.hi = std::max(r.balance.hi, bal);
    r.c_buy.lo = std::min(r.c_buy.lo, s.c_buy);
    r.c_buy.hi = std::max(r.c_buy.hi, s.c_buy);
    r.c_sell.lo = std::min(r.c_sell.lo, s.c_sell);
    r.c_sell.hi = std::max(r.c_sell.hi, s.c_sell);
  }
  return r;
}

double normalize(double x, const Range& r) {
  if (r.degenerate()) return 0.5;
  if (x <= r.lo) return 0.0;
  if (x >= r.hi) return 1.0;
  return (x - r.lo) / (r.hi - r.lo);
}

}  // namespace gridfuzz
