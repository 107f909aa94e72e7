#include "gridfuzz/fis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridfuzz/errors.hpp"
#include <nlohmann/json.hpp>

namespace gridfuzz {

using json = nlohmann::json;

MembershipFunction MembershipFunction::triangular(double a, double b, double c, bool active) {
  MembershipFunction mf{MfKind::Triangular, {a, b, c}, active};
  mf.validate();
  return mf;
}

MembershipFunction MembershipFunction::left_shoulder(double p1, double p2, bool active) {
  MembershipFunction mf{MfKind::LeftShoulder, {p1, p2, 0.0}, active};
  mf.validate();
  return mf;
}

MembershipFunction MembershipFunction::right_shoulder(double p1, double p2, bool active) {
  MembershipFunction mf{MfKind::RightShoulder, {p1, p2, 0.0}, active};
  mf.validate();
  return mf;
}

void MembershipFunction::validate() const {
  const auto bad = [this](const char* why) {
    std::ostringstream os;
    os << "invalid membership function: " << why << " (params " << params[0] << ", " << params[1];
    if (kind == MfKind::Triangular) os << ", " << params[2];
    os << ")";
    throw InvalidMf(os.str());
  };
  const int n = kind == MfKind::Triangular ? 3 : 2;
  for (int i = 0; i < n; ++i) {
    if (!(params[i] >= 0.0 && params[i] <= 1.0)) bad("parameter outside [0,1]");
    if (i > 0 && params[i] < params[i - 1]) bad("parameter ordering violated");
  }
}

double MembershipFunction::center() const {
  switch (kind) {
    case MfKind::Triangular: return params[1];
    case MfKind::LeftShoulder: return params[0] / 2.0;       // plateau is [0, p1]
    case MfKind::RightShoulder: return (params[1] + 1.0) / 2.0;  // plateau is [p2, 1]
  }
  return 0.0;
}

namespace {

// Degree without validation; hot path.
inline double mf_degree(const MembershipFunction& mf, double x) {
  const double a = mf.params[0];
  const double b = mf.params[1];
  switch (mf.kind) {
    case MfKind::Triangular: {
      const double c = mf.params[2];
      if (x == b) return 1.0;  // peak, even for zero-width flanks
      if (x <= a || x >= c) return 0.0;
      if (x < b) return (x - a) / (b - a);
      return (c - x) / (c - b);
    }
    case MfKind::LeftShoulder:
      if (x <= a) return 1.0;
      if (x >= b) return 0.0;
      return (b - x) / (b - a);
    case MfKind::RightShoulder:
      if (x >= b) return 1.0;
      if (x <= a) return 0.0;
      return (x - a) / (b - a);
  }
  return 0.0;
}

}  // namespace

double eval_membership(const MembershipFunction& mf, double x) {
  mf.validate();
  return mf_degree(mf, x);
}

bool rule_active(const Fis& fis, const FuzzyRule& rule) {
  for (int v = 0; v < 3; ++v) {
    const auto& mfs = fis.input_mfs[static_cast<std::size_t>(v)];
    const int idx = rule.antecedents[static_cast<std::size_t>(v)];
    if (idx < 0 || idx >= static_cast<int>(mfs.size())) return false;
    if (!mfs[static_cast<std::size_t>(idx)].active) return false;
  }
  return true;
}

std::size_t active_rule_count(const Fis& fis) {
  std::size_t n = 0;
  for (const auto& r : fis.rules)
    if (rule_active(fis, r)) ++n;
  return n;
}

bool fis_degenerate(const Fis& fis) {
  for (const auto& mfs : fis.input_mfs) {
    bool any = false;
    for (const auto& mf : mfs) any = any || mf.active;
    if (!any) return true;
  }
  return false;
}

double defuzzify_mom(std::span<const double> samples) {
  if (samples.empty()) throw NoRuleFired();
  const double step = samples.size() > 1 ? 1.0 / static_cast<double>(samples.size() - 1) : 0.0;
  double peak = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double v = samples[k];
    if (v > peak) {
      peak = v;
      sum = static_cast<double>(k) * step;
      count = 1;
    } else if (v == peak && peak > 0.0) {
      sum += static_cast<double>(k) * step;
      ++count;
    }
  }
  if (peak <= 0.0) throw NoRuleFired();
  return sum / static_cast<double>(count);
}

FisEvaluator::FisEvaluator(const Fis& fis)
    : input_mfs_(fis.input_mfs),
      n_outputs_(fis.output_mfs.size()),
      conjunction_(fis.conjunction),
      implication_(fis.implication),
      resolution_(fis.defuzz_resolution) {
  if (resolution_ < 2) throw InvalidMf("defuzz_resolution must be at least 2");
  for (const auto& mfs : input_mfs_) {
    if (mfs.size() > kMaxMfsPerVariable) throw InvalidMf("too many membership functions per variable");
    for (const auto& mf : mfs) mf.validate();
  }
  if (n_outputs_ > kMaxMfsPerVariable) throw InvalidMf("too many output membership functions");
  for (const auto& mf : fis.output_mfs) mf.validate();

  for (const auto& r : fis.rules) {
    if (r.consequent < 0 || r.consequent >= static_cast<int>(n_outputs_))
      throw InvalidMf("rule consequent index out of range");
    if (rule_active(fis, r)) rules_.push_back({r.antecedents, r.consequent, r.weight});
  }

  const double step = 1.0 / static_cast<double>(resolution_ - 1);
  output_table_.resize(n_outputs_);
  for (std::size_t j = 0; j < n_outputs_; ++j) {
    auto& row = output_table_[j];
    row.resize(static_cast<std::size_t>(resolution_));
    for (int k = 0; k < resolution_; ++k)
      row[static_cast<std::size_t>(k)] = mf_degree(fis.output_mfs[j], static_cast<double>(k) * step);
  }
}

double FisEvaluator::infer(const std::array<double, 3>& inputs) const {
  if (rules_.empty()) throw NoRuleFired();

  // per-input membership degrees
  std::array<std::array<double, kMaxMfsPerVariable>, 3> degrees{};
  for (int v = 0; v < 3; ++v) {
    const auto& mfs = input_mfs_[static_cast<std::size_t>(v)];
    auto& d = degrees[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < mfs.size(); ++i)
      d[i] = mf_degree(mfs[i], inputs[static_cast<std::size_t>(v)]);
  }

  // weighted firing strength, folded into a per-consequent clip level;
  // max over rules sharing a consequent commutes exactly with the
  // pointwise implication/aggregation below
  const std::size_t n_out = n_outputs_;
  std::array<double, kMaxMfsPerVariable> clip{};
  bool fired = false;
  for (const auto& r : rules_) {
    double strength;
    const double d0 = degrees[0][static_cast<std::size_t>(r.antecedents[0])];
    const double d1 = degrees[1][static_cast<std::size_t>(r.antecedents[1])];
    const double d2 = degrees[2][static_cast<std::size_t>(r.antecedents[2])];
    if (conjunction_ == Norm::Min)
      strength = std::min(d0, std::min(d1, d2));
    else
      strength = d0 * d1 * d2;
    strength *= r.weight;
    if (strength > 0.0) fired = true;
    auto& c = clip[static_cast<std::size_t>(r.consequent)];
    c = std::max(c, strength);
  }
  if (!fired) throw NoRuleFired();

  // aggregate over the sampled output universe and take the mean of the
  // samples attaining the maximum; consequents with zero clip level
  // contribute nothing and are skipped
  std::array<const double*, kMaxMfsPerVariable> row{};
  std::array<double, kMaxMfsPerVariable> level{};
  std::size_t n_fired = 0;
  for (std::size_t j = 0; j < n_out; ++j) {
    if (clip[j] > 0.0) {
      row[n_fired] = output_table_[j].data();
      level[n_fired] = clip[j];
      ++n_fired;
    }
  }

  const double step = 1.0 / static_cast<double>(resolution_ - 1);
  double peak = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
  const bool clip_implication = implication_ == Norm::Min;
  for (int k = 0; k < resolution_; ++k) {
    double agg = 0.0;
    for (std::size_t j = 0; j < n_fired; ++j) {
      const double m = row[j][static_cast<std::size_t>(k)];
      const double v = clip_implication ? std::min(level[j], m) : level[j] * m;
      agg = std::max(agg, v);
    }
    if (agg > peak) {
      peak = agg;
      sum = static_cast<double>(k) * step;
      count = 1;
    } else if (agg == peak && peak > 0.0) {
      sum += static_cast<double>(k) * step;
      ++count;
    }
  }
  if (peak <= 0.0) throw NoRuleFired();
  return sum / static_cast<double>(count);
}

double infer(const Fis& fis, const std::array<double, 3>& inputs) {
  return FisEvaluator(fis).infer(inputs);
}

namespace {

const char* kind_name(MfKind k) {
  switch (k) {
    case MfKind::Triangular: return "tri";
    case MfKind::LeftShoulder: return "lshoulder";
    case MfKind::RightShoulder: return "rshoulder";
  }
  return "tri";
}

MfKind kind_from_name(const std::string& s) {
  if (s == "tri") return MfKind::Triangular;
  if (s == "lshoulder") return MfKind::LeftShoulder;
  if (s == "rshoulder") return MfKind::RightShoulder;
  throw Error("unknown membership kind: " + s);
}

json mf_to_json(const MembershipFunction& mf) {
  json j;
  j["kind"] = kind_name(mf.kind);
  const int n = mf.kind == MfKind::Triangular ? 3 : 2;
  j["params"] = std::vector<double>(mf.params.begin(), mf.params.begin() + n);
  j["active"] = mf.active;
  return j;
}

MembershipFunction mf_from_json(const json& j) {
  MembershipFunction mf;
  mf.kind = kind_from_name(j.at("kind").get<std::string>());
  const auto p = j.at("params").get<std::vector<double>>();
  const std::size_t want = mf.kind == MfKind::Triangular ? 3 : 2;
  if (p.size() != want) throw Error("membership params length mismatch");
  std::copy(p.begin(), p.end(), mf.params.begin());
  mf.active = j.at("active").get<bool>();
  mf.validate();
  return mf;
}

const char* norm_name(Norm n) { return n == Norm::Min ? "min" : "product"; }

Norm norm_from_name(const std::string& s) {
  if (s == "min") return Norm::Min;
  if (s == "product") return Norm::Product;
  throw Error("unknown norm: " + s);
}

}  // namespace

std::string fis_to_json(const Fis& fis) {
  json j;
  for (const auto& mfs : fis.input_mfs) {
    json arr = json::array();
    for (const auto& mf : mfs) arr.push_back(mf_to_json(mf));
    j["inputs"].push_back(arr);
  }
  j["outputs"] = json::array();
  for (const auto& mf : fis.output_mfs) j["outputs"].push_back(mf_to_json(mf));
  j["rules"] = json::array();
  for (const auto& r : fis.rules)
    j["rules"].push_back({{"ant", r.antecedents}, {"cons", r.consequent}, {"w", r.weight}});
  j["conjunction"] = norm_name(fis.conjunction);
  j["implication"] = norm_name(fis.implication);
  j["resolution"] = fis.defuzz_resolution;
  return j.dump(2);
}

Fis fis_from_json(const std::string& text) {
  const json j = json::parse(text);
  Fis fis;
  const auto& inputs = j.at("inputs");
  if (inputs.size() != 3) throw Error("fis must have exactly 3 input variables");
  for (std::size_t v = 0; v < 3; ++v)
    for (const auto& jm : inputs[v]) fis.input_mfs[v].push_back(mf_from_json(jm));
  for (const auto& jm : j.at("outputs")) fis.output_mfs.push_back(mf_from_json(jm));
  for (const auto& jr : j.at("rules")) {
    FuzzyRule r;
    const auto ant = jr.at("ant").get<std::vector<int>>();
    if (ant.size() != 3) throw Error("rule antecedent arity must be 3");
    std::copy(ant.begin(), ant.end(), r.antecedents.begin());
    r.consequent = jr.at("cons").get<int>();
    r.weight = jr.at("w").get<double>();
    fis.rules.push_back(r);
  }
  fis.conjunction = norm_from_name(j.at("conjunction").get<std::string>());
  fis.implication = norm_from_name(j.at("implication").get<std::string>());
  fis.defuzz_resolution = j.at("resolution").get<int>();
  return fis;
}

}  // namespace gridfuzz
