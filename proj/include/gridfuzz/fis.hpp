#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gridfuzz {

enum class MfKind { Triangular, LeftShoulder, RightShoulder };

/// Fuzzy set over the normalized [0,1] universe.
///
/// Triangular uses params (a, b, c) with a <= b <= c, degree 1 exactly at b.
/// LeftShoulder(p1, p2) is 1 on [0, p1] and falls linearly to 0 at p2;
/// RightShoulder(p1, p2) rises from 0 at p1 to 1 at p2 and stays 1 to the
/// domain edge.
struct MembershipFunction {
  MfKind kind = MfKind::Triangular;
  std::array<double, 3> params{0.0, 0.0, 0.0};  // shoulders use [0] and [1]
  bool active = true;

  static MembershipFunction triangular(double a, double b, double c, bool active = true);
  static MembershipFunction left_shoulder(double p1, double p2, bool active = true);
  static MembershipFunction right_shoulder(double p1, double p2, bool active = true);

  /// abscissa of (the midpoint of) the degree-1 region; used for label ordering
  double center() const;
  void validate() const;  // throws InvalidMf
  bool operator==(const MembershipFunction&) const = default;
};

/// Membership degree of x in mf. Validates parameter ordering.
double eval_membership(const MembershipFunction& mf, double x);

/// One weighted grid-partition rule: one antecedent MF index per input
/// variable, a consequent MF index, and a weight in [0,1].
struct FuzzyRule {
  std::array<int, 3> antecedents{0, 0, 0};
  int consequent = 0;
  double weight = 1.0;
  bool operator==(const FuzzyRule&) const = default;
};

enum class Norm { Min, Product };

/// MISO Mamdani inference system over three normalized inputs.
/// Values are immutable once built; inference is a pure function.
struct Fis {
  std::array<std::vector<MembershipFunction>, 3> input_mfs;
  std::vector<MembershipFunction> output_mfs;
  std::vector<FuzzyRule> rules;
  Norm conjunction = Norm::Min;
  Norm implication = Norm::Min;
  int defuzz_resolution = 1001;

  bool operator==(const Fis&) const = default;
};

/// A rule is active iff every antecedent MF it references is active.
bool rule_active(const Fis& fis, const FuzzyRule& rule);

std::size_t active_rule_count(const Fis& fis);

/// True when some input variable has no active MF (no rule can ever fire).
bool fis_degenerate(const Fis& fis);

/// Mean-of-Maximum over a fuzzy set sampled uniformly on [0,1].
/// Throws NoRuleFired when no sample is strictly positive.
double defuzzify_mom(std::span<const double> samples);

/// Precompiled form of a Fis for repeated inference: validates the
/// structure once and caches the output-MF sample table used by the
/// Mamdani aggregation, which dominates the per-call cost.
class FisEvaluator {
 public:
  /// grid-partition FISs stay tiny; a hard cap keeps inference allocation-free
  static constexpr std::size_t kMaxMfsPerVariable = 16;

  explicit FisEvaluator(const Fis& fis);

  /// Full Mamdani pipeline: weighted firing, implication, max-aggregation
  /// over the sampled output universe, MoM defuzzification.
  /// Throws NoRuleFired when the aggregate is identically zero.
  double infer(const std::array<double, 3>& inputs) const;

  std::size_t active_rules() const { return rules_.size(); }

 private:
  struct CompiledRule {
    std::array<int, 3> antecedents;
    int consequent;
    double weight;
  };
  // self-contained copy of everything inference touches
  std::array<std::vector<MembershipFunction>, 3> input_mfs_;
  std::size_t n_outputs_;
  Norm conjunction_;
  Norm implication_;
  std::vector<CompiledRule> rules_;                // active rules only
  std::vector<std::vector<double>> output_table_;  // [output mf][sample]
  int resolution_;
};

/// One-shot convenience wrapper around FisEvaluator.
double infer(const Fis& fis, const std::array<double, 3>& inputs);

/// The pair of FISs driving the controller: alpha maps
/// (balance, SOC, sell price) to the sold fraction of a surplus, beta maps
/// (balance, SOC, buy price) to the purchased fraction of a deficit.
struct FuzzyController {
  Fis alpha;
  Fis beta;
  bool operator==(const FuzzyController&) const = default;
};

/// JSON round trip; doubles survive bit-exactly.
std::string fis_to_json(const Fis& fis);
Fis fis_from_json(const std::string& text);

}  // namespace gridfuzz
