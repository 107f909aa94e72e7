#include "gridfuzz/codec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gridfuzz/errors.hpp"
#include "gridfuzz/rng.hpp"

namespace gridfuzz {

Scheme scheme_from_name(const std::string& name) {
  if (name == "classic") return Scheme::Classic;
  if (name == "hga" || name == "hier") return Scheme::Hier;
  throw CodecError("unknown scheme: " + name);
}

const char* scheme_name(Scheme s) { return s == Scheme::Classic ? "classic" : "hga"; }

void validate_chromosome(Scheme scheme, const Chromosome& c) {
  const std::size_t want_ctrl = scheme == Scheme::Classic ? 0 : kHierControlBits;
  const std::size_t want_real = scheme == Scheme::Classic ? kClassicGeneCount : kHierParametricCount;
  if (c.control.size() != want_ctrl) {
    std::ostringstream os;
    os << "control segment length " << c.control.size() << ", expected " << want_ctrl;
    throw CodecError(os.str());
  }
  if (c.parametric.size() != want_real) {
    std::ostringstream os;
    os << "parametric segment length " << c.parametric.size() << ", expected " << want_real;
    throw CodecError(os.str());
  }
  for (const auto g : c.control)
    if (g > 1) throw CodecError("control gene is not binary");
}

namespace {

constexpr int kClassicMfs = 3;
constexpr int kHierMfs = 5;

// Anchor parameter tuples of the uniform seed partition over [0,1].
// n = 3: three triangles; n = 5: left shoulder, three triangles, right
// shoulder. One tuple per MF, in label order.
std::vector<std::vector<double>> partition_anchors(int n_mfs) {
  const double h = 1.0 / static_cast<double>(n_mfs - 1);
  const auto g = [h](int i) { return static_cast<double>(i) * h; };
  std::vector<std::vector<double>> out;
  if (n_mfs == kClassicMfs) {
    out.push_back({g(0), g(0), g(1)});
    out.push_back({g(0), g(1), g(2)});
    out.push_back({g(1), g(2), g(2)});
  } else {
    out.push_back({g(0), g(1)});  // left shoulder
    for (int i = 1; i <= 3; ++i) out.push_back({g(i - 1), g(i), g(i + 1)});
    out.push_back({g(n_mfs - 2), g(n_mfs - 1)});  // right shoulder
  }
  return out;
}

void append_mf_bounds(int n_mfs, GeneBounds& b) {
  const double half = 0.5 / static_cast<double>(n_mfs - 1);
  for (const auto& mf : partition_anchors(n_mfs)) {
    for (const double v : mf) {
      b.lower.push_back(std::max(0.0, v - half));
      b.upper.push_back(std::min(1.0, v + half));
    }
  }
}

MembershipFunction mf_from_anchor_tuple(const std::vector<double>& params, int position, int n_mfs) {
  if (n_mfs == kHierMfs && position == 0)
    return MembershipFunction{MfKind::LeftShoulder, {params[0], params[1], 0.0}, true};
  if (n_mfs == kHierMfs && position == n_mfs - 1)
    return MembershipFunction{MfKind::RightShoulder, {params[0], params[1], 0.0}, true};
  return MembershipFunction{MfKind::Triangular, {params[0], params[1], params[2]}, true};
}

int params_per_mf(int position, int n_mfs) {
  return (n_mfs == kHierMfs && (position == 0 || position == n_mfs - 1)) ? 2 : 3;
}

// Reads the MF parameter block for one variable, applying the per-MF
// sorting repair so crossover or hand-made genes cannot break ordering.
std::vector<MembershipFunction> read_variable(const double*& gene, int n_mfs) {
  std::vector<MembershipFunction> mfs;
  for (int m = 0; m < n_mfs; ++m) {
    const int np = params_per_mf(m, n_mfs);
    std::vector<double> p(gene, gene + np);
    gene += np;
    std::sort(p.begin(), p.end());
    mfs.push_back(mf_from_anchor_tuple(p, m, n_mfs));
  }
  return mfs;
}

Fis decode_fis(const double* genes, const std::uint8_t* control, int n_mfs) {
  Fis fis;
  const double* g = genes;
  for (int v = 0; v < 3; ++v) fis.input_mfs[static_cast<std::size_t>(v)] = read_variable(g, n_mfs);
  fis.output_mfs = read_variable(g, n_mfs);

  if (control != nullptr) {
    for (int v = 0; v < 3; ++v)
      for (int m = 0; m < n_mfs; ++m)
        fis.input_mfs[static_cast<std::size_t>(v)][static_cast<std::size_t>(m)].active =
            control[v * n_mfs + m] != 0;
  }

  const auto cons = assign_consequents({n_mfs, n_mfs, n_mfs}, n_mfs);
  fis.rules.reserve(static_cast<std::size_t>(n_mfs) * n_mfs * n_mfs);
  std::size_t r = 0;
  for (int i1 = 0; i1 < n_mfs; ++i1)
    for (int i2 = 0; i2 < n_mfs; ++i2)
      for (int i3 = 0; i3 < n_mfs; ++i3) {
        FuzzyRule rule;
        rule.antecedents = {i1, i2, i3};
        rule.consequent = cons[r];
        rule.weight = g[r];
        fis.rules.push_back(rule);
        ++r;
      }
  return fis;
}

void encode_fis(const Fis& fis, std::vector<double>& genes, std::vector<std::uint8_t>* control,
                int n_mfs) {
  const auto push_var = [&](const std::vector<MembershipFunction>& mfs) {
    if (static_cast<int>(mfs.size()) != n_mfs) throw CodecError("controller variable has wrong MF count");
    for (int m = 0; m < n_mfs; ++m) {
      const int np = params_per_mf(m, n_mfs);
      for (int i = 0; i < np; ++i) genes.push_back(mfs[static_cast<std::size_t>(m)].params[static_cast<std::size_t>(i)]);
    }
  };
  for (int v = 0; v < 3; ++v) push_var(fis.input_mfs[static_cast<std::size_t>(v)]);
  push_var(fis.output_mfs);

  const std::size_t want_rules = static_cast<std::size_t>(n_mfs) * n_mfs * n_mfs;
  if (fis.rules.size() != want_rules) throw CodecError("controller rule base is not the full grid");
  for (const auto& rule : fis.rules) genes.push_back(rule.weight);

  if (control != nullptr) {
    for (int v = 0; v < 3; ++v)
      for (int m = 0; m < n_mfs; ++m)
        control->push_back(fis.input_mfs[static_cast<std::size_t>(v)][static_cast<std::size_t>(m)].active ? 1 : 0);
  }
}

}  // namespace

GeneBounds default_bounds(Scheme scheme) {
  const int n_mfs = scheme == Scheme::Classic ? kClassicMfs : kHierMfs;
  const std::size_t n_rules = static_cast<std::size_t>(n_mfs) * n_mfs * n_mfs;
  GeneBounds b;
  for (int fis = 0; fis < 2; ++fis) {
    for (int v = 0; v < 4; ++v) append_mf_bounds(n_mfs, b);
    for (std::size_t r = 0; r < n_rules; ++r) {
      b.lower.push_back(0.0);
      b.upper.push_back(1.0);
    }
  }
  return b;
}

Chromosome seed_chromosome(Scheme scheme) {
  const int n_mfs = scheme == Scheme::Classic ? kClassicMfs : kHierMfs;
  const std::size_t n_rules = static_cast<std::size_t>(n_mfs) * n_mfs * n_mfs;
  Chromosome c;
  if (scheme == Scheme::Hier) c.control.assign(kHierControlBits, 1);
  const auto anchors = partition_anchors(n_mfs);
  for (int fis = 0; fis < 2; ++fis) {
    for (int v = 0; v < 4; ++v)
      for (const auto& mf : anchors)
        for (const double p : mf) c.parametric.push_back(p);
    for (std::size_t r = 0; r < n_rules; ++r) c.parametric.push_back(1.0);
  }
  return c;
}

FuzzyController baseline_controller(Scheme scheme) {
  return decode(scheme, seed_chromosome(scheme));
}

std::vector<int> assign_consequents(const std::array<int, 3>& grid_shape, int n_output_mfs) {
  const int max_sum = (grid_shape[0] - 1) + (grid_shape[1] - 1) + (grid_shape[2] - 1);
  std::vector<int> table;
  table.reserve(static_cast<std::size_t>(grid_shape[0]) * grid_shape[1] * grid_shape[2]);
  for (int i1 = 0; i1 < grid_shape[0]; ++i1)
    for (int i2 = 0; i2 < grid_shape[1]; ++i2)
      for (int i3 = 0; i3 < grid_shape[2]; ++i3) {
        const double frac = max_sum > 0 ? static_cast<double>(i1 + i2 + i3) / max_sum : 0.0;
        table.push_back(static_cast<int>(std::lround(frac * (n_output_mfs - 1))));
      }
  return table;
}

FuzzyController decode_classic(const Chromosome& c) {
  validate_chromosome(Scheme::Classic, c);
  FuzzyController fc;
  fc.alpha = decode_fis(c.parametric.data(), nullptr, kClassicMfs);
  fc.beta = decode_fis(c.parametric.data() + kClassicGenesPerFis, nullptr, kClassicMfs);
  return fc;
}

FuzzyController decode_hierarchical(const Chromosome& c) {
  validate_chromosome(Scheme::Hier, c);
  FuzzyController fc;
  fc.alpha = decode_fis(c.parametric.data(), c.control.data(), kHierMfs);
  fc.beta = decode_fis(c.parametric.data() + kHierParametricPerFis,
                       c.control.data() + kHierControlPerFis, kHierMfs);
  return fc;
}

FuzzyController decode(Scheme scheme, const Chromosome& c) {
  return scheme == Scheme::Classic ? decode_classic(c) : decode_hierarchical(c);
}

Chromosome encode_classic(const FuzzyController& fc) {
  Chromosome c;
  encode_fis(fc.alpha, c.parametric, nullptr, kClassicMfs);
  encode_fis(fc.beta, c.parametric, nullptr, kClassicMfs);
  validate_chromosome(Scheme::Classic, c);
  return c;
}

Chromosome encode_hierarchical(const FuzzyController& fc) {
  Chromosome c;
  encode_fis(fc.alpha, c.parametric, &c.control, kHierMfs);
  encode_fis(fc.beta, c.parametric, &c.control, kHierMfs);
  // control bits for both FISs lead the combined chromosome
  validate_chromosome(Scheme::Hier, c);
  return c;
}

Chromosome encode(Scheme scheme, const FuzzyController& fc) {
  return scheme == Scheme::Classic ? encode_classic(fc) : encode_hierarchical(fc);
}

Chromosome random_chromosome(Scheme scheme, const GeneBounds& bounds, std::uint64_t seed) {
  const std::size_t want_real = scheme == Scheme::Classic ? kClassicGeneCount : kHierParametricCount;
  if (bounds.size() != want_real || bounds.upper.size() != want_real)
    throw CodecError("bounds length does not match scheme");
  Rng rng(seed);
  Chromosome c;
  if (scheme == Scheme::Hier) {
    c.control.resize(kHierControlBits);
    for (auto& g : c.control) g = rng.coin() ? 1 : 0;
  }
  c.parametric.resize(want_real);
  for (std::size_t i = 0; i < want_real; ++i)
    c.parametric[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
  return c;
}

std::string chromosome_to_line(const Chromosome& c) {
  std::string line;
  for (const auto g : c.control) line.push_back(g ? '1' : '0');
  char buf[32];
  for (std::size_t i = 0; i < c.parametric.size(); ++i) {
    if (!line.empty()) line.push_back(' ');
    const auto res = std::to_chars(buf, buf + sizeof buf, c.parametric[i]);
    line.append(buf, res.ptr);
  }
  return line;
}

Chromosome chromosome_from_line(const std::string& line) {
  Chromosome c;
  std::istringstream is(line);
  std::string tok;
  bool first = true;
  while (is >> tok) {
    if (first && tok.find_first_not_of("01") == std::string::npos && tok.size() > 1) {
      for (const char ch : tok) c.control.push_back(ch == '1' ? 1 : 0);
      first = false;
      continue;
    }
    first = false;
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw CodecError("malformed gene token: " + tok);
    c.parametric.push_back(v);
  }
  return c;
}

}  // namespace gridfuzz
