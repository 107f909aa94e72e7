#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gridfuzz/fis.hpp"

namespace gridfuzz {

/// Classic: one flat real vector tuning MF parameters and the weights of a
/// fixed 27-rule grid. Hier: binary control genes switch input MFs on/off
/// on top of the real parametric genes, so the effective rule count is
/// itself subject to the search.
enum class Scheme { Classic, Hier };

Scheme scheme_from_name(const std::string& name);
const char* scheme_name(Scheme s);

/// Unified chromosome container. Classic chromosomes have an empty control
/// segment; hierarchical ones carry 15 activation bits per FIS in front of
/// the real-valued segment.
struct Chromosome {
  std::vector<std::uint8_t> control;  // 0/1
  std::vector<double> parametric;
  bool operator==(const Chromosome&) const = default;
};

// encoding geometry
inline constexpr std::size_t kClassicGenesPerFis = 63;   // 36 MF params + 27 weights
inline constexpr std::size_t kClassicGeneCount = 126;
inline constexpr std::size_t kHierControlPerFis = 15;    // 5 MFs x 3 inputs
inline constexpr std::size_t kHierControlBits = 30;
inline constexpr std::size_t kHierParametricPerFis = 177;  // 52 MF params + 125 weights
inline constexpr std::size_t kHierParametricCount = 354;
inline constexpr std::size_t kHierTotalGenes = 384;

/// Per-gene interval constraints for the parametric segment.
struct GeneBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t size() const { return lower.size(); }
};

/// Throws CodecError unless the chromosome matches the scheme geometry
/// (segment lengths, binary control values).
void validate_chromosome(Scheme scheme, const Chromosome& c);

/// Interval constraints anchored on the uniform seed partition: every MF
/// parameter may move halfway towards the adjacent partition anchor on each
/// side (clipped to [0,1]); rule weights range over [0,1].
GeneBounds default_bounds(Scheme scheme);

/// The uniform-partition seed with all rule weights at 1; decodes to
/// baseline_controller.
Chromosome seed_chromosome(Scheme scheme);

/// Hand-built controller matching the seed chromosome.
FuzzyController baseline_controller(Scheme scheme);

/// Deterministic consequent lookup for a full grid: cell (i1,i2,i3) maps to
/// round(((i1+i2+i3)/(sum of max indices)) * (n_output_mfs-1)). Row-major
/// table, index = i1*s2*s3 + i2*s3 + i3.
std::vector<int> assign_consequents(const std::array<int, 3>& grid_shape, int n_output_mfs);

FuzzyController decode_classic(const Chromosome& c);
FuzzyController decode_hierarchical(const Chromosome& c);
FuzzyController decode(Scheme scheme, const Chromosome& c);

Chromosome encode_classic(const FuzzyController& fc);
Chromosome encode_hierarchical(const FuzzyController& fc);
Chromosome encode(Scheme scheme, const FuzzyController& fc);

/// Parametric genes i.i.d. uniform within bounds, control genes fair coins;
/// fully determined by the seed.
Chromosome random_chromosome(Scheme scheme, const GeneBounds& bounds, std::uint64_t seed);

/// Flat text line: control segment as a run of 0/1 characters (omitted for
/// classic), then the parametric genes as shortest round-trip decimals.
std::string chromosome_to_line(const Chromosome& c);
Chromosome chromosome_from_line(const std::string& line);

}  // namespace gridfuzz
