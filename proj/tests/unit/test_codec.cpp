#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gridfuzz/codec.hpp"
#include "gridfuzz/errors.hpp"
#include "gridfuzz/rng.hpp"

using namespace gridfuzz;

TEST_CASE("chromosome geometry constants") {
  CHECK(kClassicGeneCount == 126);
  CHECK(kClassicGenesPerFis == 63);
  CHECK(kHierControlPerFis == 15);
  CHECK(kHierParametricPerFis == 177);
  CHECK(kHierControlBits + kHierParametricCount == kHierTotalGenes);
  CHECK(kHierTotalGenes == 384);

  const auto classic = seed_chromosome(Scheme::Classic);
  CHECK(classic.control.empty());
  CHECK(classic.parametric.size() == 126);

  const auto hier = seed_chromosome(Scheme::Hier);
  CHECK(hier.control.size() == 30);
  CHECK(hier.parametric.size() == 354);

  CHECK(default_bounds(Scheme::Classic).size() == 126);
  CHECK(default_bounds(Scheme::Hier).size() == 354);
}

TEST_CASE("wrong segment lengths are codec errors") {
  Chromosome c;
  c.parametric.assign(125, 0.5);
  CHECK_THROWS_AS(decode_classic(c), CodecError);
  c.parametric.assign(126, 0.5);
  CHECK_NOTHROW(decode_classic(c));
  CHECK_THROWS_AS(decode_hierarchical(c), CodecError);

  Chromosome h;
  h.control.assign(30, 1);
  h.parametric.assign(353, 0.5);
  CHECK_THROWS_AS(decode_hierarchical(h), CodecError);
  h.parametric.assign(354, 0.5);
  CHECK_NOTHROW(decode_hierarchical(h));
  h.control.assign(29, 1);
  CHECK_THROWS_AS(decode_hierarchical(h), CodecError);
}

TEST_CASE("seed chromosome decodes to the hand-built baseline") {
  for (const auto scheme : {Scheme::Classic, Scheme::Hier}) {
    const auto decoded = decode(scheme, seed_chromosome(scheme));
    CHECK(decoded == baseline_controller(scheme));
    for (const auto* fis : {&decoded.alpha, &decoded.beta}) {
      for (const auto& rule : fis->rules) CHECK(rule.weight == 1.0);
      for (const auto& mfs : fis->input_mfs)
        for (const auto& mf : mfs) CHECK(mf.active);
    }
  }
  const auto classic = baseline_controller(Scheme::Classic);
  CHECK(classic.alpha.rules.size() == 27);
  CHECK(active_rule_count(classic.alpha) == 27);
  const auto hier = baseline_controller(Scheme::Hier);
  CHECK(hier.alpha.rules.size() == 125);
  CHECK(hier.alpha.input_mfs[0].size() == 5);
  CHECK(hier.alpha.input_mfs[0][0].kind == MfKind::LeftShoulder);
  CHECK(hier.alpha.input_mfs[0][4].kind == MfKind::RightShoulder);
  CHECK(hier.alpha.output_mfs.size() == 5);
}

TEST_CASE("decode/encode round trips") {
  for (const auto scheme : {Scheme::Classic, Scheme::Hier}) {
    const auto bounds = default_bounds(scheme);
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
      // canonicalize first: decode applies the per-MF sorting repair, so
      // the identity holds on sorted chromosomes and on controllers
      const auto raw = random_chromosome(scheme, bounds, rng.index(1u << 31));
      const auto fc = decode(scheme, raw);
      const auto sorted = encode(scheme, fc);
      CHECK(decode(scheme, sorted) == fc);

      const auto back = encode(scheme, decode(scheme, sorted));
      REQUIRE(back.parametric.size() == sorted.parametric.size());
      CHECK(back.control == sorted.control);
      bool all_equal = true;
      for (std::size_t i = 0; i < sorted.parametric.size(); ++i)
        all_equal = all_equal && back.parametric[i] == sorted.parametric[i];
      CHECK(all_equal);
    }
  }
}

TEST_CASE("per-MF sorting repair restores parameter ordering") {
  auto c = seed_chromosome(Scheme::Classic);
  std::swap(c.parametric[3], c.parametric[5]);  // scramble second triangle (0,0.5,1) -> (1,0.5,0)
  const auto fc = decode_classic(c);
  const auto& mf = fc.alpha.input_mfs[0][1];
  CHECK(mf.params[0] <= mf.params[1]);
  CHECK(mf.params[1] <= mf.params[2]);
  CHECK_NOTHROW(mf.validate());
}

TEST_CASE("decoded controllers keep label ordering of MF centers") {
  for (const auto scheme : {Scheme::Classic, Scheme::Hier}) {
    const auto bounds = default_bounds(scheme);
    Rng rng(88);
    for (int trial = 0; trial < 50; ++trial) {
      const auto fc = decode(scheme, random_chromosome(scheme, bounds, rng.index(1u << 31)));
      for (const auto* fis : {&fc.alpha, &fc.beta}) {
        for (const auto& mfs : fis->input_mfs)
          for (std::size_t m = 1; m < mfs.size(); ++m) CHECK(mfs[m - 1].center() <= mfs[m].center());
        for (std::size_t m = 1; m < fis->output_mfs.size(); ++m)
          CHECK(fis->output_mfs[m - 1].center() <= fis->output_mfs[m].center());
      }
    }
  }
}

TEST_CASE("hierarchical activation semantics") {
  SUBCASE("all control genes on gives full coverage") {
    auto c = seed_chromosome(Scheme::Hier);
    const auto fc = decode_hierarchical(c);
    CHECK(active_rule_count(fc.alpha) == 125);
    CHECK(active_rule_count(fc.beta) == 125);
  }
  SUBCASE("sparse control string from a trained run") {
    auto c = seed_chromosome(Scheme::Hier);
    const std::uint8_t alpha_bits[15] = {1, 1, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1};
    std::copy(alpha_bits, alpha_bits + 15, c.control.begin());
    const auto fc = decode_hierarchical(c);
    CHECK(active_rule_count(fc.alpha) == 12);  // (3,2,2) product
    CHECK(active_rule_count(fc.beta) == 125);
    CHECK_FALSE(fis_degenerate(fc.alpha));
  }
  SUBCASE("all control genes off is decoded and flagged degenerate") {
    auto c = seed_chromosome(Scheme::Hier);
    std::fill(c.control.begin(), c.control.end(), 0);
    const auto fc = decode_hierarchical(c);
    CHECK(active_rule_count(fc.alpha) == 0);
    CHECK(active_rule_count(fc.beta) == 0);
    CHECK(fis_degenerate(fc.alpha));
    CHECK(fis_degenerate(fc.beta));
  }
}

TEST_CASE("flipping one control gene shifts the rule count by the cross product") {
  Rng rng(4096);
  const auto bounds = default_bounds(Scheme::Hier);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = random_chromosome(Scheme::Hier, bounds, rng.index(1u << 31));
    const auto idx = static_cast<std::size_t>(rng.index(kHierControlPerFis));
    const int var = static_cast<int>(idx) / 5;

    const auto before = decode_hierarchical(c);
    int active[3] = {0, 0, 0};
    for (int v = 0; v < 3; ++v)
      for (const auto& mf : before.alpha.input_mfs[static_cast<std::size_t>(v)])
        if (mf.active) ++active[v];
    long others = 1;
    for (int v = 0; v < 3; ++v)
      if (v != var) others *= active[v];

    c.control[idx] ^= 1;
    const auto after = decode_hierarchical(c);
    const long delta = static_cast<long>(active_rule_count(after.alpha)) -
                       static_cast<long>(active_rule_count(before.alpha));
    CHECK(std::abs(delta) == others);
  }
}

TEST_CASE("default bounds follow the half-distance rule") {
  const auto hier = default_bounds(Scheme::Hier);
  // variable layout: ls(p1,p2) t1(a,b,c) t2(a,b,c) t3(a,b,c) rs(p1,p2)
  // middle triangle peak sits at anchor 0.5 with neighbors 0.25 and 0.75
  const std::size_t mid_peak = 2 + 3 + 1;  // index of t2's b within the variable block
  CHECK(hier.lower[mid_peak] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(hier.upper[mid_peak] == doctest::Approx(0.625).epsilon(1e-15));
  // leftmost shoulder plateau anchored at 0 clips at the domain edge
  CHECK(hier.lower[0] == 0.0);
  CHECK(hier.upper[0] == doctest::Approx(0.125).epsilon(1e-15));
  // rule-weight genes range over the full unit interval
  const std::size_t first_weight = 52;
  for (std::size_t i = first_weight; i < kHierParametricPerFis; ++i) {
    CHECK(hier.lower[i] == 0.0);
    CHECK(hier.upper[i] == 1.0);
  }

  const auto classic = default_bounds(Scheme::Classic);
  const std::size_t classic_mid_peak = 3 + 1;  // t2's b
  CHECK(classic.lower[classic_mid_peak] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(classic.upper[classic_mid_peak] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("random chromosomes are deterministic and bound-compliant") {
  const auto bounds = default_bounds(Scheme::Hier);
  CHECK(random_chromosome(Scheme::Hier, bounds, 77) == random_chromosome(Scheme::Hier, bounds, 77));
  CHECK(random_chromosome(Scheme::Hier, bounds, 77) != random_chromosome(Scheme::Hier, bounds, 78));

  // one bounded gene sampled many times stays inside its interval
  const std::size_t gene = 6;  // t2's b, bounds [0.375, 0.625]
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto c = random_chromosome(Scheme::Hier, bounds, s);
    lo = std::min(lo, c.parametric[gene]);
    hi = std::max(hi, c.parametric[gene]);
  }
  CHECK(lo >= bounds.lower[gene]);
  CHECK(hi <= bounds.upper[gene]);
  CHECK(hi - lo > 0.8 * (bounds.upper[gene] - bounds.lower[gene]));  // actually explores the interval

  // control genes are fair coins
  long ones = 0, total = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto c = random_chromosome(Scheme::Hier, bounds, 10000 + s);
    for (const auto g : c.control) {
      ones += g;
      ++total;
    }
  }
  const double fraction = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +/- 0.02
}

TEST_CASE("consequent assignment is the rounded diagonal ramp") {
  const auto t3 = assign_consequents({3, 3, 3}, 3);
  CHECK(t3[0] == 0);    // cell (0,0,0)
  CHECK(t3[26] == 2);   // cell (2,2,2)
  const auto t5 = assign_consequents({5, 5, 5}, 5);
  CHECK(t5[0] == 0);
  CHECK(t5[124] == 4);                  // cell (4,4,4)
  CHECK(t5[2 * 25 + 2 * 5 + 2] == 2);   // cell (2,2,2)
}

TEST_CASE("chromosome line round trip") {
  Rng rng(31337);
  for (const auto scheme : {Scheme::Classic, Scheme::Hier}) {
    const auto bounds = default_bounds(scheme);
    for (int trial = 0; trial < 20; ++trial) {
      const auto c = random_chromosome(scheme, bounds, rng.index(1u << 31));
      const auto back = chromosome_from_line(chromosome_to_line(c));
      CHECK(back == c);
    }
  }
  CHECK_THROWS_AS(chromosome_from_line("0.5 not-a-number"), CodecError);
}
