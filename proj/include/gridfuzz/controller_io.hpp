#pragma once

#include <string>

#include "gridfuzz/codec.hpp"
#include "gridfuzz/fis.hpp"
#include "gridfuzz/scenario.hpp"

namespace gridfuzz {

/// Everything a trained controller needs to run on fresh data: the two FIS
/// documents (authoritative on load), the chromosome it decoded from, and
/// the normalization ranges extracted from its training series.
struct ControllerBundle {
  Scheme scheme = Scheme::Hier;
  Chromosome chromosome;
  FuzzyController controller;
  NormalizationRanges ranges;
};

void save_controller(const ControllerBundle& bundle, const std::string& path);
ControllerBundle load_controller(const std::string& path);

}  // namespace gridfuzz
