#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sap/boxes.hpp"
#include "sap/core.hpp"
#include "sap/rational.hpp"
#include "sap/stair.hpp"

namespace sap {

enum class GenKind {
  UniformRandom,
  PlantedBoxable,
  PlantedPile,
  PlantedLaminar,
  PlantedJammed,
  PlantedStair,
};

GenKind gen_kind_from_string(const std::string& s);
std::string to_string(GenKind k);

struct GenSpec {
  GenKind kind = GenKind::UniformRandom;
  int n = 8;           // task count target (uniform-random) / content scale (planted)
  int m = 4;           // edges
  long long U = 8;     // capacity scale
  uint64_t seed = 1;
  int beta = 2;
  Rat epsilon = Rat(1, 4);
  Rat delta = Rat(1, 4);        // planted classification boundary
  Rat delta_prime = Rat(1, 2);  // jammedness (planted-jammed)
};

// Ground truth emitted alongside planted instances.
struct PlantedStructure {
  Placement placement;
  long long profit = 0;
  long long large_profit = 0;
  long long small_profit = 0;
  std::vector<std::string> large_ids;
  std::vector<Box> boxes;                     // boxable / pile / laminar structure
  std::vector<StairBlock> blocks;             // stair candidates
  std::vector<std::pair<int, int>> segments;  // jammed subpaths
  std::vector<long long> baselines;           // jammed per-segment B
  std::vector<long long> golden_heights;      // height/size hints for the solvers
  std::vector<long long> golden_sizes;
};

struct Generated {
  SapInstance instance;
  std::optional<PlantedStructure> planted;
};

// Deterministic in the spec (including the seed); planted placements are
// validated with check_feasible before returning.
Generated generate_instance(const GenSpec& spec);

}  // namespace sap
