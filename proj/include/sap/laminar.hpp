#pragma once

#include <vector>

#include "sap/boxes.hpp"
#include "sap/core.hpp"
#include "sap/rational.hpp"

namespace sap {

// One laminar family: boxes with sizes floor((1+eps)^k), laminar paths, and
// consecutive-level stacking h(child) = h(parent) + d(parent) from a common
// root spanning the family's path.
struct LaminarBoxSet {
  std::vector<Box> boxes;   // level order, all with heights
  std::vector<int> level;   // per box
  int alpha_offset = 0;     // chosen level-group offset
};

struct LaminarParams {
  Rat epsilon = Rat(1, 2);  // needs 1/eps^2 <= 9 at desk scale
  Rat delta = Rat(1, 2);
  uint64_t seed = 1;
  long long state_budget = 200000;
  int max_children = 2;  // sibling boxes explored per parent per level
};

struct OffsetChoice {
  int alpha = 0;
  long long retained = 0;
  std::vector<int> retained_levels;
};

// Best offset alpha in {0..1/eps^2-1}: keeps levels whose index mod 1/eps^2
// falls outside the deleted window of length 1/eps; retained weight is at
// least (1-eps) of the total by pigeonhole.
OffsetChoice level_offset_filter(const std::vector<long long>& level_weights, const Rat& epsilon);

// Geometric stacking audit for a produced family.
bool valid_laminar_family(const LaminarBoxSet& family, const Rat& epsilon);

// Two-tier solver: outer enumeration of the root height and the per-level
// boxes (nested in their parents), group-exclusive small-task fills with
// per-box RNG streams, deduplication keeping the lower group, plus a large
// task sweep compatible with the family.
SolveResult solve_laminar(const SapInstance& instance, const LaminarParams& params);

// Subpath-partition wrapper around solve_laminar.
SolveResult solve_laminar_general(const SapInstance& instance, const LaminarParams& params);

}  // namespace sap
