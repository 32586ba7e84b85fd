#pragma once

#include <vector>

#include "sap/boxes.hpp"
#include "sap/core.hpp"
#include "sap/rational.hpp"

namespace sap {

// Nested stack of at most beta boxes of height floor(U/beta) at heights
// (j-1)*floor(U/beta).
struct PileSpec {
  std::vector<Box> boxes;
};

struct PileParams {
  int beta = 2;
  Rat epsilon = Rat(1, 2);
  Rat delta = Rat(1, 2);  // large iff d > delta * b
  uint64_t seed = 1;
  int max_edges = 24;
  long long state_budget = 500000;
};

// Geometry check for an enumerated pile.
bool valid_pile(const SapInstance& instance, const PileSpec& pile, int beta);

// Single-pile solver: enumerates nested endpoint tuples, fills small tasks
// via the box assignment LP rounding, then sweeps large tasks at anti-gravity
// heights {U - h1 : h1 in H}.
SolveResult solve_single_pile(const SapInstance& instance, const PileParams& params);

// Subpath-partition DP with boundary large tasks, one pile per segment.
SolveResult solve_pile(const SapInstance& instance, const PileParams& params);

}  // namespace sap
