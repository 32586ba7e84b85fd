#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sap/core.hpp"
#include "sap/rational.hpp"

namespace sap {

// Free space above the baseline B under the placed large tasks: u'_e is the
// gap height available to small tasks on edge e.
struct PseudoProfile {
  int lo = 0;  // edges [lo, hi)
  int hi = 0;
  long long B = 0;
  std::vector<long long> u_prime;

  long long at(int e) const { return u_prime.at(e - lo); }
};

// Requires uniform capacities and that no placed large task crosses the
// segment E' x B (input error otherwise).
PseudoProfile pseudo_capacities(const SapInstance& instance, const Placement& large_placement, int lo, int hi,
                                long long B);

// delta'-jammed: path inside the profile's span, B <= h, h + d <= B + u'_e on
// every edge, and d > delta' * u'_e somewhere (strict).
bool is_jammed(const SapInstance& instance, const Task& task, const PseudoProfile& profile, const Rat& delta_prime,
               long long h);

struct JammedParams {
  Rat delta = Rat(1, 2);        // large iff d > delta * b
  Rat delta_prime = Rat(1, 2);  // jammedness threshold
  Rat epsilon = Rat(1, 4);
  std::vector<long long> height_set;  // empty: {0..U}
  long long state_budget = 4000000;
};

// Whole-placement check for the B-simple jammed class: larges do not cross
// the baseline, smalls lie above it, below every large above the baseline on
// shared edges, and each small is delta'-jammed for the placed larges.
bool is_b_simple_jammed(const SapInstance& instance, const Placement& placement, long long B,
                        const JammedParams& params);

// Exact (over the discretized height set) maximum-profit B-simple jammed
// solution; the recursion peels the lowest small task and guesses its
// bottleneck column.
SolveResult solve_b_simple_jammed(const SapInstance& instance, long long B, const JammedParams& params);

// Anchor heights: H = sums of at most 1/delta task sizes (capped at U), H_0
// adds H-shifted powers of (1+delta'), H_{l+1} = H_l u {h - d_i}.
struct AnchorSet {
  std::vector<long long> H;
  std::vector<long long> H0;
  std::vector<std::vector<long long>> levels;  // levels[l] = H_l, l >= 0
};

AnchorSet anchor_heights(const SapInstance& instance, const Rat& delta, const Rat& delta_prime, int levels);

// Multi-subpath jammed solver: sweeps left to right, guessing segment
// boundaries, per-segment baselines and boundary large tasks, and solving
// each segment with the B-simple machinery.
SolveResult solve_jammed(const SapInstance& instance, const JammedParams& params);

}  // namespace sap
