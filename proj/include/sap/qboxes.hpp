#pragma once

#include <map>
#include <string>
#include <vector>

#include "sap/boxes.hpp"
#include "sap/core.hpp"
#include "sap/rational.hpp"

namespace sap {

// Step function underestimating the demand profile of tasks through a fixed
// edge e0: non-decreasing up to e0, non-increasing after.
struct StepProfile {
  int e0 = 0;
  int lo = 0;                    // profile covers edges [lo, hi)
  int hi = 0;
  std::vector<long long> value;  // per edge in [lo, hi)

  long long at(int e) const { return (e < lo || e >= hi) ? 0 : value[e - lo]; }
  int step_count() const;
  // Edges where the profile exceeds a neighbor (the only binding edges for
  // through-e0 task sets).
  std::vector<int> upper_step_edges() const;
};

struct RoundedProfile {
  StepProfile profile;
  std::vector<std::string> survivors;
  long long discarded_weight = 0;
};

// Density-class rounding: tasks grouped by floor(log2(w/d)); per class and
// side, endpoint positions are merged greedily (cheapest first) until at most
// step_budget remain, discarding the tasks at merged positions. The returned
// profile is exactly the surviving demand profile, so survivors fit it and it
// underestimates the input profile edge by edge.
RoundedProfile round_profile(const SapInstance& instance, int e0, const std::vector<std::string>& task_ids,
                             int step_budget, const Rat& epsilon);

// Exact assignment DP of small tasks through e0 into boxes with capacity
// profiles. Cells: (task index, residual capacity at every upper-step edge).
struct ProfileFillResult {
  std::map<std::string, int> assignment;  // task id -> box index
  long long profit = 0;
  bool refused = false;
};

ProfileFillResult fill_profiles_dp(const SapInstance& instance, int e0, const std::vector<StepProfile>& profiles,
                                   const std::vector<std::string>& task_ids, long long state_budget = 2000000);

// Recursive middle-edge solver. Boxes crossing the middle edge are either
// task rectangles or grid boxes filled through pool-generated rounded
// profiles; recursion proceeds on both sides with inherited occupancy.
struct QBoxableParams {
  int beta = 2;
  Rat epsilon = Rat(1, 2);
  int profile_pool = 64;
  int step_budget = 4;
  long long state_budget = 100000;
  uint64_t seed = 1;
  std::vector<long long> height_candidates;  // default grid when empty
  std::vector<long long> size_candidates;
};

SolveResult solve_boxable_recursive(const SapInstance& instance, const QBoxableParams& params);

// Weight rescaling so max w = n/eps, dropping tasks that land below 1.
// Returns the rescaled instance and the surviving original ids.
std::pair<SapInstance, std::vector<std::string>> rescale_weights(const SapInstance& instance, const Rat& epsilon);

}  // namespace sap
