#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sap/core.hpp"
#include "sap/lp.hpp"
#include "sap/rational.hpp"
#include "sap/rng.hpp"

namespace sap {

// Staircase-shaped region (e_L, e_M, e_R, f, T'_L, h'). Small tasks assigned
// to it must cross e_M at height >= u_{e_L}; large tasks live inside
// P_{e_M,e_R} between f and u_{e_M}. e_R left of e_L mirrors the block.
struct StairBlock {
  int e_L = 0;
  int e_M = 0;
  int e_R = 0;
  std::vector<std::pair<int, long long>> f_steps;            // breakpoints (edge, value), step holds until next
  std::vector<std::pair<std::string, long long>> fixed;      // T'_L with heights

  bool mirrored() const { return e_R < e_L; }
  // Geometric interval [lo, hi) of P_{e_M,e_R} (inclusive of both edges).
  int span_lo() const { return std::min(e_M, e_R); }
  int span_hi() const { return std::max(e_M, e_R) + 1; }
  // f(e): u_{e_L} on e_M and on the e_L side of e_M; steps elsewhere.
  long long f_at(const SapInstance& instance, int e) const;
  // P(SB): from the edge adjacent to e_L (on the e_M side) through e_R.
  bool in_block_path(int e) const;
  std::string describe() const;
};

struct StairParams {
  Rat delta = Rat(1, 2);  // task i is large iff d_i > delta * b(i)
  Rat epsilon = Rat(1, 4);
  Rat alpha = Rat(833, 100);
  uint64_t seed = 1;
  long long state_budget = 2000000;
  int max_w_guesses = 64;
};

// One column of LP_SB: a set of large tasks with heights.
struct Configuration {
  std::vector<std::pair<std::string, long long>> tasks;
  long long weight = 0;
  std::string signature() const;
};

struct SmallPair {
  std::string id;
  long long t = 0;
};

struct StairLpSolution {
  bool window_infeasible = false;  // no configuration with weight in [W, (1+eps)W)
  double objective = 0.0;
  std::vector<Configuration> configs;   // generated columns
  std::vector<double> config_value;     // y*
  std::vector<SmallPair> pairs;         // x variables
  std::vector<double> pair_value;       // x*
  int iterations = 0;
};

// Single-task admission into the block (with an explicit height).
bool fits_into_stair_block(const SapInstance& instance, const StairBlock& sb, const Placement& placement,
                           const Rat& delta);

// Candidate enumeration used by the LP and the DPs.
std::vector<std::string> stair_large_candidates(const SapInstance& instance, const StairBlock& sb, const Rat& delta);
std::vector<SmallPair> stair_small_pairs(const SapInstance& instance, const StairBlock& sb, const Rat& delta);
bool single_task_fits_block(const SapInstance& instance, const StairBlock& sb, const Task& task, const Rat& delta);

// Dual separation: maximizes w_C - sum of point costs over configurations in
// the weight window. alpha_duals maps (e, t) to the con:point dual, beta to
// (e, t, task) for con:position-j. Returns the best configuration and its
// reduced cost (before subtracting gamma).
struct SeparationResult {
  bool found = false;
  Configuration config;
  double reduced_value = 0.0;  // w_C - point costs
};

SeparationResult separate_dual(const SapInstance& instance, const StairBlock& sb, const Rat& delta,
                               const std::map<std::pair<int, long long>, double>& alpha_duals,
                               const std::map<std::tuple<int, long long, std::string>, double>& beta_duals,
                               long long weight_lo, long long weight_hi_exclusive, long long state_budget);

// Column generation for LP_SB at weight guess W (window [W, (1+eps)W)).
// use_configs = false solves LP'_SB (small tasks only).
StairLpSolution solve_lp_sb(const SapInstance& instance, const StairBlock& sb, const StairParams& params,
                            long long W, bool use_configs = true);

// Randomized rounding with alteration; returns the better of the sampled
// configuration route and the small-only route. Placement excludes the fixed
// tasks of the block.
Placement round_stair_lp(const SapInstance& instance, const StairBlock& sb, const StairParams& params,
                         const StairLpSolution& with_configs, const StairLpSolution& small_only, uint64_t seed);

// Problematic pairs of an LP solution: coverage by configurations > 1 - eta.
std::vector<SmallPair> problematic_pairs(const StairLpSolution& sol, const SapInstance& instance, double eta);

// Best-of-W-grid single-block solver (new tasks only; fixed tasks excluded).
SolveResult solve_stair_block(const SapInstance& instance, const StairBlock& sb, const StairParams& params);

// Pairwise-compatible block composition: partitions candidates by their
// unique fitting block, solves each block, unions the results plus all fixed
// tasks. Throws std::invalid_argument on incompatible blocks.
SolveResult compose_stair_blocks(const SapInstance& instance, const std::vector<StairBlock>& blocks,
                                 const StairParams& params);

bool blocks_compatible(const SapInstance& instance, const StairBlock& a, const StairBlock& b, const Rat& delta);

// Left-to-right DP over edges with cells (edge, active blocks, active large
// tasks with heights); block weights precomputed via solve_stair_block.
struct StairSolutionParams {
  StairParams stair;
  int gamma = 3;  // per-edge multiplicity cap for blocks and for T_L^0 tasks
};

SolveResult solve_stair_solution(const SapInstance& instance, const std::vector<StairBlock>& candidate_blocks,
                                 const StairSolutionParams& params);

// blocks.json: {"blocks":[{"e_L":..,"e_M":..,"e_R":..,"f":[[edge,value],..],
//                          "fixed":[{"id":..,"h":..},..]},..]}
std::vector<StairBlock> blocks_from_json(const std::string& text);
std::string blocks_to_json(const std::vector<StairBlock>& blocks);

}  // namespace sap
