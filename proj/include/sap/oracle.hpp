#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sap/core.hpp"

namespace sap {

// Exact desk-scale solvers. They refuse (throw) rather than degrade, so
// their answers can be trusted as ground truth.
struct OracleLimits {
  int max_tasks = 10;
  long long max_capacity = 16;
  double time_budget_seconds = 60.0;
};

struct OracleRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Placement placement;
  long long profit = 0;
};

// Feasible placement for exactly `task_ids`, or nullopt if none exists.
// Backtracking over integer heights in increasing order (deterministic),
// tasks ordered by descending size.
std::optional<Placement> can_pack(const SapInstance& instance, const std::vector<std::string>& task_ids,
                                  const OracleLimits& limits = {});

// Profit-maximal feasible placement. Branch and bound over task subsets with
// a per-edge UFP LP relaxation bound; can_pack at the leaves. Ties resolved
// toward subsets containing lexicographically earlier ids.
OracleResult exact_opt(const SapInstance& instance, const OracleLimits& limits = {});

// Restricted oracle: maximizes only over placements accepted by `accept_final`.
// `accept_partial`, when given, must be a sound overapproximation (it may
// accept partial placements that cannot be completed, but must never reject
// a prefix of an acceptable full placement); it is used for pruning only.
struct PlacementPredicate {
  std::function<bool(const SapInstance&, const Placement&)> accept_final;
  std::function<bool(const SapInstance&, const Placement&)> accept_partial;  // optional
};

OracleResult exact_opt_restricted(const SapInstance& instance, const OracleLimits& limits,
                                  const PlacementPredicate& predicate);

}  // namespace sap
