#pragma once

#include <vector>

#include "sap/core.hpp"
#include "sap/rational.hpp"

namespace sap {

// Size-classification thresholds delta_k = eps^(10k/eps^k),
// mu_k = eps^(10(k+1)/eps^(k+1)), k = 1..1/eps, in exact rational arithmetic.
struct ThresholdTuple {
  int k = 0;
  Rat mu;
  Rat delta;
};

// Requires 0 < eps <= 1/3 and 1/eps integral.
std::vector<ThresholdTuple> threshold_tuples(const Rat& epsilon);

// Partition of the task ids by size class: large (d > delta*b), small
// (d <= mu*b), middle (the rest; dropped by the downstream solvers).
struct TaskSplit {
  std::vector<std::string> small;
  std::vector<std::string> middle;
  std::vector<std::string> large;
};

TaskSplit split_tasks(const SapInstance& instance, const Rat& mu, const Rat& delta);

// ceil(log2(u_e) / delta^2), computed exactly: the smallest k with
// 2^(k*p^2) >= u^(q^2) for delta = p/q. Any feasible solution places at most
// this many large tasks on one edge, which both caps solver state sizes and
// serves as an audit on oracle output.
long long large_per_edge_bound(long long u_e, const Rat& delta);

}  // namespace sap
