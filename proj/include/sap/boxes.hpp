#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sap/core.hpp"
#include "sap/rational.hpp"
#include "sap/rng.hpp"

namespace sap {

// Axis-aligned container: subpath [s, t) x height interval of size d.
struct Box {
  int s = 0;
  int t = 0;
  long long d = 1;
  std::optional<long long> h;

  bool uses_edge(int e) const { return s <= e && e < t; }
  bool contains_path(const Task& task) const { return s <= task.s && task.t <= t; }
  std::string describe() const;
};

struct PackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Box-relative heights for the tasks of one box.
using BoxFill = std::map<std::string, long long>;

// Map box index -> fill.
struct BoxAssignment {
  std::vector<BoxFill> per_box;
  long long total_profit(const SapInstance& instance) const;
};

// Non-overlapping box-relative heights in [0, d_B) for tasks whose per-edge
// demand inside the box is at most (1-eps)*d_B and whose sizes are at most
// eps^4 * shelf granularity. First-fit over horizontal shelves of height
// floor(eps^4*d_B); within a shelf tasks are placed at the skyline of their
// path, swept by start vertex. Throws PackingError when some task fits no
// shelf (see docs/shelf_packing.md for the guarantee and its limits).
BoxFill shelf_pack(const SapInstance& instance, const Box& box, const std::vector<std::string>& task_ids,
                   const Rat& epsilon);

// Accepts iff all paths lie inside the box, the set is a singleton or all
// sizes are at most eps^8*d_B, and shelf packing succeeds within height d_B.
std::optional<BoxFill> fits_into_box(const SapInstance& instance, const Box& box,
                                     const std::vector<std::string>& task_ids, const Rat& epsilon);

// BOX-LP rounding: fractional assignment, scaling by (1-2eps), dependent
// rounding to one box per task, per-box alteration in start-vertex order
// keeping cumulative overlapping demand at most (1-eps)*d_B, then shelf
// packing. Candidates are filtered to (task, box) pairs with the path inside
// the box and d_i <= eps^8*d_B.
BoxAssignment assign_tasks_to_boxes(const SapInstance& instance, const std::vector<Box>& boxes,
                                    const std::vector<std::string>& candidates, const Rat& epsilon, uint64_t seed);

// Fractional BOX-LP optimum over the same filtered pairs (the rounding
// baseline the Monte Carlo suites compare against).
double box_lp_value(const SapInstance& instance, const std::vector<Box>& boxes,
                    const std::vector<std::string>& candidates, const Rat& epsilon);

// Best-of-32-seeds single-box fill; candidate filter d_i <= eps^7 * d_B.
BoxFill fill_single_box(const SapInstance& instance, const Box& box, const std::vector<std::string>& candidates,
                        const Rat& epsilon, uint64_t seed);

// Greedy level assignment (leftmost start, rightmost end sweep per level)
// plus removal at the best offset gamma in [beta/eps].
struct HierarchicalDecomposition {
  std::vector<int> level;                           // per box; 0 = removed
  std::vector<std::vector<std::pair<int, int>>> partitions;  // per level: maximal subpaths [s, t)
  std::vector<int> removed;                         // box indices
  int offset = 0;                                   // chosen gamma
  long long removed_weight = 0;
};

HierarchicalDecomposition decompose_box_levels(const std::vector<Box>& boxes,
                                               const std::vector<long long>& box_weights, const Rat& epsilon,
                                               int beta);

// Budgeted search over box sets in the global box order (s, t, d, h):
// single-task boxes are task rectangles at candidate heights, multi-task
// boxes take sizes/heights from the candidate grid and are filled by
// fill_single_box in global order. Refuses (with best-so-far) when the state
// budget runs out.
struct ConstantBoxableParams {
  int beta = 2;
  Rat epsilon = Rat(1, 2);
  std::vector<long long> height_candidates;  // box heights
  std::vector<long long> size_candidates;    // multi-task box sizes
  long long state_budget = 200000;
  uint64_t seed = 1;
  int max_boxes_per_cell = 0;  // 0: default beta^2/eps
};

SolveResult solve_constant_boxable(const SapInstance& instance, const ConstantBoxableParams& params);

// Default candidate grid: all integers in [0, U] when U <= 64, otherwise
// powers of (1+eps) (floored, deduplicated) plus 0 for heights.
std::vector<long long> default_height_grid(const SapInstance& instance, const Rat& epsilon);

}  // namespace sap
