#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sap {

// A task occupies the edges [s, t) of the path; edge j connects vertices
// j and j+1. Heights are integral: demands and capacities are integers, so
// integer height levels lose no generality.
struct Task {
  std::string id;
  int s = 0;
  int t = 0;
  long long d = 1;  // size
  long long w = 0;  // profit

  bool uses_edge(int e) const { return s <= e && e < t; }
  bool overlaps_path(const Task& o) const { return s < o.t && o.s < t; }
};

class SapInstance {
 public:
  SapInstance() = default;
  SapInstance(std::vector<long long> capacities, std::vector<Task> tasks);

  int num_edges() const { return static_cast<int>(capacities_.size()); }
  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  const std::vector<long long>& capacities() const { return capacities_; }
  long long capacity(int e) const { return capacities_.at(e); }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(int idx) const { return tasks_.at(idx); }
  const Task& task(const std::string& id) const;
  bool has_task(const std::string& id) const { return index_.count(id) > 0; }
  int task_index(const std::string& id) const;

  bool uniform() const;
  long long max_capacity() const;

 private:
  std::vector<long long> capacities_;
  std::vector<Task> tasks_;
  std::map<std::string, int> index_;
};

struct Placement {
  std::map<std::string, long long> heights;  // task id -> height level

  bool contains(const std::string& id) const { return heights.count(id) > 0; }
  void place(const std::string& id, long long h) { heights[id] = h; }
  size_t size() const { return heights.size(); }
  bool empty() const { return heights.empty(); }
};

struct Violation {
  enum class Kind { CapacityExceeded, Overlap };
  Kind kind;
  std::string task_a;
  std::string task_b;  // empty for capacity violations
  int edge = -1;

  std::string describe() const;
};

// Solver output. `refused` marks a blown state budget: the placement is the
// best found so far, never an unmarked approximation of the contract.
struct SolveResult {
  Placement placement;
  long long profit = 0;
  bool refused = false;
  std::string note;
};

// min over P(i) of u_e.
long long bottleneck(const SapInstance& instance, const Task& task);

// nullopt: placement is feasible. Otherwise the lexicographically first
// violation (capacity checks per task in id order, then task pairs in id
// order). Unknown task ids are input errors, not violations.
std::optional<Violation> check_feasible(const SapInstance& instance, const Placement& placement);

long long profit(const SapInstance& instance, const Placement& placement);

// Sum of demands of placed tasks on `edge` (the UFP relaxation quantity).
long long edge_load(const SapInstance& instance, const Placement& placement, int edge);

}  // namespace sap
