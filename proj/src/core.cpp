#include "sap/core.hpp"

#include <algorithm>

namespace sap {

SapInstance::SapInstance(std::vector<long long> capacities, std::vector<Task> tasks)
    : capacities_(std::move(capacities)), tasks_(std::move(tasks)) {
  if (capacities_.empty()) throw std::invalid_argument("instance needs at least one edge");
  for (long long u : capacities_) {
    if (u < 1) throw std::invalid_argument("edge capacities must be >= 1");
  }
  const int m = num_edges();
  for (int i = 0; i < static_cast<int>(tasks_.size()); ++i) {
    const Task& task = tasks_[i];
    if (task.id.empty()) throw std::invalid_argument("task id must be nonempty");
    if (!(0 <= task.s && task.s < task.t && task.t <= m))
      throw std::invalid_argument("task " + task.id + ": path [" + std::to_string(task.s) + "," +
                                  std::to_string(task.t) + ") not inside [0," + std::to_string(m) + "]");
    if (task.d < 1) throw std::invalid_argument("task " + task.id + ": size must be >= 1");
    if (task.w < 0) throw std::invalid_argument("task " + task.id + ": profit must be >= 0");
    if (!index_.emplace(task.id, i).second) throw std::invalid_argument("duplicate task id " + task.id);
  }
}

const Task& SapInstance::task(const std::string& id) const { return tasks_[task_index(id)]; }

int SapInstance::task_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::invalid_argument("unknown task id " + id);
  return it->second;
}

bool SapInstance::uniform() const {
  return std::all_of(capacities_.begin(), capacities_.end(),
                     [&](long long u) { return u == capacities_.front(); });
}

long long SapInstance::max_capacity() const {
  return *std::max_element(capacities_.begin(), capacities_.end());
}

std::string Violation::describe() const {
  if (kind == Kind::CapacityExceeded)
    return "task " + task_a + " exceeds capacity on edge " + std::to_string(edge);
  return "tasks " + task_a + " and " + task_b + " overlap on edge " + std::to_string(edge);
}

long long bottleneck(const SapInstance& instance, const Task& task) {
  long long b = instance.capacity(task.s);
  for (int e = task.s + 1; e < task.t; ++e) b = std::min(b, instance.capacity(e));
  return b;
}

std::optional<Violation> check_feasible(const SapInstance& instance, const Placement& placement) {
  // placement.heights is an ordered map, so iteration is in id order and the
  // first violation found is the lexicographically first one.
  for (const auto& [id, h] : placement.heights) {
    const Task& task = instance.task(id);  // throws on unknown id
    if (h < 0) return Violation{Violation::Kind::CapacityExceeded, id, "", task.s};
    for (int e = task.s; e < task.t; ++e) {
      if (h + task.d > instance.capacity(e)) return Violation{Violation::Kind::CapacityExceeded, id, "", e};
    }
  }
  for (auto ita = placement.heights.begin(); ita != placement.heights.end(); ++ita) {
    const Task& a = instance.task(ita->first);
    for (auto itb = std::next(ita); itb != placement.heights.end(); ++itb) {
      const Task& b = instance.task(itb->first);
      if (!a.overlaps_path(b)) continue;
      const long long ha = ita->second, hb = itb->second;
      if (ha < hb + b.d && hb < ha + a.d) {
        return Violation{Violation::Kind::Overlap, a.id, b.id, std::max(a.s, b.s)};
      }
    }
  }
  return std::nullopt;
}

long long profit(const SapInstance& instance, const Placement& placement) {
  long long sum = 0;
  for (const auto& [id, h] : placement.heights) sum += instance.task(id).w;
  return sum;
}

long long edge_load(const SapInstance& instance, const Placement& placement, int edge) {
  long long sum = 0;
  for (const auto& [id, h] : placement.heights) {
    const Task& task = instance.task(id);
    if (task.uses_edge(edge)) sum += task.d;
  }
  return sum;
}

}  // namespace sap
