#include "sap/oracle.hpp"

#include <algorithm>
#include <chrono>

#include "sap/lp.hpp"

namespace sap {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  mutable int counter = 0;
  void check() const {
    if (++counter % 4096 == 0 && Clock::now() > end)
      throw OracleRefused("oracle time budget exceeded");
  }
};

void enforce_limits(const SapInstance& instance, size_t n_tasks, const OracleLimits& limits) {
  if (static_cast<int>(n_tasks) > limits.max_tasks)
    throw OracleRefused("oracle limit: " + std::to_string(n_tasks) + " tasks > max " +
                        std::to_string(limits.max_tasks));
  if (instance.max_capacity() > limits.max_capacity)
    throw OracleRefused("oracle limit: capacity " + std::to_string(instance.max_capacity()) + " > max " +
                        std::to_string(limits.max_capacity));
}

bool fits_at(const SapInstance& instance, const Task& task, long long h,
             const std::vector<std::pair<const Task*, long long>>& placed) {
  for (int e = task.s; e < task.t; ++e) {
    if (h + task.d > instance.capacity(e)) return false;
  }
  for (const auto& [other, oh] : placed) {
    if (task.overlaps_path(*other) && h < oh + other->d && oh < h + task.d) return false;
  }
  return true;
}

bool pack_rec(const SapInstance& instance, const std::vector<const Task*>& order, size_t idx,
              std::vector<std::pair<const Task*, long long>>& placed, const Deadline& deadline) {
  deadline.check();
  if (idx == order.size()) return true;
  const Task& task = *order[idx];
  const long long top = bottleneck(instance, task) - task.d;
  for (long long h = 0; h <= top; ++h) {
    if (!fits_at(instance, task, h, placed)) continue;
    placed.emplace_back(&task, h);
    if (pack_rec(instance, order, idx + 1, placed, deadline)) return true;
    placed.pop_back();
  }
  return false;
}

// Fractional UFP relaxation bound for the still-undecided tasks, given the
// per-edge capacity already consumed by committed tasks.
double ufp_bound(const SapInstance& instance, const std::vector<const Task*>& undecided,
                 const std::vector<long long>& used) {
  if (undecided.empty()) return 0.0;
  LpModel lp;
  lp.direction = Direction::Maximize;
  for (size_t i = 0; i < undecided.size(); ++i) {
    int v = lp.add_variable("x" + std::to_string(i), static_cast<double>(undecided[i]->w));
    lp.add_constraint("ub" + std::to_string(i), Sense::LE, 1.0, {{v, 1.0}});
  }
  for (int e = 0; e < instance.num_edges(); ++e) {
    std::vector<std::pair<int, double>> coeffs;
    for (size_t i = 0; i < undecided.size(); ++i) {
      if (undecided[i]->uses_edge(e)) coeffs.emplace_back(static_cast<int>(i), static_cast<double>(undecided[i]->d));
    }
    if (!coeffs.empty())
      lp.add_constraint("cap" + std::to_string(e), Sense::LE, static_cast<double>(instance.capacity(e) - used[e]),
                        std::move(coeffs));
  }
  LpSolution<double> sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal) return 0.0;
  return sol.objective;
}

}  // namespace

std::optional<Placement> can_pack(const SapInstance& instance, const std::vector<std::string>& task_ids,
                                  const OracleLimits& limits) {
  enforce_limits(instance, task_ids.size(), limits);
  std::vector<const Task*> order;
  order.reserve(task_ids.size());
  for (const auto& id : task_ids) order.push_back(&instance.task(id));
  std::sort(order.begin(), order.end(), [](const Task* a, const Task* b) {
    if (a->d != b->d) return a->d > b->d;
    return a->id < b->id;
  });
  Deadline deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(limits.time_budget_seconds))};
  std::vector<std::pair<const Task*, long long>> placed;
  if (!pack_rec(instance, order, 0, placed, deadline)) return std::nullopt;
  Placement p;
  for (const auto& [task, h] : placed) p.place(task->id, h);
  return p;
}

OracleResult exact_opt(const SapInstance& instance, const OracleLimits& limits) {
  enforce_limits(instance, instance.num_tasks(), limits);
  Deadline deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(limits.time_budget_seconds))};
  const auto& tasks = instance.tasks();
  const int n = instance.num_tasks();
  OracleResult best;  // empty placement, profit 0

  std::vector<int> chosen;
  std::vector<long long> used(instance.num_edges(), 0);

  // Include-first DFS in task order; the first optimum found wins ties.
  std::function<void(int, long long)> dfs = [&](int idx, long long chosen_profit) {
    deadline.check();
    std::vector<const Task*> undecided;
    for (int i = idx; i < n; ++i) undecided.push_back(&tasks[i]);
    // Profits are integral, so no improvement is possible unless the
    // fractional bound reaches best + 1.
    const double bound = static_cast<double>(chosen_profit) + ufp_bound(instance, undecided, used);
    if (bound <= static_cast<double>(best.profit) + 1.0 - 1e-6) return;
    if (idx == n) {
      if (chosen_profit <= best.profit) return;
      std::vector<std::string> ids;
      for (int i : chosen) ids.push_back(tasks[i].id);
      auto packed = can_pack(instance, ids, limits);
      if (packed) {
        best.placement = *packed;
        best.profit = chosen_profit;
      }
      return;
    }
    const Task& task = tasks[idx];
    bool ufp_ok = true;
    for (int e = task.s; e < task.t && ufp_ok; ++e) {
      if (used[e] + task.d > instance.capacity(e)) ufp_ok = false;
    }
    if (ufp_ok) {
      chosen.push_back(idx);
      for (int e = task.s; e < task.t; ++e) used[e] += task.d;
      dfs(idx + 1, chosen_profit + task.w);
      for (int e = task.s; e < task.t; ++e) used[e] -= task.d;
      chosen.pop_back();
    }
    dfs(idx + 1, chosen_profit);
  };
  dfs(0, 0);
  return best;
}

OracleResult exact_opt_restricted(const SapInstance& instance, const OracleLimits& limits,
                                  const PlacementPredicate& predicate) {
  enforce_limits(instance, instance.num_tasks(), limits);
  if (!predicate.accept_final) throw std::invalid_argument("predicate.accept_final required");
  Deadline deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(limits.time_budget_seconds))};
  const auto& tasks = instance.tasks();
  const int n = instance.num_tasks();
  std::vector<long long> suffix_profit(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) suffix_profit[i] = suffix_profit[i + 1] + tasks[i].w;

  OracleResult best;
  bool have_best = false;
  Placement current;
  std::vector<std::pair<const Task*, long long>> placed;

  std::function<void(int, long long)> dfs = [&](int idx, long long cur_profit) {
    deadline.check();
    if (have_best && cur_profit + suffix_profit[idx] <= best.profit) return;
    if (idx == n) {
      if (!predicate.accept_final(instance, current)) return;
      if (!have_best || cur_profit > best.profit) {
        best.placement = current;
        best.profit = cur_profit;
        have_best = true;
      }
      return;
    }
    const Task& task = tasks[idx];
    // Skip branch explored after the include branches so that, at equal
    // profit, placements containing earlier tasks win.
    const long long top = bottleneck(instance, task) - task.d;
    for (long long h = 0; h <= top; ++h) {
      if (!fits_at(instance, task, h, placed)) continue;
      placed.emplace_back(&task, h);
      current.place(task.id, h);
      if (!predicate.accept_partial || predicate.accept_partial(instance, current)) {
        dfs(idx + 1, cur_profit + task.w);
      }
      current.heights.erase(task.id);
      placed.pop_back();
    }
    dfs(idx + 1, cur_profit);
  };
  dfs(0, 0);
  if (!have_best) {
    // The empty placement must be acceptable for a well-formed predicate.
    Placement empty;
    if (predicate.accept_final(instance, empty)) {
      best.placement = empty;
      best.profit = 0;
    } else {
      throw std::invalid_argument("predicate rejects every placement including the empty one");
    }
  }
  return best;
}

}  // namespace sap
