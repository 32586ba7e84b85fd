#include "doctest.h"
#include "sap/oracle.hpp"
#include "sap/qboxes.hpp"
#include "sap/rng.hpp"

using namespace sap;

namespace {

SapInstance crossing_instance(Rng& rng, int m, int e0, int n, long long max_d) {
  std::vector<Task> tasks;
  for (int i = 0; i < n; ++i) {
    Task t;
    t.id = "t" + std::to_string(i);
    t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(e0 + 1)));
    t.t = e0 + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - e0)));
    t.d = rng.next_int(1, max_d);
    t.w = rng.next_int(1, 9);
    tasks.push_back(t);
  }
  return SapInstance(std::vector<long long>(m, 64), tasks);
}

}  // namespace

TEST_CASE("round_profile: one task gives its own one-step profile") {
  SapInstance inst({8, 8, 8}, {Task{"a", 0, 3, 4, 5}});
  auto rp = round_profile(inst, 1, {"a"}, 4, Rat(1, 2));
  CHECK(rp.survivors == std::vector<std::string>{"a"});
  CHECK(rp.discarded_weight == 0);
  CHECK(rp.profile.at(0) == 4);
  CHECK(rp.profile.at(2) == 4);
  CHECK(rp.profile.step_count() <= 2);
}

TEST_CASE("round_profile: nested equal-density tasks with a large budget all survive") {
  SapInstance inst({16, 16, 16, 16},
                   {Task{"a", 0, 4, 2, 2}, Task{"b", 1, 3, 3, 3}, Task{"c", 1, 4, 1, 1}});
  auto rp = round_profile(inst, 2, {"a", "b", "c"}, 8, Rat(1, 2));
  CHECK(rp.survivors.size() == 3);
  CHECK(rp.discarded_weight == 0);
  // Exact profile equals the demand profile.
  CHECK(rp.profile.at(1) == 6);
}

TEST_CASE("round_profile underestimates and survivors fit, with explicit accounting") {
  Rng rng(11);
  SapInstance inst = crossing_instance(rng, 6, 2, 12, 4);
  std::vector<std::string> ids;
  long long total = 0;
  for (const Task& t : inst.tasks()) {
    ids.push_back(t.id);
    total += t.w;
  }
  auto rp = round_profile(inst, 2, ids, 4, Rat(1, 2));
  // Underestimation is exact per edge.
  for (int e = 0; e < inst.num_edges(); ++e) {
    long long g = 0;
    for (const Task& t : inst.tasks()) {
      if (t.uses_edge(e)) g += t.d;
    }
    CHECK(rp.profile.at(e) <= g);
  }
  // Survivors fit the profile exactly and the accounting adds up.
  long long surv = 0;
  for (const auto& id : rp.survivors) surv += inst.task(id).w;
  CHECK(surv + rp.discarded_weight == total);
  for (int e = 0; e < inst.num_edges(); ++e) {
    long long load = 0;
    for (const auto& id : rp.survivors) {
      if (inst.task(id).uses_edge(e)) load += inst.task(id).d;
    }
    CHECK(load <= rp.profile.at(e));
  }
  // Seed-11 accounting freeze: surviving weight at least (1-eps) of total
  // at eps = 1/2.
  CHECK(Rat(static_cast<long>(surv)) >= (1 - Rat(1, 2)) * Rat(static_cast<long>(total)));
}

TEST_CASE("fill_profiles_dp trivial cases") {
  SapInstance inst({8, 8}, {Task{"a", 0, 2, 2, 3}, Task{"b", 1, 2, 1, 2}});
  // Zero boxes: empty assignment.
  auto none = fill_profiles_dp(inst, 1, {}, {"a", "b"});
  CHECK(none.assignment.empty());
  CHECK(none.profit == 0);
  // One box with enough capacity takes everything.
  StepProfile big;
  big.e0 = 1;
  big.lo = 0;
  big.hi = 2;
  big.value = {3, 3};
  auto all = fill_profiles_dp(inst, 1, {big}, {"a", "b"});
  CHECK(all.profit == 5);
  CHECK(all.assignment.size() == 2);
}

TEST_CASE("fill_profiles_dp equals exhaustive assignment enumeration") {
  Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    const int m = 4, e0 = 1;
    SapInstance inst = crossing_instance(rng, m, e0, 1 + static_cast<int>(rng.next_below(6)), 3);
    std::vector<StepProfile> profiles;
    for (int b = 0; b < 2; ++b) {
      StepProfile p;
      p.e0 = e0;
      p.lo = 0;
      p.hi = m;
      p.value.assign(m, 0);
      long long v = rng.next_int(1, 6);
      for (int e = 0; e < m; ++e) {
        if (e <= e0) {
          v = std::min<long long>(v + rng.next_int(0, 2), 8);
        } else {
          v = std::max<long long>(v - rng.next_int(0, 2), 0);
        }
        p.value[e] = v;
      }
      profiles.push_back(std::move(p));
    }
    std::vector<std::string> ids;
    for (const Task& t : inst.tasks()) ids.push_back(t.id);
    auto dp = fill_profiles_dp(inst, e0, profiles, ids);
    REQUIRE(!dp.refused);

    // Exhaustive 3^n enumeration oracle.
    const int n = inst.num_tasks();
    long long best = 0;
    std::vector<int> choice(n, -1);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        std::vector<std::vector<long long>> load(2, std::vector<long long>(m, 0));
        long long w = 0;
        for (int j = 0; j < n; ++j) {
          if (choice[j] < 0) continue;
          const Task& t = inst.task(j);
          w += t.w;
          for (int e = t.s; e < t.t; ++e) load[choice[j]][e] += t.d;
        }
        for (int b = 0; b < 2; ++b) {
          for (int e = 0; e < m; ++e) {
            if (load[b][e] > profiles[b].at(e)) return;
          }
        }
        best = std::max(best, w);
        return;
      }
      for (int c = -1; c < 2; ++c) {
        choice[i] = c;
        rec(i + 1);
      }
      choice[i] = -1;
    };
    rec(0);
    CHECK(dp.profit == best);
  }
}

TEST_CASE("rescale_weights drops exactly the sub-threshold tasks") {
  SapInstance inst({8}, {Task{"a", 0, 1, 1, 100}, Task{"b", 0, 1, 1, 1}, Task{"c", 0, 1, 1, 10}});
  auto [scaled, ids] = rescale_weights(inst, Rat(1, 2));
  // Threshold: 100 * (1/2) / 3 = 50/3 = 16.67; only "a" survives.
  CHECK(ids == std::vector<std::string>{"a"});
  CHECK(scaled.num_tasks() == 1);
}

TEST_CASE("solve_boxable_recursive equals exact knapsack on a single edge") {
  SapInstance inst({10}, {Task{"a", 0, 1, 4, 7}, Task{"b", 0, 1, 5, 6}, Task{"c", 0, 1, 3, 4}, Task{"d", 0, 1, 2, 2}});
  QBoxableParams params;
  params.beta = 4;
  params.epsilon = Rat(1, 2);
  auto r = solve_boxable_recursive(inst, params);
  auto oracle = exact_opt(inst);
  CHECK(r.profit == oracle.profit);
}

TEST_CASE("solve_boxable_recursive output is always feasible") {
  Rng rng(21);
  for (int round = 0; round < 8; ++round) {
    const int m = 2 + static_cast<int>(rng.next_below(3));
    std::vector<Task> tasks;
    for (int i = 0; i < 5; ++i) {
      Task t;
      t.id = "t" + std::to_string(i);
      t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
      t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - t.s)));
      t.d = rng.next_int(1, 8);
      t.w = rng.next_int(1, 9);
      tasks.push_back(t);
    }
    SapInstance inst(std::vector<long long>(m, 8), tasks);
    QBoxableParams params;
    params.beta = 2;
    params.epsilon = Rat(1, 2);
    params.state_budget = 20000;
    auto r = solve_boxable_recursive(inst, params);
    CHECK(!check_feasible(inst, r.placement));
    CHECK(r.profit == profit(inst, r.placement));
  }
}

TEST_CASE("recursion depth stays logarithmic") {
  // Structural property: the middle-edge recursion halves the span, so a
  // 16-edge instance nests at most ceil(log2(16)) + 1 = 5 levels. Verified
  // indirectly: a single chain of nested tasks still solves quickly within a
  // small budget.
  std::vector<Task> tasks;
  for (int i = 0; i < 8; ++i) tasks.push_back(Task{"t" + std::to_string(i), i, i + 1, 4, 2});
  SapInstance inst(std::vector<long long>(8, 8), tasks);
  QBoxableParams params;
  params.beta = 2;
  params.epsilon = Rat(1, 2);
  params.state_budget = 50000;
  auto r = solve_boxable_recursive(inst, params);
  CHECK(!r.refused);
  CHECK(r.profit == 16);  // all unit-edge tasks fit side by side
}
