#include "sap/pile.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "sap/jammed.hpp"

namespace sap {

namespace {

bool is_large(const SapInstance& instance, const Task& t, const Rat& delta) {
  return Rat(static_cast<long>(t.d)) > delta * Rat(static_cast<long>(bottleneck(instance, t)));
}

bool task_box_clash(const Task& t, long long h, const Box& box) {
  if (t.t <= box.s || box.t <= t.s) return false;
  return h < *box.h + box.d && *box.h < h + t.d;
}

bool task_clash(const Task& a, long long ha, const Task& b, long long hb) {
  return a.overlaps_path(b) && ha < hb + b.d && hb < ha + a.d;
}

// Max-profit placement of large tasks at anti-gravity heights, compatible
// with the boxes and the committed tasks.
std::pair<long long, Placement> sweep_larges(const SapInstance& instance, const PileParams& params,
                                             const std::vector<Box>& boxes,
                                             const std::vector<std::pair<const Task*, long long>>& committed,
                                             const std::set<std::string>& taken, int lo, int hi) {
  const long long U = instance.capacity(0);
  AnchorSet anchors = anchor_heights(instance, params.delta, Rat(1, 2), 0);
  std::vector<long long> grid;
  for (long long h1 : anchors.H) {
    if (U - h1 >= 0) grid.push_back(U - h1);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<const Task*> cands;
  for (const Task& t : instance.tasks()) {
    if (!is_large(instance, t, params.delta)) continue;
    if (t.s < lo || t.t > hi) continue;
    if (taken.count(t.id)) continue;
    bool committed_already = false;
    for (const auto& [ct, ch] : committed) {
      if (ct->id == t.id) committed_already = true;
    }
    if (!committed_already) cands.push_back(&t);
  }
  std::sort(cands.begin(), cands.end(), [](const Task* a, const Task* b) { return a->id < b->id; });

  long long best = 0;
  Placement best_placement;
  std::vector<std::pair<const Task*, long long>> current;
  std::function<void(size_t, long long)> dfs = [&](size_t i, long long sum) {
    if (sum > best) {
      best = sum;
      best_placement = Placement{};
      for (const auto& [t, h] : current) best_placement.place(t->id, h);
    }
    if (i == cands.size()) return;
    dfs(i + 1, sum);
    const Task& t = *cands[i];
    for (long long h : grid) {
      if (h < 0 || h + t.d > U) continue;
      bool ok = true;
      for (const Box& b : boxes) {
        if (task_box_clash(t, h, b)) ok = false;
      }
      for (const auto& [ct, ch] : committed) {
        if (task_clash(t, h, *ct, ch)) ok = false;
      }
      for (const auto& [ot, oh] : current) {
        if (task_clash(t, h, *ot, oh)) ok = false;
      }
      if (!ok) continue;
      current.emplace_back(&t, h);
      dfs(i + 1, sum + t.w);
      current.pop_back();
    }
  };
  dfs(0, 0);
  return {best, best_placement};
}

// Single-pile solver on the edge range [lo, hi), honoring committed tasks.
std::pair<long long, Placement> pile_segment(const SapInstance& instance, const PileParams& params, int lo, int hi,
                                             const std::vector<std::pair<const Task*, long long>>& committed,
                                             bool* refused) {
  const long long U = instance.capacity(0);
  const long long d_box = U / params.beta;
  long long best = -1;
  Placement best_placement;

  // Enumerate nested endpoint tuples for k = 0..beta boxes.
  std::vector<std::pair<int, int>> stack;
  long long tuples = 0;

  std::function<void(int)> consider = [&](int k) {
    if (++tuples > params.state_budget) {
      *refused = true;
      return;
    }
    std::vector<Box> boxes;
    for (int j = 0; j < k; ++j) {
      boxes.push_back(Box{stack[j].first, stack[j].second, d_box, static_cast<long long>(j) * d_box});
    }
    // Boxes must avoid the committed tasks.
    for (const Box& b : boxes) {
      for (const auto& [ct, ch] : committed) {
        if (task_box_clash(*ct, ch, b)) return;
      }
    }
    Placement placement;
    std::set<std::string> taken;
    long long value = 0;
    if (!boxes.empty() && d_box >= 1) {
      std::vector<std::string> cands;
      for (const Task& t : instance.tasks()) {
        if (t.s >= lo && t.t <= hi && !is_large(instance, t, params.delta)) cands.push_back(t.id);
      }
      std::string label = "pile";
      for (const Box& b : boxes) label += "|" + b.describe();
      // Best-of-seeds derandomization of the rounding, one stream per tuple.
      Rng base = Rng(params.seed).derive(label);
      BoxAssignment fill;
      long long fill_profit = -1;
      for (int round = 0; round < 16; ++round) {
        BoxAssignment attempt =
            assign_tasks_to_boxes(instance, boxes, cands, params.epsilon, base.derive(round).next_u64());
        const long long p = attempt.total_profit(instance);
        if (p > fill_profit) {
          fill_profit = p;
          fill = std::move(attempt);
        }
      }
      for (size_t b = 0; b < boxes.size(); ++b) {
        for (const auto& [id, rel] : fill.per_box[b]) {
          placement.place(id, *boxes[b].h + rel);
          taken.insert(id);
          value += instance.task(id).w;
        }
      }
    }
    auto [lvalue, lplacement] = sweep_larges(instance, params, boxes, committed, taken, lo, hi);
    value += lvalue;
    for (const auto& [id, h] : lplacement.heights) placement.place(id, h);
    if (value > best) {
      best = value;
      best_placement = placement;
    }
  };

  std::function<void(int)> enumerate = [&](int k) {
    if (*refused) return;
    consider(k);
    if (k >= params.beta) return;
    const int ps = k == 0 ? lo : stack.back().first;
    const int pt = k == 0 ? hi : stack.back().second;
    for (int s = ps; s < pt; ++s) {
      for (int t = s + 1; t <= pt; ++t) {
        stack.emplace_back(s, t);
        enumerate(k + 1);
        stack.pop_back();
        if (*refused) return;
      }
    }
  };
  enumerate(0);
  return {std::max(0LL, best), best_placement};
}

}  // namespace

bool valid_pile(const SapInstance& instance, const PileSpec& pile, int beta) {
  if (!instance.uniform()) return false;
  if (static_cast<int>(pile.boxes.size()) > beta) return false;
  const long long U = instance.capacity(0);
  const long long d_box = U / beta;
  for (size_t j = 0; j < pile.boxes.size(); ++j) {
    const Box& b = pile.boxes[j];
    if (b.d != d_box) return false;
    if (!b.h || *b.h != static_cast<long long>(j) * d_box) return false;
    if (j > 0) {
      const Box& prev = pile.boxes[j - 1];
      if (b.s < prev.s || b.t > prev.t) return false;  // nested paths
    }
  }
  return true;
}

SolveResult solve_single_pile(const SapInstance& instance, const PileParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_single_pile needs uniform capacities");
  if (instance.num_edges() > params.max_edges)
    throw std::invalid_argument("solve_single_pile: instance exceeds the edge cap");
  SolveResult result;
  bool refused = false;
  auto [value, placement] = pile_segment(instance, params, 0, instance.num_edges(), {}, &refused);
  result.placement = placement;
  result.profit = value;
  result.refused = refused;
  if (refused) result.note = "state budget exceeded; best-so-far returned";
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("solve_single_pile infeasible: " + bad->describe());
  }
  return result;
}

SolveResult solve_pile(const SapInstance& instance, const PileParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_pile needs uniform capacities");
  if (instance.num_edges() > params.max_edges)
    throw std::invalid_argument("solve_pile: instance exceeds the edge cap");
  const int m = instance.num_edges();
  const long long U = instance.capacity(0);
  bool refused = false;

  std::vector<const Task*> larges;
  for (const Task& t : instance.tasks()) {
    if (is_large(instance, t, params.delta)) larges.push_back(&t);
  }
  std::sort(larges.begin(), larges.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
  AnchorSet anchors = anchor_heights(instance, params.delta, Rat(1, 2), 0);
  std::vector<long long> grid;
  for (long long h1 : anchors.H) {
    if (U - h1 >= 0) grid.push_back(U - h1);
  }

  struct Key {
    int a;
    std::vector<std::pair<std::string, long long>> boundary;
    bool operator<(const Key& o) const {
      if (a != o.a) return a < o.a;
      return boundary < o.boundary;
    }
  };
  std::map<Key, std::pair<long long, Placement>> memo;

  std::function<std::pair<long long, Placement>(int, std::vector<std::pair<const Task*, long long>>)> rec =
      [&](int a, std::vector<std::pair<const Task*, long long>> boundary) -> std::pair<long long, Placement> {
    if (a >= m) return {0, {}};
    Key key{a, {}};
    for (const auto& [t, h] : boundary) {
      if (t->t > a) key.boundary.emplace_back(t->id, h);
    }
    std::sort(key.boundary.begin(), key.boundary.end());
    auto found = memo.find(key);
    if (found != memo.end()) return found->second;

    std::pair<long long, Placement> best{-1, {}};
    for (int b = a + 1; b <= m; ++b) {
      std::vector<const Task*> cands;
      if (b < m) {
        for (const Task* t : larges) {
          if (!t->uses_edge(b)) continue;
          // A task reaching left of `a` is decided by the caller's boundary
          // guess; only those tasks may carry over.
          bool in_boundary = false;
          for (const auto& [bt, bh] : boundary) {
            if (bt->id == t->id) in_boundary = true;
          }
          if (t->s < a && !in_boundary) continue;
          cands.push_back(t);
        }
      }
      std::function<void(size_t, std::vector<std::pair<const Task*, long long>>)> guess =
          [&](size_t k, std::vector<std::pair<const Task*, long long>> next_boundary) {
            if (k == cands.size()) {
              std::vector<std::pair<const Task*, long long>> committed = boundary;
              long long gain = 0;
              bool consistent = true;
              for (const auto& [t, h] : next_boundary) {
                bool already = false;
                for (const auto& [bt, bh] : boundary) {
                  if (bt->id == t->id) {
                    already = true;
                    if (bh != h) consistent = false;
                  }
                }
                if (!already) {
                  committed.emplace_back(t, h);
                  gain += t->w;
                }
              }
              if (!consistent) return;
              auto [segv, segp] = pile_segment(instance, params, a, b, committed, &refused);
              auto [sufv, sufp] = rec(b, next_boundary);
              const long long total = segv + gain + sufv;
              if (total > best.first) {
                best.first = total;
                best.second = segp;
                for (const auto& [t, h] : next_boundary) best.second.place(t->id, h);
                for (const auto& [id, h] : sufp.heights) best.second.place(id, h);
              }
              return;
            }
            const Task& t = *cands[k];
            for (const auto& [bt, bh] : boundary) {
              if (bt->id == t.id) {
                // Committed tasks crossing b carry over; no skip branch.
                next_boundary.emplace_back(bt, bh);
                guess(k + 1, next_boundary);
                next_boundary.pop_back();
                return;
              }
            }
            guess(k + 1, next_boundary);
            for (long long h : grid) {
              if (h < 0 || h + t.d > U) continue;
              bool ok = true;
              for (const auto& [ot, oh] : next_boundary) {
                if (task_clash(t, h, *ot, oh)) ok = false;
              }
              for (const auto& [ot, oh] : boundary) {
                if (ot->id != t.id && task_clash(t, h, *ot, oh)) ok = false;
              }
              if (!ok) continue;
              next_boundary.emplace_back(&t, h);
              guess(k + 1, next_boundary);
              next_boundary.pop_back();
            }
          };
      guess(0, {});
    }
    memo[key] = best;
    return best;
  };

  auto [value, placement] = rec(0, {});
  SolveResult result;
  result.placement = placement;
  result.profit = std::max(0LL, value);
  result.refused = refused;
  if (refused) result.note = "state budget exceeded; best-so-far returned";
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("solve_pile infeasible: " + bad->describe());
  }
  return result;
}

}  // namespace sap
