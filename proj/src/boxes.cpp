#include "sap/boxes.hpp"

#include <algorithm>
#include <set>

#include "sap/lp.hpp"

namespace sap {

namespace {

long long floor_rat(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

std::vector<const Task*> resolve(const SapInstance& instance, const std::vector<std::string>& ids) {
  std::vector<const Task*> tasks;
  tasks.reserve(ids.size());
  for (const auto& id : ids) tasks.push_back(&instance.task(id));
  return tasks;
}

}  // namespace

std::string Box::describe() const {
  return "box(" + std::to_string(s) + "," + std::to_string(t) + ",d=" + std::to_string(d) +
         (h ? ",h=" + std::to_string(*h) : "") + ")";
}

long long BoxAssignment::total_profit(const SapInstance& instance) const {
  long long sum = 0;
  for (const auto& fill : per_box) {
    for (const auto& [id, h] : fill) sum += instance.task(id).w;
  }
  return sum;
}

BoxFill shelf_pack(const SapInstance& instance, const Box& box, const std::vector<std::string>& task_ids,
                   const Rat& epsilon) {
  BoxFill fill;
  if (task_ids.empty()) return fill;
  auto tasks = resolve(instance, task_ids);
  for (const Task* t : tasks) {
    if (!box.contains_path(*t)) throw PackingError("task " + t->id + " path outside " + box.describe());
  }
  const long long shelf_height = floor_rat(rat_pow(epsilon, 4) * Rat(static_cast<long>(box.d)));
  if (shelf_height < 1) throw PackingError("shelf height 0 for " + box.describe());
  const int num_shelves = static_cast<int>(box.d / shelf_height);
  const int width = box.t - box.s;

  std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) {
    if (a->s != b->s) return a->s < b->s;
    return a->id < b->id;
  });
  // skyline[k][e-box.s]: occupied height of shelf k above its base.
  std::vector<std::vector<long long>> skyline(num_shelves, std::vector<long long>(width, 0));
  for (const Task* t : tasks) {
    bool placed = false;
    for (int k = 0; k < num_shelves && !placed; ++k) {
      long long base = 0;
      for (int e = t->s; e < t->t; ++e) base = std::max(base, skyline[k][e - box.s]);
      if (base + t->d <= shelf_height) {
        for (int e = t->s; e < t->t; ++e) skyline[k][e - box.s] = base + t->d;
        fill[t->id] = static_cast<long long>(k) * shelf_height + base;
        placed = true;
      }
    }
    if (!placed) throw PackingError("task " + t->id + " fits no shelf of " + box.describe());
  }
  return fill;
}

std::optional<BoxFill> fits_into_box(const SapInstance& instance, const Box& box,
                                     const std::vector<std::string>& task_ids, const Rat& epsilon) {
  if (task_ids.empty()) return BoxFill{};
  auto tasks = resolve(instance, task_ids);
  for (const Task* t : tasks) {
    if (!box.contains_path(*t)) return std::nullopt;
  }
  if (task_ids.size() == 1) {
    if (tasks[0]->d > box.d) return std::nullopt;
    return BoxFill{{tasks[0]->id, 0}};
  }
  const Rat small_cap = rat_pow(epsilon, 8) * Rat(static_cast<long>(box.d));
  for (const Task* t : tasks) {
    if (Rat(static_cast<long>(t->d)) > small_cap) return std::nullopt;
  }
  try {
    return shelf_pack(instance, box, task_ids, epsilon);
  } catch (const PackingError&) {
    return std::nullopt;
  }
}

namespace {

// Filtered candidate pairs + fractional BOX-LP.
struct BoxLp {
  LpModel lp;
  std::vector<std::vector<int>> var_of;  // [task][box] -> variable index or -1
  std::vector<const Task*> tasks;
};

BoxLp build_box_lp(const SapInstance& instance, const std::vector<Box>& boxes,
                   const std::vector<std::string>& candidates, const Rat& small_factor) {
  BoxLp out;
  out.lp.direction = Direction::Maximize;
  out.tasks = resolve(instance, candidates);
  out.var_of.assign(out.tasks.size(), std::vector<int>(boxes.size(), -1));
  for (size_t i = 0; i < out.tasks.size(); ++i) {
    const Task* t = out.tasks[i];
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (!boxes[b].contains_path(*t)) continue;
      if (Rat(static_cast<long>(t->d)) > small_factor * Rat(static_cast<long>(boxes[b].d))) continue;
      out.var_of[i][b] = out.lp.add_variable("x_" + std::to_string(i) + "_" + std::to_string(b),
                                             static_cast<double>(t->w));
    }
  }
  // Per box and edge: sum of assigned demand <= d_B.
  for (size_t b = 0; b < boxes.size(); ++b) {
    for (int e = boxes[b].s; e < boxes[b].t; ++e) {
      std::vector<std::pair<int, double>> coeffs;
      for (size_t i = 0; i < out.tasks.size(); ++i) {
        if (out.var_of[i][b] >= 0 && out.tasks[i]->uses_edge(e))
          coeffs.emplace_back(out.var_of[i][b], static_cast<double>(out.tasks[i]->d));
      }
      if (!coeffs.empty())
        out.lp.add_constraint("cap_" + std::to_string(b) + "_" + std::to_string(e), Sense::LE,
                              static_cast<double>(boxes[b].d), std::move(coeffs));
    }
  }
  for (size_t i = 0; i < out.tasks.size(); ++i) {
    std::vector<std::pair<int, double>> coeffs;
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (out.var_of[i][b] >= 0) coeffs.emplace_back(out.var_of[i][b], 1.0);
    }
    if (!coeffs.empty()) out.lp.add_constraint("one_" + std::to_string(i), Sense::LE, 1.0, std::move(coeffs));
  }
  return out;
}

}  // namespace

double box_lp_value(const SapInstance& instance, const std::vector<Box>& boxes,
                    const std::vector<std::string>& candidates, const Rat& epsilon) {
  BoxLp built = build_box_lp(instance, boxes, candidates, rat_pow(epsilon, 8));
  if (built.lp.vars.empty()) return 0.0;
  LpSolution<double> sol = lp_solve(built.lp);
  return sol.status == LpStatus::Optimal ? sol.objective : 0.0;
}

BoxAssignment assign_tasks_to_boxes(const SapInstance& instance, const std::vector<Box>& boxes,
                                    const std::vector<std::string>& candidates, const Rat& epsilon, uint64_t seed) {
  BoxAssignment result;
  result.per_box.assign(boxes.size(), {});
  BoxLp built = build_box_lp(instance, boxes, candidates, rat_pow(epsilon, 8));
  if (built.lp.vars.empty()) return result;
  LpSolution<double> sol = lp_solve(built.lp);
  if (sol.status != LpStatus::Optimal) return result;  // cannot happen: x = 0 is feasible

  const double eps = to_double(epsilon);
  const double scale = 1.0 - 2.0 * eps;
  Rng rng(seed);

  // Dependent rounding: each task independently lands in at most one box with
  // marginal scale * x*.
  std::vector<int> chosen_box(built.tasks.size(), -1);
  for (size_t i = 0; i < built.tasks.size(); ++i) {
    const double p = rng.next_unit();
    double acc = 0.0;
    for (size_t b = 0; b < boxes.size(); ++b) {
      const int v = built.var_of[i][b];
      if (v < 0) continue;
      const double mass = scale * std::max(0.0, sol.primal[v]);
      if (p < acc + mass) {
        chosen_box[i] = static_cast<int>(b);
        break;
      }
      acc += mass;
    }
  }

  // Alteration, per box in start-vertex order: keep a task only while the
  // total demand of kept tasks overlapping it stays within (1-eps)*d_B.
  for (size_t b = 0; b < boxes.size(); ++b) {
    std::vector<size_t> members;
    for (size_t i = 0; i < built.tasks.size(); ++i) {
      if (chosen_box[i] == static_cast<int>(b)) members.push_back(i);
    }
    std::sort(members.begin(), members.end(), [&](size_t x, size_t y) {
      if (built.tasks[x]->s != built.tasks[y]->s) return built.tasks[x]->s < built.tasks[y]->s;
      return built.tasks[x]->id < built.tasks[y]->id;
    });
    const Rat load_cap = (1 - epsilon) * Rat(static_cast<long>(boxes[b].d));
    std::vector<size_t> kept;
    for (size_t i : members) {
      long long overlap_demand = built.tasks[i]->d;
      for (size_t j : kept) {
        if (built.tasks[i]->overlaps_path(*built.tasks[j])) overlap_demand += built.tasks[j]->d;
      }
      if (Rat(static_cast<long>(overlap_demand)) <= load_cap) kept.push_back(i);
    }
    std::vector<std::string> ids;
    for (size_t i : kept) ids.push_back(built.tasks[i]->id);
    // The alteration bound makes shelf packing succeed on everything we have
    // seen; if an adversarial chain defeats it, shed the lightest tasks
    // rather than fail the whole box.
    while (true) {
      try {
        result.per_box[b] = shelf_pack(instance, boxes[b], ids, epsilon);
        break;
      } catch (const PackingError&) {
        if (ids.empty()) break;
        size_t drop = 0;
        for (size_t k = 1; k < ids.size(); ++k) {
          if (instance.task(ids[k]).w < instance.task(ids[drop]).w) drop = k;
        }
        ids.erase(ids.begin() + static_cast<long>(drop));
      }
    }
  }
  return result;
}

BoxFill fill_single_box(const SapInstance& instance, const Box& box, const std::vector<std::string>& candidates,
                        const Rat& epsilon, uint64_t seed) {
  // eps^7 candidate filter per the single-box contract.
  std::vector<std::string> filtered;
  const Rat cap = rat_pow(epsilon, 7) * Rat(static_cast<long>(box.d));
  for (const auto& id : candidates) {
    const Task& t = instance.task(id);
    if (box.contains_path(t) && Rat(static_cast<long>(t.d)) <= cap) filtered.push_back(id);
  }
  if (filtered.empty()) return {};
  const std::vector<Box> one{box};
  Rng base(seed);
  BoxFill best;
  long long best_profit = -1;
  for (int round = 0; round < 32; ++round) {
    const uint64_t round_seed = base.derive(static_cast<uint64_t>(round)).next_u64();
    BoxAssignment a = assign_tasks_to_boxes(instance, one, filtered, epsilon, round_seed);
    long long p = a.total_profit(instance);
    if (p > best_profit) {
      best_profit = p;
      best = a.per_box[0];
    }
  }
  return best;
}

HierarchicalDecomposition decompose_box_levels(const std::vector<Box>& boxes,
                                               const std::vector<long long>& box_weights, const Rat& epsilon,
                                               int beta) {
  const int n = static_cast<int>(boxes.size());
  if (box_weights.size() != boxes.size()) throw std::invalid_argument("weights size mismatch");
  HierarchicalDecomposition out;
  out.level.assign(n, 0);

  // Greedy sweep per level: start with the leftmost-start box (tie: rightmost
  // end), then repeatedly jump to the leftmost used edge right of the current
  // end and take the box with the rightmost end there.
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<int>> level_order;  // boxes per level, in sweep order
  int remaining = n;
  while (remaining > 0) {
    std::vector<int> this_level;
    int cur_end = -1;
    while (true) {
      int pick = -1;
      if (cur_end < 0) {
        for (int i = 0; i < n; ++i) {
          if (assigned[i]) continue;
          if (pick < 0 || boxes[i].s < boxes[pick].s || (boxes[i].s == boxes[pick].s && boxes[i].t > boxes[pick].t))
            pick = i;
        }
      } else {
        int best_edge = -1;
        for (int i = 0; i < n; ++i) {
          if (assigned[i]) continue;
          const int first_edge = std::max(boxes[i].s, cur_end);
          if (boxes[i].t <= cur_end) continue;
          if (best_edge < 0 || first_edge < best_edge) best_edge = first_edge;
        }
        if (best_edge < 0) break;
        for (int i = 0; i < n; ++i) {
          if (assigned[i] || boxes[i].t <= cur_end) continue;
          if (std::max(boxes[i].s, cur_end) != best_edge) continue;
          if (pick < 0 || boxes[i].t > boxes[pick].t) pick = i;
        }
      }
      if (pick < 0) break;
      assigned[pick] = true;
      --remaining;
      this_level.push_back(pick);
      cur_end = boxes[pick].t;
    }
    if (this_level.empty()) break;
    level_order.push_back(std::move(this_level));
  }
  const int num_levels = static_cast<int>(level_order.size());
  for (int l = 0; l < num_levels; ++l) {
    for (int i : level_order[l]) out.level[i] = l + 1;
  }

  // Offset removal: for offset gamma, within each level the boxes at sweep
  // positions q = gamma, gamma + step, ... mark cut edges; every box of the
  // same or deeper level crossing a cut edge is removed.
  const Rat step_r = Rat(beta) / epsilon;
  const long long step = std::max<long long>(1, floor_rat(step_r));
  long long best_removed = -1;
  for (long long gamma = 1; gamma <= step; ++gamma) {
    std::vector<std::set<int>> cut_edges(num_levels);
    for (int l = 0; l < num_levels; ++l) {
      for (size_t pos = 0; pos < level_order[l].size(); ++pos) {
        const long long q = static_cast<long long>(pos) + 1;
        if (q % step == gamma % step) {
          const Box& b = boxes[level_order[l][pos]];
          cut_edges[l].insert(b.t);  // edge index b.t = edge right of the box's last edge
        }
      }
    }
    long long removed_weight = 0;
    std::vector<int> removed;
    for (int i = 0; i < n; ++i) {
      const int li = out.level[i];
      bool hit = false;
      for (int l = 0; l < li && !hit; ++l) {
        for (int e : cut_edges[l]) {
          if (boxes[i].uses_edge(e)) {
            hit = true;
            break;
          }
        }
      }
      if (hit) {
        removed.push_back(i);
        removed_weight += box_weights[i];
      }
    }
    if (best_removed < 0 || removed_weight < best_removed) {
      best_removed = removed_weight;
      out.removed = removed;
      out.offset = static_cast<int>(gamma);
      out.removed_weight = removed_weight;
    }
  }

  // Level partitions over the surviving boxes.
  std::vector<bool> removed_flag(n, false);
  for (int i : out.removed) removed_flag[i] = true;
  int max_edge = 0;
  for (const Box& b : boxes) max_edge = std::max(max_edge, b.t);
  out.partitions.assign(num_levels, {});
  for (int l = 0; l < num_levels; ++l) {
    std::vector<bool> covered(max_edge, false);
    for (int i = 0; i < n; ++i) {
      if (out.level[i] == l + 1 && !removed_flag[i]) {
        for (int e = boxes[i].s; e < boxes[i].t; ++e) covered[e] = true;
      }
    }
    int start = -1;
    for (int e = 0; e <= max_edge; ++e) {
      const bool c = e < max_edge && covered[e];
      if (c && start < 0) start = e;
      if (!c && start >= 0) {
        out.partitions[l].emplace_back(start, e);
        start = -1;
      }
    }
  }
  return out;
}

std::vector<long long> default_height_grid(const SapInstance& instance, const Rat& epsilon) {
  const long long U = instance.max_capacity();
  std::vector<long long> grid;
  if (U <= 64) {
    for (long long v = 0; v <= U; ++v) grid.push_back(v);
    return grid;
  }
  grid.push_back(0);
  Rat p(1);
  while (floor_rat(p) <= U) {
    const long long v = floor_rat(p);
    if (grid.empty() || grid.back() != v) grid.push_back(v);
    p *= (1 + epsilon);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

struct CandidateBox {
  Box box;                 // with height set
  int single_task = -1;    // index into instance tasks, or -1 for multi-task
  long long key_s, key_t, key_d, key_h;

  bool operator<(const CandidateBox& o) const {
    // Global box order (s, t, d, h).
    if (key_s != o.key_s) return key_s < o.key_s;
    if (key_t != o.key_t) return key_t < o.key_t;
    if (key_d != o.key_d) return key_d < o.key_d;
    return key_h < o.key_h;
  }
};

struct BoxSearch {
  const SapInstance& instance;
  const ConstantBoxableParams& params;
  std::vector<CandidateBox> candidates;
  long long states = 0;
  bool refused = false;
  std::vector<int> chosen;
  long long best_profit = -1;
  std::vector<int> best_chosen;

  explicit BoxSearch(const SapInstance& inst, const ConstantBoxableParams& p) : instance(inst), params(p) {}

  bool compatible(const CandidateBox& a, const CandidateBox& b) const {
    if (a.box.t <= b.box.s || b.box.t <= a.box.s) return true;
    const long long ha = *a.box.h, hb = *b.box.h;
    return ha + a.box.d <= hb || hb + b.box.d <= ha;
  }

  bool admissible(const CandidateBox& cand) const {
    for (int e = cand.box.s; e < cand.box.t; ++e) {
      if (*cand.box.h + cand.box.d > instance.capacity(e)) return false;
      int count = 1;
      for (int idx : chosen) {
        if (candidates[idx].box.uses_edge(e)) ++count;
      }
      if (count > params.beta) return false;
    }
    for (int idx : chosen) {
      if (cand.single_task >= 0 && candidates[idx].single_task == cand.single_task) return false;
      if (!compatible(candidates[idx], cand)) return false;
    }
    return true;
  }

  std::map<std::string, BoxFill> fill_cache;

  // Deterministic fill of the chosen boxes in global order; single-task boxes
  // carry their task, multi-task boxes go through fill_single_box.
  std::pair<long long, Placement> evaluate() {
    Placement placement;
    std::set<std::string> used;
    long long total = 0;
    for (int idx : chosen) {  // `chosen` is increasing in the global order
      const CandidateBox& cb = candidates[idx];
      if (cb.single_task >= 0) {
        const Task& t = instance.task(cb.single_task);
        placement.place(t.id, *cb.box.h);
        used.insert(t.id);
        total += t.w;
      }
    }
    for (int idx : chosen) {
      const CandidateBox& cb = candidates[idx];
      if (cb.single_task >= 0) continue;
      std::vector<std::string> cands;
      for (const Task& t : instance.tasks()) {
        if (!used.count(t.id) && cb.box.contains_path(t)) cands.push_back(t.id);
      }
      std::string key = cb.box.describe();
      for (const auto& id : cands) key += "|" + id;
      auto it = fill_cache.find(key);
      if (it == fill_cache.end()) {
        const uint64_t seed = Rng(params.seed).derive(cb.box.describe()).next_u64();
        it = fill_cache.emplace(key, fill_single_box(instance, cb.box, cands, params.epsilon, seed)).first;
      }
      for (const auto& [id, rel_h] : it->second) {
        placement.place(id, *cb.box.h + rel_h);
        used.insert(id);
        total += instance.task(id).w;
      }
    }
    return {total, placement};
  }

  void dfs(size_t from, Placement& best_placement) {
    if (++states > params.state_budget) {
      refused = true;
      return;
    }
    auto [value, placement] = evaluate();
    if (value > best_profit) {
      best_profit = value;
      best_placement = placement;
    }
    if (refused) return;
    const size_t max_boxes =
        params.max_boxes_per_cell > 0
            ? static_cast<size_t>(params.max_boxes_per_cell)
            : static_cast<size_t>(floor_rat(Rat(params.beta) * Rat(params.beta) / params.epsilon));
    if (chosen.size() >= max_boxes) return;
    for (size_t i = from; i < candidates.size() && !refused; ++i) {
      if (!admissible(candidates[i])) continue;
      chosen.push_back(static_cast<int>(i));
      dfs(i + 1, best_placement);
      chosen.pop_back();
    }
  }
};

}  // namespace

SolveResult solve_constant_boxable(const SapInstance& instance, const ConstantBoxableParams& params) {
  BoxSearch search(instance, params);
  const Rat eps8 = rat_pow(params.epsilon, 8);
  const std::vector<long long>& heights =
      params.height_candidates.empty() ? default_height_grid(instance, params.epsilon) : params.height_candidates;
  std::vector<long long> sizes = params.size_candidates;
  if (sizes.empty()) sizes = heights;

  // Single-task candidates: the task's own rectangle at every admissible height.
  for (int i = 0; i < instance.num_tasks(); ++i) {
    const Task& t = instance.task(i);
    const long long b = bottleneck(instance, t);
    for (long long h : heights) {
      if (h < 0 || h + t.d > b) continue;
      CandidateBox cb;
      cb.box = Box{t.s, t.t, t.d, h};
      cb.single_task = i;
      cb.key_s = t.s;
      cb.key_t = t.t;
      cb.key_d = t.d;
      cb.key_h = h;
      search.candidates.push_back(cb);
    }
  }
  // Multi-task candidates: grid boxes holding at least two small-enough tasks.
  const int m = instance.num_edges();
  for (int s = 0; s < m; ++s) {
    for (int t = s + 1; t <= m; ++t) {
      long long min_cap = instance.capacity(s);
      for (int e = s; e < t; ++e) min_cap = std::min(min_cap, instance.capacity(e));
      for (long long d : sizes) {
        if (d < 1 || d > min_cap) continue;
        int fitting = 0;
        for (const Task& task : instance.tasks()) {
          if (task.s >= s && task.t <= t && Rat(static_cast<long>(task.d)) <= eps8 * Rat(static_cast<long>(d)))
            ++fitting;
        }
        if (fitting < 2) continue;
        for (long long h : heights) {
          if (h < 0 || h + d > min_cap) continue;
          CandidateBox cb;
          cb.box = Box{s, t, d, h};
          cb.key_s = s;
          cb.key_t = t;
          cb.key_d = d;
          cb.key_h = h;
          search.candidates.push_back(cb);
        }
      }
    }
  }
  std::sort(search.candidates.begin(), search.candidates.end());

  SolveResult result;
  search.dfs(0, result.placement);
  result.profit = search.best_profit < 0 ? 0 : search.best_profit;
  result.refused = search.refused;
  if (search.refused) result.note = "state budget exceeded; best-so-far returned";
  if (check_feasible(instance, result.placement)) {
    // Never ship an infeasible placement; this is an internal invariant.
    throw std::logic_error("solve_constant_boxable produced an infeasible placement");
  }
  return result;
}

}  // namespace sap
