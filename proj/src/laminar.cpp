#include "sap/laminar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "sap/jammed.hpp"

namespace sap {

namespace {

long long floor_rat(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

long long inv_int(const Rat& r) {
  const Rat inv = 1 / r;
  if (inv.get_den() != 1) throw std::invalid_argument("1/eps must be an integer");
  return inv.get_num().get_si();
}

bool is_large(const SapInstance& instance, const Task& t, const Rat& delta) {
  return Rat(static_cast<long>(t.d)) > delta * Rat(static_cast<long>(bottleneck(instance, t)));
}

bool task_clash(const Task& a, long long ha, const Task& b, long long hb) {
  return a.overlaps_path(b) && ha < hb + b.d && hb < ha + a.d;
}

}  // namespace

OffsetChoice level_offset_filter(const std::vector<long long>& level_weights, const Rat& epsilon) {
  const long long inv_eps = inv_int(epsilon);
  const long long q = inv_eps * inv_eps;
  OffsetChoice best;
  best.retained = -1;
  for (long long alpha = 0; alpha < q; ++alpha) {
    long long retained = 0;
    std::vector<int> levels;
    for (size_t l = 0; l < level_weights.size(); ++l) {
      const long long r = ((static_cast<long long>(l) - alpha) % q + q) % q;
      if (r >= inv_eps) {
        retained += level_weights[l];
        levels.push_back(static_cast<int>(l));
      }
    }
    if (retained > best.retained) {
      best.retained = retained;
      best.alpha = static_cast<int>(alpha);
      best.retained_levels = std::move(levels);
    }
  }
  return best;
}

bool valid_laminar_family(const LaminarBoxSet& family, const Rat& epsilon) {
  for (size_t i = 0; i < family.boxes.size(); ++i) {
    const Box& b = family.boxes[i];
    if (b.d != floor_rat(rat_pow(1 + epsilon, static_cast<unsigned long>(family.level[i])))) return false;
    if (family.level[i] > 0) {
      // Some box of the previous level must contain it and stack exactly.
      bool found = false;
      for (size_t j = 0; j < family.boxes.size(); ++j) {
        if (family.level[j] + 1 != family.level[i]) continue;
        const Box& p = family.boxes[j];
        if (p.s <= b.s && b.t <= p.t && *b.h == *p.h + p.d) found = true;
      }
      if (!found) return false;
    }
  }
  // Laminar paths.
  for (size_t i = 0; i < family.boxes.size(); ++i) {
    for (size_t j = i + 1; j < family.boxes.size(); ++j) {
      const Box& a = family.boxes[i];
      const Box& b = family.boxes[j];
      const bool disjoint = a.t <= b.s || b.t <= a.s;
      const bool nested = (a.s <= b.s && b.t <= a.t) || (b.s <= a.s && a.t <= b.t);
      if (!disjoint && !nested) return false;
    }
  }
  return true;
}

namespace {

struct LaminarSearch {
  const SapInstance& instance;
  const LaminarParams& params;
  int lo, hi;
  std::vector<std::pair<const Task*, long long>> committed;
  long long U;
  long long states = 0;
  bool refused = false;
  Rat eps8;

  long long best = -1;
  Placement best_placement;

  LaminarSearch(const SapInstance& inst, const LaminarParams& p, int lo_, int hi_,
                std::vector<std::pair<const Task*, long long>> committed_)
      : instance(inst), params(p), lo(lo_), hi(hi_), committed(std::move(committed_)),
        U(inst.capacity(0)) {
    eps8 = rat_pow(params.epsilon, 8);
  }

  bool budget() {
    if (++states > params.state_budget) refused = true;
    return !refused;
  }

  // Large-task completion around the family (rectangles `blocks`).
  std::pair<long long, Placement> larges_around(const std::vector<Box>& blocks, const std::set<std::string>& taken) {
    AnchorSet anchors = anchor_heights(instance, params.delta, params.epsilon, 0);
    std::vector<long long> grid = anchors.H0;
    std::vector<const Task*> cands;
    for (const Task& t : instance.tasks()) {
      if (!is_large(instance, t, params.delta)) continue;
      if (t.s < lo || t.t > hi || taken.count(t.id)) continue;
      bool already = false;
      for (const auto& [ct, ch] : committed) {
        if (ct->id == t.id) already = true;
      }
      if (!already) cands.push_back(&t);
    }
    std::sort(cands.begin(), cands.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
    long long best_l = 0;
    Placement best_p;
    std::vector<std::pair<const Task*, long long>> current;
    std::function<void(size_t, long long)> dfs = [&](size_t i, long long sum) {
      if (sum > best_l) {
        best_l = sum;
        best_p = Placement{};
        for (const auto& [t, h] : current) best_p.place(t->id, h);
      }
      if (i == cands.size() || !budget()) return;
      dfs(i + 1, sum);
      const Task& t = *cands[i];
      for (long long h : grid) {
        if (h < 0 || h + t.d > U) continue;
        bool ok = true;
        for (const Box& b : blocks) {
          if (t.t > b.s && b.t > t.s && h < *b.h + b.d && *b.h < h + t.d) ok = false;
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
    return {best_l, best_p};
  }

  std::map<std::string, BoxFill> fill_cache;

  void consider_family(const std::vector<Box>& kept_boxes, const std::vector<int>& kept_levels,
                       const std::vector<long long>& group_of) {
    // Boxes must not intersect committed boundary tasks.
    for (const Box& box : kept_boxes) {
      for (const auto& [ct, ch] : committed) {
        if (ct->t > box.s && box.t > ct->s && ch < *box.h + box.d && *box.h < ch + ct->d) return;
      }
    }
    // Fill kept boxes in level order with group exclusion and per-box global
    // RNG streams; deduplicate keeping the lower group index. Fills repeat
    // across search nodes, so they are cached by box and candidate set.
    std::map<std::string, std::pair<long long, long long>> assigned;  // id -> (group, abs height)
    std::map<long long, std::set<std::string>> used_in_group;
    for (size_t i = 0; i < kept_boxes.size(); ++i) {
      const Box& box = kept_boxes[i];
      const long long group = group_of[i];
      std::vector<std::string> cands;
      for (const Task& t : instance.tasks()) {
        if (is_large(instance, t, params.delta)) continue;
        if (t.s < box.s || t.t > box.t) continue;
        if (Rat(static_cast<long>(t.d)) > eps8 * Rat(static_cast<long>(box.d))) continue;
        if (used_in_group[group].count(t.id)) continue;
        bool committed_clash = false;
        for (const auto& [ct, ch] : committed) {
          if (ct->id == t.id) committed_clash = true;
        }
        if (!committed_clash) cands.push_back(t.id);
      }
      std::string key = box.describe();
      for (const auto& id : cands) key += "|" + id;
      auto cached = fill_cache.find(key);
      if (cached == fill_cache.end()) {
        const uint64_t stream = Rng(params.seed).derive(box.describe()).next_u64();
        cached = fill_cache.emplace(key, fill_single_box(instance, box, cands, params.epsilon, stream)).first;
      }
      const BoxFill& fill = cached->second;
      for (const auto& [id, rel] : fill) {
        used_in_group[group].insert(id);
        auto it = assigned.find(id);
        if (it == assigned.end() || group < it->second.first) {
          assigned[id] = {group, *box.h + rel};
        }
      }
    }
    Placement placement;
    std::set<std::string> taken;
    long long value = 0;
    for (const auto& [id, gh] : assigned) {
      placement.place(id, gh.second);
      taken.insert(id);
      value += instance.task(id).w;
    }
    auto [lvalue, lplacement] = larges_around(kept_boxes, taken);
    value += lvalue;
    for (const auto& [id, h] : lplacement.heights) placement.place(id, h);
    if (value > best) {
      best = value;
      best_placement = placement;
    }
    (void)kept_levels;
  }

  void run() {
    // Option: no family at all.
    consider_family({}, {}, {});

    const long long inv_eps = inv_int(params.epsilon);
    const long long q = inv_eps * inv_eps;

    // Candidate subpath endpoints come from the small tasks only: boxes of a
    // laminar family never host large tasks.
    std::set<int> points{lo, hi};
    for (const Task& t : instance.tasks()) {
      if (t.s >= lo && t.t <= hi && !is_large(instance, t, params.delta)) {
        points.insert(t.s);
        points.insert(t.t);
      }
    }
    std::vector<int> pts(points.begin(), points.end());

    // Level sizes from the geometric grid, while the stack fits under U.
    std::vector<long long> sizes;
    std::vector<long long> prefix{0};
    for (unsigned long l = 0;; ++l) {
      const long long d = floor_rat(rat_pow(1 + params.epsilon, l));
      if (prefix.back() + d > U) break;
      sizes.push_back(d);
      prefix.push_back(prefix.back() + d);
      if (sizes.size() > 48) break;
    }

    AnchorSet anchors = anchor_heights(instance, params.delta, params.epsilon, 0);
    for (long long alpha = 0; alpha < q && !refused; ++alpha) {
      auto kept = [&](long long l) { return ((l - alpha) % q + q) % q >= inv_eps; };
      auto group = [&](long long l) {
        const long long shifted = l - alpha;
        return shifted >= 0 ? shifted / q : (shifted - q + 1) / q;
      };
      for (long long hhat : anchors.H) {
        if (refused) break;
        // Kept levels whose stacked interval fits below U (given root at
        // hhat) and whose boxes can host at least one candidate small task;
        // levels that can host nothing act as pure spacers and need no
        // enumeration.
        std::vector<long long> kept_levels;
        for (size_t l = 1; l < sizes.size(); ++l) {
          if (!kept(static_cast<long long>(l)) || hhat + prefix[l] + sizes[l] > U) continue;
          bool hostable = false;
          for (const Task& t : instance.tasks()) {
            if (t.s >= lo && t.t <= hi && !is_large(instance, t, params.delta) &&
                Rat(static_cast<long>(t.d)) <= eps8 * Rat(static_cast<long>(sizes[l]))) {
              hostable = true;
              break;
            }
          }
          if (hostable) kept_levels.push_back(static_cast<long long>(l));
        }
        // Recursive choice of boxes per kept level, nested in the previous
        // kept level's boxes (the root spans [lo, hi)).
        std::vector<Box> chosen;
        std::vector<int> chosen_levels;
        std::vector<long long> chosen_groups;
        std::function<void(size_t, std::vector<std::pair<int, int>>)> per_level =
            [&](size_t kidx, std::vector<std::pair<int, int>> parents) {
              if (!budget()) return;
              consider_family(chosen, chosen_levels, chosen_groups);
              if (kidx == kept_levels.size()) return;
              const long long l = kept_levels[kidx];
              // Enumerate up to max_children disjoint candidate paths nested
              // inside each parent (jointly flattened across parents).
              std::vector<std::pair<int, int>> cand_paths;
              for (size_t pi = 0; pi < pts.size(); ++pi) {
                for (size_t pj = pi + 1; pj < pts.size(); ++pj) {
                  const int s = pts[pi], t = pts[pj];
                  bool inside = false;
                  for (const auto& [ps, pt2] : parents) {
                    if (ps <= s && t <= pt2) inside = true;
                  }
                  if (inside) cand_paths.emplace_back(s, t);
                }
              }
              std::vector<std::pair<int, int>> picked;
              std::function<void(size_t)> choose = [&](size_t from) {
                if (!picked.empty()) {
                  // Recurse to deeper kept levels with these boxes as parents.
                  const size_t base = chosen.size();
                  for (const auto& [s, t] : picked) {
                    chosen.push_back(Box{s, t, sizes[l], hhat + prefix[l]});
                    chosen_levels.push_back(static_cast<int>(l));
                    chosen_groups.push_back(group(l));
                  }
                  per_level(kidx + 1, picked);
                  chosen.resize(base);
                  chosen_levels.resize(base);
                  chosen_groups.resize(base);
                }
                if (static_cast<int>(picked.size()) >= params.max_children) return;
                for (size_t c = from; c < cand_paths.size(); ++c) {
                  bool disjoint = true;
                  for (const auto& [s, t] : picked) {
                    if (cand_paths[c].first < t && s < cand_paths[c].second) disjoint = false;
                  }
                  if (!disjoint) continue;
                  picked.push_back(cand_paths[c]);
                  choose(c + 1);
                  picked.pop_back();
                }
              };
              // Also allow skipping this kept level entirely.
              per_level(kidx + 1, parents);
              choose(0);
            };
        per_level(0, {{lo, hi}});
      }
    }
  }
};

std::pair<long long, Placement> laminar_segment(const SapInstance& instance, const LaminarParams& params, int lo,
                                                int hi, std::vector<std::pair<const Task*, long long>> committed,
                                                bool* refused) {
  LaminarSearch search(instance, params, lo, hi, std::move(committed));
  search.run();
  if (search.refused) *refused = true;
  return {std::max(0LL, search.best), search.best_placement};
}

}  // namespace

SolveResult solve_laminar(const SapInstance& instance, const LaminarParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_laminar needs uniform capacities");
  const long long inv_eps = inv_int(params.epsilon);
  if (inv_eps * inv_eps > 9) throw std::invalid_argument("solve_laminar needs 1/eps^2 <= 9");
  bool refused = false;
  auto [value, placement] = laminar_segment(instance, params, 0, instance.num_edges(), {}, &refused);
  SolveResult result;
  result.placement = placement;
  result.profit = value;
  result.refused = refused;
  if (refused) result.note = "state budget exceeded; best-so-far returned";
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("solve_laminar infeasible: " + bad->describe());
  }
  return result;
}

SolveResult solve_laminar_general(const SapInstance& instance, const LaminarParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_laminar_general needs uniform capacities");
  const long long inv_eps = inv_int(params.epsilon);
  if (inv_eps * inv_eps > 9) throw std::invalid_argument("solve_laminar_general needs 1/eps^2 <= 9");
  const int m = instance.num_edges();
  const long long U = instance.capacity(0);
  bool refused = false;

  std::vector<const Task*> larges;
  for (const Task& t : instance.tasks()) {
    if (is_large(instance, t, params.delta)) larges.push_back(&t);
  }
  std::sort(larges.begin(), larges.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
  AnchorSet anchors = anchor_heights(instance, params.delta, params.epsilon, 0);
  const std::vector<long long> grid = anchors.H0;

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
              auto [segv, segp] = laminar_segment(instance, params, a, b, committed, &refused);
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
    throw std::logic_error("solve_laminar_general infeasible: " + bad->describe());
  }
  return result;
}

}  // namespace sap
