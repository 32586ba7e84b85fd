#include "sap/jammed.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace sap {

namespace {

bool is_large(const SapInstance& instance, const Task& t, const Rat& delta) {
  return Rat(static_cast<long>(t.d)) > delta * Rat(static_cast<long>(bottleneck(instance, t)));
}

std::vector<long long> default_heights(const SapInstance& instance, const JammedParams& params) {
  if (!params.height_set.empty()) return params.height_set;
  const long long U = instance.max_capacity();
  // The default {0..U} grid is pseudo-polynomial; past desk scale callers
  // must supply a height set (e.g. the anchor lines) or get a refusal.
  if (U > 4096)
    throw std::invalid_argument("jammed solver needs desk-scale capacities or an explicit height set");
  std::vector<long long> hs;
  for (long long h = 0; h <= U; ++h) hs.push_back(h);
  return hs;
}

}  // namespace

PseudoProfile pseudo_capacities(const SapInstance& instance, const Placement& large_placement, int lo, int hi,
                                long long B) {
  if (!instance.uniform()) throw std::invalid_argument("pseudo_capacities needs uniform capacities");
  const long long U = instance.capacity(0);
  PseudoProfile profile;
  profile.lo = lo;
  profile.hi = hi;
  profile.B = B;
  profile.u_prime.assign(hi - lo, U - B);
  for (const auto& [id, h] : large_placement.heights) {
    const Task& t = instance.task(id);
    if (h < B && h + t.d > B && t.s < hi && t.t > lo)
      throw std::invalid_argument("task " + id + " crosses the baseline");
    if (h < B) continue;
    for (int e = std::max(lo, t.s); e < std::min(hi, t.t); ++e) {
      profile.u_prime[e - lo] = std::min(profile.u_prime[e - lo], h - B);
    }
  }
  return profile;
}

bool is_jammed(const SapInstance& instance, const Task& task, const PseudoProfile& profile, const Rat& delta_prime,
               long long h) {
  (void)instance;
  if (task.s < profile.lo || task.t > profile.hi) return false;
  if (h < profile.B) return false;
  bool witness = false;
  for (int e = task.s; e < task.t; ++e) {
    const long long gap = profile.at(e);
    if (h + task.d > profile.B + gap) return false;
    if (Rat(static_cast<long>(task.d)) > delta_prime * Rat(static_cast<long>(gap))) witness = true;
  }
  return witness;
}

bool is_b_simple_jammed(const SapInstance& instance, const Placement& placement, long long B,
                        const JammedParams& params) {
  if (check_feasible(instance, placement)) return false;
  Placement larges;
  for (const auto& [id, h] : placement.heights) {
    const Task& t = instance.task(id);
    if (is_large(instance, t, params.delta)) {
      if (h < B && h + t.d > B) return false;  // crosses the baseline
      larges.place(id, h);
    }
  }
  PseudoProfile profile = pseudo_capacities(instance, larges, 0, instance.num_edges(), B);
  for (const auto& [id, h] : placement.heights) {
    const Task& t = instance.task(id);
    if (is_large(instance, t, params.delta)) continue;
    if (!is_jammed(instance, t, profile, params.delta_prime, h)) return false;
  }
  return true;
}

namespace {

// Exact column-sweep DP for the B-simple jammed class on a subrange of
// edges. A state is the full content of the current column (every selected
// task using the edge, with heights) plus a certification bit per active
// small task (whether some already-swept edge witnessed d > delta' * u').
// Sweeping left to right keeps u' exact per column, which is what makes the
// class membership exact rather than O(delta')-relaxed.
struct ColumnSweep {
  const SapInstance& instance;
  const JammedParams& params;
  long long B;
  long long U;
  int lo, hi;  // edge range [lo, hi)
  std::vector<long long> heights;
  // Committed tasks with fixed heights (segment boundaries); they are part
  // of every column they cross and their weight is not counted here.
  std::vector<std::pair<const Task*, long long>> committed;
  long long state_cap;
  bool refused = false;

  ColumnSweep(const SapInstance& inst, const JammedParams& p, long long baseline, int lo_, int hi_,
              std::vector<std::pair<const Task*, long long>> fixed, long long cap)
      : instance(inst), params(p), B(baseline), U(inst.capacity(0)), lo(lo_), hi(hi_),
        committed(std::move(fixed)), state_cap(cap) {
    heights = default_heights(inst, p);
  }

  bool large(const Task& t) const { return is_large(instance, t, params.delta); }

  struct Entry {
    const Task* task;
    long long h;
    bool cert;  // small tasks: certificate seen so far
    bool free;  // selected by this solver (true) or committed (false)
  };

  struct StateKey {
    std::vector<std::tuple<std::string, long long, bool>> items;
    bool operator<(const StateKey& o) const { return items < o.items; }
  };

  static StateKey key_of(const std::vector<Entry>& col) {
    StateKey k;
    for (const auto& e : col) k.items.emplace_back(e.task->id, e.h, e.cert);
    std::sort(k.items.begin(), k.items.end());
    return k;
  }

  struct Value {
    long long profit = -1;
    Placement placement;  // all free tasks selected so far (absolute heights)
  };

  // Non-overlap and class-order constraints within one column.
  bool column_ok(const std::vector<Entry>& col) const {
    for (size_t i = 0; i < col.size(); ++i) {
      const Task& a = *col[i].task;
      const long long ha = col[i].h;
      if (ha < 0 || ha + a.d > U) return false;
      if (large(a)) {
        if (ha < B && ha + a.d > B) return false;
      } else {
        if (ha < B) return false;
      }
      for (size_t j = i + 1; j < col.size(); ++j) {
        const Task& b = *col[j].task;
        const long long hb = col[j].h;
        if (ha < hb + b.d && hb < ha + a.d) return false;
      }
    }
    // Smalls below every large above the baseline.
    for (const auto& s : col) {
      if (large(*s.task)) continue;
      for (const auto& l : col) {
        if (!large(*l.task) || l.h < B) continue;
        if (s.h + s.task->d > l.h) return false;
      }
    }
    return true;
  }

  long long gap_of(const std::vector<Entry>& col) const {
    long long gap = U - B;
    for (const auto& e : col) {
      if (large(*e.task) && e.h >= B) gap = std::min(gap, e.h - B);
    }
    return gap;
  }

  SolveResult run() {
    std::map<StateKey, std::pair<Value, std::vector<Entry>>> layer;  // key -> (value, column)
    {
      std::vector<Entry> empty_col;
      layer[key_of(empty_col)] = {Value{0, {}}, empty_col};
    }

    for (int e = lo; e < hi; ++e) {
      std::map<StateKey, std::pair<Value, std::vector<Entry>>> next;
      long long state_count = 0;
      for (auto& [key, entry] : layer) {
        auto& [value, col] = entry;
        // Tasks continuing into edge e.
        std::vector<Entry> base;
        bool dead = false;
        for (const Entry& en : col) {
          if (en.task->t > e) {
            base.push_back(en);
          } else if (en.free && !large(*en.task) && !en.cert) {
            dead = true;  // small ended without a jammedness witness
          }
        }
        if (dead) continue;
        // Committed tasks whose path covers e join the column.
        for (const auto& [t, h] : committed) {
          if (t->uses_edge(e) && t->s == e) base.push_back(Entry{t, h, false, false});
          // (committed tasks starting before `lo` are seeded below)
        }
        if (e == lo) {
          for (const auto& [t, h] : committed) {
            if (t->uses_edge(e) && t->s < e) base.push_back(Entry{t, h, false, false});
          }
        }
        // Free tasks starting at e (paths inside [lo, hi)).
        std::vector<const Task*> starters;
        for (const Task& t : instance.tasks()) {
          if (t.s != e || t.t > hi) continue;
          bool is_committed = false;
          for (const auto& [ct, ch] : committed) {
            if (ct->id == t.id) is_committed = true;
          }
          if (!is_committed) starters.push_back(&t);
        }
        std::sort(starters.begin(), starters.end(), [](const Task* a, const Task* b) { return a->id < b->id; });

        std::function<void(size_t, std::vector<Entry>&, long long, std::vector<std::pair<const Task*, long long>>&)>
            extend = [&](size_t k, std::vector<Entry>& cur, long long gained,
                         std::vector<std::pair<const Task*, long long>>& added) {
              if (k == starters.size()) {
                if (!column_ok(cur)) return;
                // Update certificates with this column's exact gap.
                std::vector<Entry> done = cur;
                const long long gap = gap_of(done);
                for (auto& en : done) {
                  if (en.free && !large(*en.task) &&
                      Rat(static_cast<long>(en.task->d)) > params.delta_prime * Rat(static_cast<long>(gap)))
                    en.cert = true;
                  // Capacity inside the gap: smalls must fit under u'.
                }
                for (const auto& en : done) {
                  if (!large(*en.task) && en.h + en.task->d > B + gap) return;
                }
                Value nv;
                nv.profit = value.profit + gained;
                nv.placement = value.placement;
                for (const auto& [t, h] : added) nv.placement.place(t->id, h);
                StateKey nk = key_of(done);
                auto it = next.find(nk);
                if (it == next.end()) {
                  if (++state_count > state_cap) {
                    refused = true;
                    return;
                  }
                  next[nk] = {std::move(nv), done};
                } else if (nv.profit > it->second.first.profit) {
                  it->second = {std::move(nv), done};
                }
                return;
              }
              extend(k + 1, cur, gained, added);
              const Task& t = *starters[k];
              const bool t_large = large(t);
              for (long long h : heights) {
                if (h < 0 || h + t.d > U) continue;
                if (t_large && h < B && h + t.d > B) continue;
                if (!t_large && h < B) continue;
                bool clash = false;
                for (const Entry& en : cur) {
                  if (t.overlaps_path(*en.task) && h < en.h + en.task->d && en.h < h + t.d) clash = true;
                }
                if (clash) continue;
                cur.push_back(Entry{&t, h, false, true});
                added.emplace_back(&t, h);
                extend(k + 1, cur, gained + t.w, added);
                added.pop_back();
                cur.pop_back();
              }
            };
        long long gained0 = 0;
        std::vector<std::pair<const Task*, long long>> added0;
        extend(0, base, gained0, added0);
        if (refused) break;
      }
      layer = std::move(next);
      if (refused || layer.empty()) break;
    }

    SolveResult result;
    result.refused = refused;
    long long best = -1;
    const Value* best_value = nullptr;
    for (const auto& [key, entry] : layer) {
      // Smalls still active at the end must be certified.
      bool ok = true;
      for (const auto& en : entry.second) {
        if (en.free && !large(*en.task) && !en.cert) ok = false;
      }
      if (!ok) continue;
      if (entry.first.profit > best) {
        best = entry.first.profit;
        best_value = &entry.first;
      }
    }
    if (best_value) {
      result.placement = best_value->placement;
      result.profit = best;
    }
    if (refused) result.note = "state budget exceeded; best-so-far returned";
    return result;
  }
};

}  // namespace

SolveResult solve_b_simple_jammed(const SapInstance& instance, long long B, const JammedParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_b_simple_jammed needs uniform capacities");
  ColumnSweep sweep(instance, params, B, 0, instance.num_edges(), {}, params.state_budget);
  SolveResult result = sweep.run();
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("solve_b_simple_jammed infeasible: " + bad->describe());
  }
  return result;
}

AnchorSet anchor_heights(const SapInstance& instance, const Rat& delta, const Rat& delta_prime, int levels) {
  if (!instance.uniform()) throw std::invalid_argument("anchor_heights needs uniform capacities");
  const long long U = instance.capacity(0);
  AnchorSet out;
  // H: sums of at most 1/delta task sizes, capped at U.
  const Rat inv = 1 / delta;
  long long k_max = 1;
  {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
    k_max = std::max<long long>(1, q.get_si());
  }
  std::set<long long> H{0};
  for (long long round = 0; round < k_max; ++round) {
    std::set<long long> next = H;
    for (long long h : H) {
      for (const Task& t : instance.tasks()) {
        if (h + t.d <= U) next.insert(h + t.d);
      }
    }
    H = std::move(next);
  }
  out.H.assign(H.begin(), H.end());
  // H0: H plus H-shifted powers of (1+delta').
  std::set<long long> H0 = H;
  std::set<long long> powers;
  Rat p(1);
  while (true) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
    const long long v = q.get_si();
    if (v > U) break;
    if (v >= 1) powers.insert(v);
    p *= (1 + delta_prime);
  }
  for (long long h1 : H) {
    for (long long h2 : powers) {
      if (h1 + h2 <= U) H0.insert(h1 + h2);
    }
  }
  out.H0.assign(H0.begin(), H0.end());
  // H_{l+1} = H_l u {h - d_i}.
  std::set<long long> cur = H0;
  out.levels.push_back(out.H0);
  for (int l = 0; l < levels; ++l) {
    std::set<long long> next = cur;
    for (long long h : cur) {
      for (const Task& t : instance.tasks()) {
        if (h - t.d >= 0) next.insert(h - t.d);
      }
    }
    cur = std::move(next);
    out.levels.emplace_back(cur.begin(), cur.end());
  }
  return out;
}

SolveResult solve_jammed(const SapInstance& instance, const JammedParams& params) {
  if (!instance.uniform()) throw std::invalid_argument("solve_jammed needs uniform capacities");
  const int m = instance.num_edges();
  const long long U = instance.capacity(0);
  const std::vector<long long> heights = default_heights(instance, params);
  bool refused = false;

  std::vector<const Task*> larges;
  for (const Task& t : instance.tasks()) {
    if (is_large(instance, t, params.delta)) larges.push_back(&t);
  }
  std::sort(larges.begin(), larges.end(), [](const Task* a, const Task* b) { return a->id < b->id; });

  struct Key {
    int a;
    std::vector<std::pair<std::string, long long>> boundary;
    bool operator<(const Key& o) const {
      if (a != o.a) return a < o.a;
      return boundary < o.boundary;
    }
  };
  std::map<Key, std::pair<long long, Placement>> memo;

  // rec(a, boundary): best completion on edges [a, m) given the committed
  // large tasks whose paths cross into the suffix.
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
      // New boundary: large tasks using edge b (none at b == m).
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
      std::function<void(size_t, std::vector<std::pair<const Task*, long long>>)> guess_boundary =
          [&](size_t k, std::vector<std::pair<const Task*, long long>> next_boundary) {
            if (k == cands.size()) {
              for (long long Bseg : heights) {
                if (Bseg > U) continue;
                std::vector<std::pair<const Task*, long long>> committed = boundary;
                long long boundary_gain = 0;
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
                    boundary_gain += t->w;
                  }
                }
                if (!consistent) continue;
                bool baseline_ok = true;
                for (const auto& [t, h] : committed) {
                  if (t->s < b && t->t > a && h < Bseg && h + t->d > Bseg) baseline_ok = false;
                }
                if (!baseline_ok) continue;
                ColumnSweep sweep(instance, params, Bseg, a, b, committed, params.state_budget);
                SolveResult seg = sweep.run();
                if (sweep.refused) refused = true;
                auto [sufv, sufp] = rec(b, next_boundary);
                const long long total = seg.profit + boundary_gain + sufv;
                if (total > best.first) {
                  best.first = total;
                  best.second = seg.placement;
                  for (const auto& [t, h] : next_boundary) best.second.place(t->id, h);
                  for (const auto& [id, h] : sufp.heights) best.second.place(id, h);
                }
              }
              return;
            }
            const Task& t = *cands[k];
            for (const auto& [bt, bh] : boundary) {
              if (bt->id == t.id) {
                // A committed task crossing b must carry over as-is; it has
                // no skip branch.
                next_boundary.emplace_back(bt, bh);
                guess_boundary(k + 1, next_boundary);
                next_boundary.pop_back();
                return;
              }
            }
            guess_boundary(k + 1, next_boundary);
            for (long long h : heights) {
              if (h < 0 || h + t.d > U) continue;
              bool ok = true;
              for (const auto& [ot, oh] : next_boundary) {
                if (t.overlaps_path(*ot) && h < oh + ot->d && oh < h + t.d) ok = false;
              }
              for (const auto& [ot, oh] : boundary) {
                if (ot->id != t.id && t.overlaps_path(*ot) && h < oh + ot->d && oh < h + t.d) ok = false;
              }
              if (!ok) continue;
              next_boundary.emplace_back(&t, h);
              guess_boundary(k + 1, next_boundary);
              next_boundary.pop_back();
            }
          };
      guess_boundary(0, {});
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
    throw std::logic_error("solve_jammed infeasible: " + bad->describe());
  }
  return result;
}

}  // namespace sap
