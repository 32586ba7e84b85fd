#include "sap/stair.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace sap {

namespace {

bool is_large(const SapInstance& instance, const Task& t, const Rat& delta) {
  return Rat(static_cast<long>(t.d)) > delta * Rat(static_cast<long>(bottleneck(instance, t)));
}

bool overlaps_fixed(const SapInstance& instance, const StairBlock& sb, const Task& t, long long h) {
  for (const auto& [fid, fh] : sb.fixed) {
    const Task& ft = instance.task(fid);
    if (t.overlaps_path(ft) && h < fh + ft.d && fh < h + t.d) return true;
  }
  return false;
}

bool capacity_ok(const SapInstance& instance, const Task& t, long long h) {
  if (h < 0) return false;
  for (int e = t.s; e < t.t; ++e) {
    if (h + t.d > instance.capacity(e)) return false;
  }
  return true;
}

}  // namespace

long long StairBlock::f_at(const SapInstance& instance, int e) const {
  const long long uL = instance.capacity(e_L);
  if (!mirrored()) {
    if (e <= e_M) return uL;
  } else {
    if (e >= e_M) return uL;
  }
  long long value = uL;
  // Steps listed by edge; value holds from its edge onward (away from e_M).
  std::vector<std::pair<int, long long>> steps = f_steps;
  std::sort(steps.begin(), steps.end());
  if (!mirrored()) {
    for (const auto& [se, sv] : steps) {
      if (se <= e) value = sv;
    }
  } else {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (it->first >= e) value = it->second;
    }
  }
  return value;
}

bool StairBlock::in_block_path(int e) const {
  if (!mirrored()) return e > e_L && e <= e_R;
  return e < e_L && e >= e_R;
}

std::string StairBlock::describe() const {
  std::ostringstream os;
  os << "sb(" << e_L << "," << e_M << "," << e_R;
  for (const auto& [e, v] : f_steps) os << ",f" << e << "=" << v;
  for (const auto& [id, h] : fixed) os << "," << id << "@" << h;
  os << ")";
  return os.str();
}

std::string Configuration::signature() const {
  std::ostringstream os;
  for (const auto& [id, h] : tasks) os << id << "@" << h << ";";
  return os.str();
}

bool fits_into_stair_block(const SapInstance& instance, const StairBlock& sb, const Placement& placement,
                           const Rat& delta) {
  const long long uL = instance.capacity(sb.e_L);
  const long long uM = instance.capacity(sb.e_M);
  for (const auto& [id, h] : placement.heights) {
    const Task& t = instance.task(id);
    if (!capacity_ok(instance, t, h)) return false;
    if (overlaps_fixed(instance, sb, t, h)) return false;
    if (is_large(instance, t, delta)) {
      if (t.s < sb.span_lo() || t.t > sb.span_hi()) return false;
      if (h >= t.d) return false;  // technical condition h(i) < d_i
      if (h + t.d > uM) return false;
      for (int e = t.s; e < t.t; ++e) {
        if (h < sb.f_at(instance, e)) return false;
      }
    } else {
      if (!t.uses_edge(sb.e_M)) return false;
      if (h < uL) return false;
    }
  }
  // Joint feasibility of the placed tasks among themselves.
  return !check_feasible(instance, placement).has_value();
}

std::vector<std::string> stair_large_candidates(const SapInstance& instance, const StairBlock& sb,
                                                const Rat& delta) {
  std::vector<std::string> out;
  std::set<std::string> fixed_ids;
  for (const auto& [id, h] : sb.fixed) fixed_ids.insert(id);
  const long long uM = instance.capacity(sb.e_M);
  for (const Task& t : instance.tasks()) {
    if (fixed_ids.count(t.id) || !is_large(instance, t, delta)) continue;
    if (t.s < sb.span_lo() || t.t > sb.span_hi()) continue;
    long long fmax = 0;
    for (int e = t.s; e < t.t; ++e) fmax = std::max(fmax, sb.f_at(instance, e));
    bool any = false;
    for (long long h = fmax; h <= uM - t.d && h < t.d && !any; ++h) {
      if (capacity_ok(instance, t, h) && !overlaps_fixed(instance, sb, t, h)) any = true;
    }
    if (any) out.push_back(t.id);
  }
  return out;
}

std::vector<SmallPair> stair_small_pairs(const SapInstance& instance, const StairBlock& sb, const Rat& delta) {
  std::vector<SmallPair> out;
  std::set<std::string> fixed_ids;
  for (const auto& [id, h] : sb.fixed) fixed_ids.insert(id);
  const long long uL = instance.capacity(sb.e_L);
  for (const Task& t : instance.tasks()) {
    if (fixed_ids.count(t.id) || is_large(instance, t, delta)) continue;
    if (!t.uses_edge(sb.e_M)) continue;
    const long long top = bottleneck(instance, t) - t.d;
    for (long long h = uL; h <= top; ++h) {
      if (!overlaps_fixed(instance, sb, t, h)) out.push_back(SmallPair{t.id, h});
    }
  }
  return out;
}

bool single_task_fits_block(const SapInstance& instance, const StairBlock& sb, const Task& task, const Rat& delta) {
  if (is_large(instance, task, delta)) {
    if (task.s < sb.span_lo() || task.t > sb.span_hi()) return false;
    long long fmax = 0;
    for (int e = task.s; e < task.t; ++e) fmax = std::max(fmax, sb.f_at(instance, e));
    const long long uM = instance.capacity(sb.e_M);
    for (long long h = fmax; h <= uM - task.d && h < task.d; ++h) {
      if (capacity_ok(instance, task, h) && !overlaps_fixed(instance, sb, task, h)) return true;
    }
    return false;
  }
  if (!task.uses_edge(sb.e_M)) return false;
  const long long uL = instance.capacity(sb.e_L);
  const long long top = bottleneck(instance, task) - task.d;
  for (long long h = uL; h <= top; ++h) {
    if (!overlaps_fixed(instance, sb, task, h)) return true;
  }
  return false;
}

SeparationResult separate_dual(const SapInstance& instance, const StairBlock& sb, const Rat& delta,
                               const std::map<std::pair<int, long long>, double>& alpha_duals,
                               const std::map<std::tuple<int, long long, std::string>, double>& beta_duals,
                               long long weight_lo, long long weight_hi_exclusive, long long state_budget) {
  SeparationResult result;
  const std::vector<std::string> cand_ids = stair_large_candidates(instance, sb, delta);
  std::vector<const Task*> cands;
  for (const auto& id : cand_ids) cands.push_back(&instance.task(id));
  const int lo = sb.span_lo(), hi = sb.span_hi();
  const long long uM = instance.capacity(sb.e_M);

  // Precompute point costs kappa(e, t) = alpha_{e,t} + sum_j beta_{e,t,j}.
  std::map<std::pair<int, long long>, double> kappa;
  for (const auto& [key, v] : alpha_duals) kappa[key] += v;
  for (const auto& [key, v] : beta_duals) kappa[{std::get<0>(key), std::get<1>(key)}] += v;

  // Left-to-right DP over the edges of the block span. State: tasks whose
  // path covers the current edge (with heights) plus the weight collected so
  // far. Cost of an edge: kappa summed over the union of active intervals.
  struct State {
    std::vector<std::pair<int, long long>> active;  // (candidate index, height), sorted
    long long weight = 0;
    bool operator<(const State& o) const {
      if (weight != o.weight) return weight < o.weight;
      return active < o.active;
    }
  };
  std::map<State, std::pair<double, std::vector<std::pair<int, long long>>>> layer;  // -> (value, all chosen)
  layer[{{}, 0}] = {0.0, {}};
  long long states = 0;

  for (int e = lo; e < hi; ++e) {
    std::map<State, std::pair<double, std::vector<std::pair<int, long long>>>> next;
    for (const auto& [state, val] : layer) {
      if (++states > state_budget) break;
      // Drop tasks ending at vertex e (their path's last edge is e-1).
      State base;
      base.weight = state.weight;
      for (const auto& [ci, h] : state.active) {
        if (cands[ci]->t > e) base.active.emplace_back(ci, h);
      }
      // Enumerate subsets of candidates starting at e with heights.
      std::vector<int> starters;
      for (size_t ci = 0; ci < cands.size(); ++ci) {
        if (cands[ci]->s == e) starters.push_back(static_cast<int>(ci));
      }
      std::function<void(size_t, State)> extend = [&](size_t k, State cur) {
        if (k == starters.size()) {
          // Edge cost over the union of active intervals at e.
          double cost = 0.0;
          for (const auto& [ci, h] : cur.active) {
            for (long long t = h; t < h + cands[ci]->d; ++t) {
              auto it = kappa.find({e, t});
              if (it != kappa.end()) cost += it->second;
            }
          }
          auto entry = next.find(cur);
          std::vector<std::pair<int, long long>> chosen = val.second;
          for (const auto& a : cur.active) {
            if (std::find(val.second.begin(), val.second.end(), a) == val.second.end() && cands[a.first]->s == e)
              chosen.push_back(a);
          }
          const double value = val.first - cost +
                               [&] {
                                 double neww = 0;
                                 for (const auto& [ci, h] : cur.active) {
                                   if (cands[ci]->s == e) neww += static_cast<double>(cands[ci]->w);
                                 }
                                 return neww;
                               }();
          if (entry == next.end() || value > entry->second.first) {
            next[cur] = {value, std::move(chosen)};
          }
          return;
        }
        extend(k + 1, cur);
        const Task& t = *cands[starters[k]];
        long long fmax = 0;
        for (int e2 = t.s; e2 < t.t; ++e2) fmax = std::max(fmax, sb.f_at(instance, e2));
        for (long long h = fmax; h <= uM - t.d && h < t.d; ++h) {
          if (!capacity_ok(instance, t, h) || overlaps_fixed(instance, sb, t, h)) continue;
          bool clash = false;
          for (const auto& [ci, oh] : cur.active) {
            const Task& ot = *cands[ci];
            if (t.overlaps_path(ot) && h < oh + ot.d && oh < h + t.d) clash = true;
          }
          if (clash) continue;
          State nxt = cur;
          nxt.active.emplace_back(starters[k], h);
          std::sort(nxt.active.begin(), nxt.active.end());
          nxt.weight = cur.weight + t.w;
          if (nxt.weight >= weight_hi_exclusive) continue;
          extend(k + 1, std::move(nxt));
        }
      };
      extend(0, base);
    }
    layer = std::move(next);
    if (layer.empty()) break;
  }

  for (const auto& [state, val] : layer) {
    if (state.weight < weight_lo || state.weight >= weight_hi_exclusive) continue;
    if (!result.found || val.first > result.reduced_value) {
      result.found = true;
      result.reduced_value = val.first;
      result.config.tasks.clear();
      for (const auto& [ci, h] : val.second) result.config.tasks.emplace_back(cands[ci]->id, h);
      std::sort(result.config.tasks.begin(), result.config.tasks.end());
      result.config.weight = state.weight;
    }
  }
  return result;
}

namespace {

struct MasterLp {
  LpModel lp;
  std::vector<SmallPair> pairs;
  std::vector<int> pair_var;
  std::map<std::pair<int, long long>, int> point_row;               // (e,t)
  std::map<std::tuple<int, long long, std::string>, int> pos_row;   // (e,t,j)
  int conf_row = -1;
  std::vector<Configuration> configs;
  std::vector<int> config_var;
  std::set<std::string> config_sigs;
};

// Grid rows are instantiated only at integer heights below the tallest
// capacity, and position rows only for pairs that exist.
MasterLp build_master(const SapInstance& instance, const StairBlock& sb, const Rat& delta, bool use_configs) {
  MasterLp m;
  m.lp.direction = Direction::Maximize;
  m.pairs = stair_small_pairs(instance, sb, delta);
  const int lo = sb.span_lo(), hi = sb.span_hi();
  const long long tmax = instance.max_capacity();

  for (size_t p = 0; p < m.pairs.size(); ++p) {
    m.pair_var.push_back(m.lp.add_variable("x_" + m.pairs[p].id + "_" + std::to_string(m.pairs[p].t),
                                           static_cast<double>(instance.task(m.pairs[p].id).w)));
  }
  // con:point.
  for (int e = lo; e < hi; ++e) {
    for (long long t = 0; t < tmax; ++t) {
      std::vector<std::pair<int, double>> coeffs;
      for (size_t p = 0; p < m.pairs.size(); ++p) {
        const Task& task = instance.task(m.pairs[p].id);
        if (task.uses_edge(e) && m.pairs[p].t <= t && t < m.pairs[p].t + task.d)
          coeffs.emplace_back(m.pair_var[p], 1.0);
      }
      // Row created even when empty of x terms: configurations may cover it.
      m.point_row[{e, t}] =
          m.lp.add_constraint("pt_" + std::to_string(e) + "_" + std::to_string(t), Sense::LE, 1.0, std::move(coeffs));
    }
  }
  // con:position-j.
  std::set<std::string> small_ids;
  for (const auto& p : m.pairs) small_ids.insert(p.id);
  for (const auto& id : small_ids) {
    const Task& task = instance.task(id);
    for (int e = std::max(lo, task.s); e < std::min(hi, task.t); ++e) {
      for (long long t = 0; t < tmax; ++t) {
        std::vector<std::pair<int, double>> coeffs;
        for (size_t p = 0; p < m.pairs.size(); ++p) {
          if (m.pairs[p].id == id && m.pairs[p].t <= t) coeffs.emplace_back(m.pair_var[p], 1.0);
        }
        if (coeffs.empty()) continue;
        m.pos_row[{e, t, id}] = m.lp.add_constraint(
            "pos_" + std::to_string(e) + "_" + std::to_string(t) + "_" + id, Sense::LE, 1.0, std::move(coeffs));
      }
    }
  }
  // con:small.
  for (const auto& id : small_ids) {
    std::vector<std::pair<int, double>> coeffs;
    for (size_t p = 0; p < m.pairs.size(); ++p) {
      if (m.pairs[p].id == id) coeffs.emplace_back(m.pair_var[p], 1.0);
    }
    m.lp.add_constraint("one_" + id, Sense::LE, 1.0, std::move(coeffs));
  }
  if (use_configs) m.conf_row = m.lp.add_constraint("conf", Sense::EQ, 1.0, {});
  return m;
}

void add_config_column(const SapInstance& instance, const StairBlock& sb, MasterLp& m, const Configuration& config) {
  std::vector<std::pair<int, double>> entries;
  // Covered points: union of the config's task rectangles.
  for (const auto& [pt, row] : m.point_row) {
    const auto& [e, t] = pt;
    bool covered = false;
    for (const auto& [id, h] : config.tasks) {
      const Task& task = instance.task(id);
      if (task.uses_edge(e) && h <= t && t < h + task.d) covered = true;
    }
    if (covered) entries.emplace_back(row, 1.0);
  }
  for (const auto& [key, row] : m.pos_row) {
    const auto& [e, t, id] = key;
    bool covered = false;
    for (const auto& [cid, h] : config.tasks) {
      const Task& task = instance.task(cid);
      if (task.uses_edge(e) && h <= t && t < h + task.d) covered = true;
    }
    if (covered) entries.emplace_back(row, 1.0);
  }
  entries.emplace_back(m.conf_row, 1.0);
  const int var = m.lp.add_column("y_" + std::to_string(m.configs.size()), static_cast<double>(config.weight),
                                  entries);
  m.configs.push_back(config);
  m.config_var.push_back(var);
  m.config_sigs.insert(config.signature());
  (void)sb;
}

}  // namespace

StairLpSolution solve_lp_sb(const SapInstance& instance, const StairBlock& sb, const StairParams& params,
                            long long W, bool use_configs) {
  StairLpSolution out;
  MasterLp m = build_master(instance, sb, params.delta, use_configs);
  const Rat wlo_r(static_cast<long>(W));
  const Rat whi_r = (1 + params.epsilon) * wlo_r;
  const long long weight_lo = W;
  // Window [W, (1+eps)W), exclusive upper bound as the smallest excluded integer.
  long long weight_hi = W;
  while (Rat(static_cast<long>(weight_hi)) < whi_r) ++weight_hi;

  if (use_configs) {
    SeparationResult first = separate_dual(instance, sb, params.delta, {}, {}, weight_lo, weight_hi,
                                           params.state_budget);
    if (!first.found) {
      out.window_infeasible = true;
      return out;
    }
    add_config_column(instance, sb, m, first.config);
  }

  LpSolution<double> sol;
  for (int iter = 0; iter < 1000; ++iter) {
    sol = lp_solve(m.lp);
    out.iterations = iter + 1;
    if (sol.status != LpStatus::Optimal) {
      // With at least one configuration column the master is feasible; an
      // infeasible status can only mean an empty window.
      out.window_infeasible = true;
      return out;
    }
    if (!use_configs) break;
    std::map<std::pair<int, long long>, double> alpha;
    std::map<std::tuple<int, long long, std::string>, double> beta;
    for (const auto& [pt, row] : m.point_row) {
      if (sol.dual[row] > 1e-12) alpha[pt] = sol.dual[row];
    }
    for (const auto& [key, row] : m.pos_row) {
      if (sol.dual[row] > 1e-12) beta[key] = sol.dual[row];
    }
    const double gamma = sol.dual[m.conf_row];
    SeparationResult sep = separate_dual(instance, sb, params.delta, alpha, beta, weight_lo, weight_hi,
                                         params.state_budget);
    if (!sep.found || sep.reduced_value <= gamma + 1e-7) break;
    if (m.config_sigs.count(sep.config.signature())) break;  // numerical safety
    add_config_column(instance, sb, m, sep.config);
  }

  out.objective = sol.objective;
  out.pairs = m.pairs;
  for (size_t p = 0; p < m.pairs.size(); ++p) out.pair_value.push_back(std::max(0.0, sol.primal[m.pair_var[p]]));
  out.configs = m.configs;
  for (size_t c = 0; c < m.configs.size(); ++c)
    out.config_value.push_back(std::max(0.0, sol.primal[m.config_var[c]]));
  return out;
}

std::vector<SmallPair> problematic_pairs(const StairLpSolution& sol, const SapInstance& instance, double eta) {
  std::vector<SmallPair> out;
  for (size_t p = 0; p < sol.pairs.size(); ++p) {
    const Task& task = instance.task(sol.pairs[p].id);
    double covered = 0.0;
    for (size_t c = 0; c < sol.configs.size(); ++c) {
      bool overlap = false;
      for (const auto& [cid, h] : sol.configs[c].tasks) {
        const Task& ct = instance.task(cid);
        if (!task.overlaps_path(ct)) continue;
        if (sol.pairs[p].t < h + ct.d && h < sol.pairs[p].t + task.d) overlap = true;
      }
      if (overlap) covered += sol.config_value[c];
    }
    if (covered > 1.0 - eta) out.push_back(sol.pairs[p]);
  }
  return out;
}

namespace {

// Rectangles p(j,t) and p(j',t') of through-e_M tasks overlap iff their
// height intervals intersect (they share the column above e_M).
bool pairs_overlap(const SapInstance& instance, const SmallPair& a, const SmallPair& b) {
  const Task& ta = instance.task(a.id);
  const Task& tb = instance.task(b.id);
  if (!ta.overlaps_path(tb)) return false;
  return a.t < b.t + tb.d && b.t < a.t + ta.d;
}

Placement round_one(const SapInstance& instance, const StairLpSolution& sol, Rng& rng) {
  Placement result;
  // Sample a configuration from y* (if any columns exist).
  int chosen_config = -1;
  if (!sol.configs.empty()) {
    double r = rng.next_unit();
    double acc = 0.0;
    for (size_t c = 0; c < sol.configs.size(); ++c) {
      acc += sol.config_value[c];
      if (r < acc) {
        chosen_config = static_cast<int>(c);
        break;
      }
    }
    if (chosen_config < 0) chosen_config = static_cast<int>(sol.configs.size()) - 1;
    for (const auto& [id, h] : sol.configs[chosen_config].tasks) result.place(id, h);
  }
  // Dependent rounding of the pairs at marginals x*/2, then alteration by
  // increasing t (ties by id).
  std::map<std::string, std::vector<size_t>> by_task;
  for (size_t p = 0; p < sol.pairs.size(); ++p) by_task[sol.pairs[p].id].push_back(p);
  std::vector<size_t> sampled;
  for (const auto& [id, list] : by_task) {
    const double r = rng.next_unit();
    double acc = 0.0;
    for (size_t p : list) {
      double mass = sol.pair_value[p] / 2.0;
      // Pairs overlapping the sampled configuration are dropped outright.
      if (chosen_config >= 0) {
        bool overlap = false;
        const Task& task = instance.task(sol.pairs[p].id);
        for (const auto& [cid, h] : sol.configs[chosen_config].tasks) {
          const Task& ct = instance.task(cid);
          if (task.overlaps_path(ct) && sol.pairs[p].t < h + ct.d && h < sol.pairs[p].t + task.d) overlap = true;
        }
        if (overlap) mass = 0.0;
      }
      if (r < acc + mass) {
        sampled.push_back(p);
        break;
      }
      acc += mass;
    }
  }
  std::sort(sampled.begin(), sampled.end(), [&](size_t a, size_t b) {
    if (sol.pairs[a].t != sol.pairs[b].t) return sol.pairs[a].t < sol.pairs[b].t;
    return sol.pairs[a].id < sol.pairs[b].id;
  });
  std::vector<size_t> kept;
  for (size_t p : sampled) {
    bool ok = true;
    for (size_t q : kept) {
      if (pairs_overlap(instance, sol.pairs[p], sol.pairs[q])) ok = false;
    }
    if (ok) kept.push_back(p);
  }
  for (size_t p : kept) result.place(sol.pairs[p].id, sol.pairs[p].t);
  return result;
}

}  // namespace

Placement round_stair_lp(const SapInstance& instance, const StairBlock& sb, const StairParams& params,
                         const StairLpSolution& with_configs, const StairLpSolution& small_only, uint64_t seed) {
  Rng rng_a = Rng(seed).derive("config-route");
  Rng rng_b = Rng(seed).derive("small-route");
  Placement a;
  if (!with_configs.window_infeasible) a = round_one(instance, with_configs, rng_a);
  Placement b = round_one(instance, small_only, rng_b);
  const long long pa = profit(instance, a);
  const long long pb = profit(instance, b);
  Placement best = pa >= pb ? a : b;
  // The rounded solution must fit the block; this is an internal invariant.
  if (!fits_into_stair_block(instance, sb, best, params.delta)) {
    throw std::logic_error("round_stair_lp produced a solution that does not fit the block");
  }
  return best;
}

SolveResult solve_stair_block(const SapInstance& instance, const StairBlock& sb, const StairParams& params) {
  SolveResult result;
  const StairLpSolution small_only = solve_lp_sb(instance, sb, params, 1, /*use_configs=*/false);

  // Small-only route, best of a few seeds (the rounding is randomized).
  {
    Rng base = Rng(params.seed).derive("W-none");
    for (int round = 0; round < 8; ++round) {
      Placement p = round_stair_lp(instance, sb, params, StairLpSolution{true, 0, {}, {}, {}, {}, 0}, small_only,
                                   base.derive(round).next_u64());
      const long long v = profit(instance, p);
      if (v > result.profit || (result.placement.empty() && round == 0)) {
        result.placement = p;
        result.profit = v;
      }
    }
  }

  const std::vector<std::string> larges = stair_large_candidates(instance, sb, params.delta);
  if (!larges.empty()) {
    long long min_w = -1, max_w = 0;
    for (const auto& id : larges) {
      const long long w = instance.task(id).w;
      if (w <= 0) continue;
      if (min_w < 0 || w < min_w) min_w = w;
      max_w = std::max(max_w, w);
    }
    if (min_w > 0) {
      const Rat top = Rat(instance.num_tasks()) * Rat(static_cast<long>(max_w));
      Rat W(static_cast<long>(min_w));
      int index = 0;
      while (W <= top && index < params.max_w_guesses) {
        long long Wi = 0;
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), W.get_num_mpz_t(), W.get_den_mpz_t());
        Wi = q.get_si();
        StairLpSolution lps = solve_lp_sb(instance, sb, params, Wi, /*use_configs=*/true);
        if (!lps.window_infeasible) {
          Rng base = Rng(params.seed).derive("W-" + std::to_string(index));
          for (int round = 0; round < 8; ++round) {
            Placement p = round_stair_lp(instance, sb, params, lps, small_only, base.derive(round).next_u64());
            const long long v = profit(instance, p);
            if (v > result.profit) {
              result.placement = p;
              result.profit = v;
            }
          }
        }
        W *= (1 + params.epsilon);
        ++index;
      }
    }
  }
  return result;
}

bool blocks_compatible(const SapInstance& instance, const StairBlock& a, const StairBlock& b, const Rat& delta) {
  // Shared fixed tasks must agree on heights.
  for (const auto& [ida, ha] : a.fixed) {
    for (const auto& [idb, hb] : b.fixed) {
      if (ida == idb && ha != hb) return false;
    }
  }
  // A fixed task of one block must avoid the area of the other.
  auto avoids = [&](const std::string& id, long long h, const StairBlock& other) {
    for (const auto& [oid, oh] : other.fixed) {
      if (oid == id) return true;  // part of the other block
    }
    const Task& t = instance.task(id);
    const long long uM = instance.capacity(other.e_M);
    for (int e = t.s; e < t.t; ++e) {
      if (!other.in_block_path(e)) continue;
      if (h >= uM) continue;
      if (h + t.d <= other.f_at(instance, e)) continue;
      return false;
    }
    return true;
  };
  for (const auto& [id, h] : a.fixed) {
    if (!avoids(id, h, b)) return false;
  }
  for (const auto& [id, h] : b.fixed) {
    if (!avoids(id, h, a)) return false;
  }
  // No candidate task may fit both blocks (checked over the instance's
  // candidate set; the paper quantifies over all conceivable tasks).
  for (const Task& t : instance.tasks()) {
    if (single_task_fits_block(instance, a, t, delta) && single_task_fits_block(instance, b, t, delta)) return false;
  }
  return true;
}

SolveResult compose_stair_blocks(const SapInstance& instance, const std::vector<StairBlock>& blocks,
                                 const StairParams& params) {
  for (size_t i = 0; i < blocks.size(); ++i) {
    for (size_t j = i + 1; j < blocks.size(); ++j) {
      if (!blocks_compatible(instance, blocks[i], blocks[j], params.delta))
        throw std::invalid_argument("stair blocks " + blocks[i].describe() + " and " + blocks[j].describe() +
                                    " are incompatible");
    }
  }
  SolveResult result;
  for (size_t i = 0; i < blocks.size(); ++i) {
    StairParams local = params;
    local.seed = Rng(params.seed).derive(blocks[i].describe()).next_u64();
    SolveResult sub = solve_stair_block(instance, blocks[i], local);
    for (const auto& [id, h] : sub.placement.heights) {
      if (!result.placement.contains(id)) result.placement.place(id, h);
    }
    result.refused = result.refused || sub.refused;
  }
  for (const auto& block : blocks) {
    for (const auto& [id, h] : block.fixed) {
      if (!result.placement.contains(id)) result.placement.place(id, h);
    }
  }
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("compose_stair_blocks produced an infeasible union: " + bad->describe());
  }
  result.profit = profit(instance, result.placement);
  return result;
}

namespace {

struct BlockSolveCache {
  const SapInstance& instance;
  const StairParams& params;
  std::map<std::string, SolveResult> cache;

  const SolveResult& get(const StairBlock& sb) {
    auto it = cache.find(sb.describe());
    if (it == cache.end()) {
      StairParams local = params;
      local.seed = Rng(params.seed).derive(sb.describe()).next_u64();
      it = cache.emplace(sb.describe(), solve_stair_block(instance, sb, local)).first;
    }
    return it->second;
  }
};

}  // namespace

SolveResult solve_stair_solution(const SapInstance& instance, const std::vector<StairBlock>& candidate_blocks,
                                 const StairSolutionParams& params) {
  // The point grid and the height enumeration are pseudo-polynomial in the
  // capacities; past desk scale the solver refuses rather than degrades.
  if (instance.max_capacity() > 64)
    throw std::invalid_argument("stair solver needs desk-scale capacities (max 64)");
  const Rat& delta = params.stair.delta;
  SolveResult result;
  BlockSolveCache cache{instance, params.stair, {}};

  // Large-task candidates for T_L^0 with all admissible heights.
  struct LargeCand {
    const Task* task;
    long long h;
  };
  std::vector<LargeCand> larges;
  for (const Task& t : instance.tasks()) {
    if (!is_large(instance, t, delta)) continue;
    const long long top = bottleneck(instance, t) - t.d;
    for (long long h = 0; h <= top; ++h) larges.push_back(LargeCand{&t, h});
  }

  // Precompute pairwise block compatibility and block-task compatibility.
  const size_t nb = candidate_blocks.size();
  std::vector<std::vector<bool>> bcomp(nb, std::vector<bool>(nb, true));
  for (size_t i = 0; i < nb; ++i) {
    for (size_t j = i + 1; j < nb; ++j) {
      bcomp[i][j] = bcomp[j][i] = blocks_compatible(instance, candidate_blocks[i], candidate_blocks[j], delta);
    }
  }
  auto task_block_ok = [&](const LargeCand& lc, const StairBlock& sb) {
    // Compatible with or part of the block: outside tasks must not intersect
    // the block's usable area.
    for (const auto& [id, h] : sb.fixed) {
      if (id == lc.task->id) return h == lc.h;
    }
    const long long uM = instance.capacity(sb.e_M);
    for (int e = lc.task->s; e < lc.task->t; ++e) {
      if (!sb.in_block_path(e)) continue;
      if (lc.h >= uM) continue;
      if (lc.h + lc.task->d <= sb.f_at(instance, e)) continue;
      return false;
    }
    return true;
  };

  // Sweep DP over edges. A cell is (active blocks, active large tasks with
  // heights); blocks and tasks contribute their weight when they start.
  struct Cell {
    std::vector<int> blocks;                       // sorted indices
    std::vector<std::pair<int, long long>> tasks;  // (large index, h), sorted
    bool operator<(const Cell& o) const {
      if (blocks != o.blocks) return blocks < o.blocks;
      return tasks < o.tasks;
    }
  };
  struct Value {
    long long profit = -1;
    std::vector<int> all_blocks;
    std::vector<std::pair<int, long long>> all_tasks;
  };

  auto block_span = [&](const StairBlock& sb) {
    // Edges where the block counts toward the multiplicity cap: its P(SB).
    int lo = instance.num_edges(), hi = -1;
    for (int e = 0; e < instance.num_edges(); ++e) {
      if (sb.in_block_path(e)) {
        lo = std::min(lo, e);
        hi = std::max(hi, e + 1);
      }
    }
    if (hi < 0) {
      lo = std::min(sb.e_M, sb.e_R);
      hi = std::max(sb.e_M, sb.e_R) + 1;
    }
    return std::make_pair(lo, hi);
  };

  std::map<Cell, Value> layer;
  layer[{{}, {}}] = Value{0, {}, {}};
  long long states = 0;

  for (int e = 0; e < instance.num_edges(); ++e) {
    std::map<Cell, Value> next;
    for (const auto& [cell, value] : layer) {
      if (++states > params.stair.state_budget) {
        result.refused = true;
        break;
      }
      // Keep entities whose span continues through e; removed ones ended.
      Cell base;
      for (int bi : cell.blocks) {
        const auto [lo, hi] = block_span(candidate_blocks[bi]);
        if (hi > e) base.blocks.push_back(bi);
      }
      for (const auto& [li, h] : cell.tasks) {
        if (larges[li].task->t > e) base.tasks.emplace_back(li, h);
      }
      // New blocks starting at e.
      std::vector<int> block_starters;
      for (size_t bi = 0; bi < nb; ++bi) {
        const auto [lo, hi] = block_span(candidate_blocks[bi]);
        if (lo == e) block_starters.push_back(static_cast<int>(bi));
      }
      std::vector<int> task_starters;
      for (size_t li = 0; li < larges.size(); ++li) {
        if (larges[li].task->s == e) task_starters.push_back(static_cast<int>(li));
      }

      std::function<void(size_t, Cell, long long, std::vector<int>, std::vector<std::pair<int, long long>>)>
          extend_tasks = [&](size_t k, Cell cur, long long gained, std::vector<int> nb_list,
                             std::vector<std::pair<int, long long>> nt_list) {
            if (k == task_starters.size()) {
              // Per-edge multiplicity caps.
              if (static_cast<int>(cur.blocks.size()) > params.gamma ||
                  static_cast<int>(cur.tasks.size()) > params.gamma)
                return;
              Value nv;
              nv.profit = value.profit + gained;
              nv.all_blocks = value.all_blocks;
              for (int bi : nb_list) nv.all_blocks.push_back(bi);
              nv.all_tasks = value.all_tasks;
              for (const auto& p : nt_list) nv.all_tasks.push_back(p);
              auto it = next.find(cur);
              if (it == next.end() || nv.profit > it->second.profit) next[cur] = std::move(nv);
              return;
            }
            extend_tasks(k + 1, cur, gained, nb_list, nt_list);
            const LargeCand& lc = larges[task_starters[k]];
            if (!capacity_ok(instance, *lc.task, lc.h)) return;
            bool ok = true;
            for (const auto& [li, h] : cur.tasks) {
              const Task& ot = *larges[li].task;
              if (lc.task->overlaps_path(ot) && lc.h < h + ot.d && h < lc.h + lc.task->d) ok = false;
              if (larges[li].task->id == lc.task->id) ok = false;
            }
            for (int bi : cur.blocks) {
              if (!task_block_ok(lc, candidate_blocks[bi])) ok = false;
            }
            if (!ok) return;
            Cell nxt = cur;
            nxt.tasks.emplace_back(task_starters[k], lc.h);
            std::sort(nxt.tasks.begin(), nxt.tasks.end());
            auto nt2 = nt_list;
            nt2.emplace_back(task_starters[k], lc.h);
            extend_tasks(k + 1, std::move(nxt), gained + lc.task->w, nb_list, std::move(nt2));
          };

      std::function<void(size_t, Cell, long long, std::vector<int>)> extend_blocks =
          [&](size_t k, Cell cur, long long gained, std::vector<int> nb_list) {
            if (k == block_starters.size()) {
              extend_tasks(0, std::move(cur), gained, std::move(nb_list), {});
              return;
            }
            extend_blocks(k + 1, cur, gained, nb_list);
            const int bi = block_starters[k];
            bool ok = true;
            for (int bj : cur.blocks) {
              if (!bcomp[bi][bj]) ok = false;
            }
            // Existing active tasks must be compatible with the new block.
            for (const auto& [li, h] : cur.tasks) {
              if (!task_block_ok(LargeCand{larges[li].task, h}, candidate_blocks[bi])) ok = false;
            }
            if (!ok) return;
            Cell nxt = cur;
            nxt.blocks.push_back(bi);
            std::sort(nxt.blocks.begin(), nxt.blocks.end());
            long long wblock = cache.get(candidate_blocks[bi]).profit;
            for (const auto& [id, h] : candidate_blocks[bi].fixed) wblock += instance.task(id).w;
            auto nb2 = nb_list;
            nb2.push_back(bi);
            extend_blocks(k + 1, std::move(nxt), gained + wblock, std::move(nb2));
          };

      extend_blocks(0, base, 0, {});
    }
    if (result.refused) break;
    layer = std::move(next);
  }

  // Extract the best terminal cell and materialize the union placement.
  const Value* best = nullptr;
  for (const auto& [cell, value] : layer) {
    if (!best || value.profit > best->profit) best = &value;
  }
  if (best) {
    for (const auto& [li, h] : best->all_tasks) result.placement.place(larges[li].task->id, h);
    for (int bi : best->all_blocks) {
      const SolveResult& sub = cache.get(candidate_blocks[bi]);
      for (const auto& [id, h] : sub.placement.heights) {
        if (!result.placement.contains(id)) result.placement.place(id, h);
      }
      for (const auto& [id, h] : candidate_blocks[bi].fixed) {
        if (!result.placement.contains(id)) result.placement.place(id, h);
      }
    }
  }
  if (auto bad = check_feasible(instance, result.placement)) {
    throw std::logic_error("solve_stair_solution infeasible: " + bad->describe());
  }
  result.profit = profit(instance, result.placement);
  return result;
}

std::vector<StairBlock> blocks_from_json(const std::string& text) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
  std::vector<StairBlock> out;
  for (const auto& jb : j.at("blocks")) {
    StairBlock sb;
    sb.e_L = jb.at("e_L").get<int>();
    sb.e_M = jb.at("e_M").get<int>();
    sb.e_R = jb.at("e_R").get<int>();
    if (jb.contains("f")) {
      for (const auto& step : jb.at("f")) sb.f_steps.emplace_back(step.at(0).get<int>(), step.at(1).get<long long>());
    }
    if (jb.contains("fixed")) {
      for (const auto& ft : jb.at("fixed"))
        sb.fixed.emplace_back(ft.at("id").get<std::string>(), ft.at("h").get<long long>());
    }
    out.push_back(std::move(sb));
  }
  return out;
}

std::string blocks_to_json(const std::vector<StairBlock>& blocks) {
  nlohmann::ordered_json j;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& sb : blocks) {
    nlohmann::ordered_json jb;
    jb["e_L"] = sb.e_L;
    jb["e_M"] = sb.e_M;
    jb["e_R"] = sb.e_R;
    jb["f"] = nlohmann::ordered_json::array();
    for (const auto& [e, v] : sb.f_steps) jb["f"].push_back({e, v});
    jb["fixed"] = nlohmann::ordered_json::array();
    for (const auto& [id, h] : sb.fixed) {
      nlohmann::ordered_json ft;
      ft["id"] = id;
      ft["h"] = h;
      jb["fixed"].push_back(std::move(ft));
    }
    j["blocks"].push_back(std::move(jb));
  }
  return j.dump();
}

}  // namespace sap
