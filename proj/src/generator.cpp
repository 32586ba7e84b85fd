#include "sap/generator.hpp"

#include <algorithm>
#include <set>

#include "sap/rng.hpp"

namespace sap {

namespace {

long long floor_rat(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

std::string task_name(int i) { return "t" + std::to_string(i); }

Generated finish_planted(std::vector<long long> caps, std::vector<Task> tasks, PlantedStructure planted) {
  SapInstance instance(std::move(caps), std::move(tasks));
  if (auto bad = check_feasible(instance, planted.placement)) {
    throw std::logic_error("generator produced an infeasible planted placement: " + bad->describe());
  }
  planted.profit = profit(instance, planted.placement);
  planted.large_profit = 0;
  for (const auto& id : planted.large_ids) {
    if (planted.placement.contains(id)) planted.large_profit += instance.task(id).w;
  }
  planted.small_profit = planted.profit - planted.large_profit;
  Generated out{std::move(instance), std::move(planted)};
  return out;
}

Generated gen_uniform_random(const GenSpec& spec) {
  Rng rng(spec.seed);
  std::vector<long long> caps(spec.m, spec.U);
  std::vector<Task> tasks;
  for (int i = 0; i < spec.n; ++i) {
    Task t;
    t.id = task_name(i);
    t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(spec.m)));
    t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(spec.m - t.s)));
    t.d = rng.next_int(1, spec.U);
    t.w = rng.next_int(1, 20);
    tasks.push_back(std::move(t));
  }
  return Generated{SapInstance(std::move(caps), std::move(tasks)), std::nullopt};
}

Generated gen_planted_boxable(const GenSpec& spec) {
  Rng rng(spec.seed);
  // One multi-task box at the bottom and one or two single-large-task boxes
  // above it; epsilon controls the smallness scale inside the multi box.
  const long long eps8_inv = 1 / to_double(rat_pow(spec.epsilon, 8)) + 0.5;
  const long long d_box = eps8_inv;  // unit smalls fit exactly: 1 <= eps^8 * d_box
  const int m = std::max(2, spec.m);
  const long long U = 4 * d_box;
  std::vector<long long> caps(m, U);
  std::vector<Task> tasks;
  PlantedStructure planted;

  Box small_box{0, m, d_box, 0};
  planted.boxes.push_back(small_box);
  const int n_small = std::max(2, spec.n - 2);
  for (int i = 0; i < n_small; ++i) {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
    t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - t.s)));
    t.d = 1;
    t.w = rng.next_int(1, 10);
    // Stack inside the box per edge; heights chosen greedily.
    long long h = 0;
    for (const auto& [id, ph] : planted.placement.heights) {
      const Task& other = tasks[std::stoi(id.substr(1))];
      if (t.s < other.t && other.s < t.t) h = std::max(h, ph + other.d);
    }
    if (h + t.d > floor_rat((1 - 2 * spec.epsilon) * Rat(static_cast<long>(d_box)))) {
      // Box busy enough on this path; keep the task as an unplanted distractor.
      t.w = 1;
      tasks.push_back(std::move(t));
      continue;
    }
    planted.placement.place(t.id, h);
    tasks.push_back(std::move(t));
  }
  // Large tasks: one per remaining slot, above the small box.
  const int n_large = 2;
  long long base = d_box;
  for (int i = 0; i < n_large; ++i) {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    const int span = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
    t.s = static_cast<int>(rng.next_below(static_cast<uint64_t>(m - span + 1)));
    t.t = t.s + span;
    t.d = floor_rat(spec.delta * Rat(static_cast<long>(U))) + 1 + rng.next_int(0, d_box / 4);
    t.w = rng.next_int(5, 25);
    if (base + t.d > U) break;
    planted.placement.place(t.id, base);
    planted.large_ids.push_back(t.id);
    planted.boxes.push_back(Box{t.s, t.t, t.d, base});
    planted.golden_heights.push_back(base);
    base += t.d;
    tasks.push_back(std::move(t));
  }
  planted.golden_heights.push_back(0);
  planted.golden_heights.push_back(d_box);
  planted.golden_sizes.push_back(d_box);
  return finish_planted(std::move(caps), std::move(tasks), std::move(planted));
}

Generated gen_planted_pile(const GenSpec& spec) {
  Rng rng(spec.seed);
  const long long eps8_inv = 1 / to_double(rat_pow(spec.epsilon, 8)) + 0.5;
  const int beta = std::max(1, spec.beta);
  const long long d_box = eps8_inv;
  const long long U = d_box * beta;
  const int m = std::max(3, spec.m);
  std::vector<long long> caps(m, U);
  std::vector<Task> tasks;
  PlantedStructure planted;

  // Nested pile on the left half; large tasks on the right half.
  const int pile_hi_limit = std::max(2, m / 2 + 1);
  int cur_s = 0, cur_t = pile_hi_limit;
  for (int j = 0; j < beta; ++j) {
    planted.boxes.push_back(Box{cur_s, cur_t, d_box, static_cast<long long>(j) * d_box});
    if (cur_t - cur_s > 1 && rng.next_below(2) == 0) ++cur_s;
  }
  const int n_small = std::max(2, spec.n - 2);
  std::vector<std::vector<long long>> box_load(beta, std::vector<long long>(m, 0));
  for (int i = 0; i < n_small; ++i) {
    const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(beta)));
    const Box& box = planted.boxes[j];
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = box.s + static_cast<int>(rng.next_below(static_cast<uint64_t>(box.t - box.s)));
    t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(box.t - t.s)));
    t.d = 1;
    t.w = rng.next_int(1, 10);
    long long h = 0;
    for (int e = t.s; e < t.t; ++e) h = std::max(h, box_load[j][e]);
    if (h + t.d > floor_rat((1 - 2 * spec.epsilon) * Rat(static_cast<long>(d_box)))) {
      tasks.push_back(std::move(t));
      continue;
    }
    for (int e = t.s; e < t.t; ++e) box_load[j][e] = h + t.d;
    planted.placement.place(t.id, *box.h + h);
    tasks.push_back(std::move(t));
  }
  // Large tasks on the right half at anti-gravity heights.
  if (pile_hi_limit < m) {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = pile_hi_limit;
    t.t = m;
    t.d = floor_rat(spec.delta * Rat(static_cast<long>(U))) + 1;
    t.w = rng.next_int(10, 30);
    planted.placement.place(t.id, U - t.d);
    planted.large_ids.push_back(t.id);
    tasks.push_back(std::move(t));
  }
  return finish_planted(std::move(caps), std::move(tasks), std::move(planted));
}

Generated gen_planted_laminar(const GenSpec& spec) {
  Rng rng(spec.seed);
  const Rat eps = spec.epsilon;  // needs 1/eps^2 <= 9
  const long long inv_eps = floor_rat(1 / eps);
  const long long q = inv_eps * inv_eps;
  // Geometric sizes; plant boxes at two consecutive kept levels of one group.
  std::vector<long long> sizes;
  std::vector<long long> prefix{0};
  const long long eps8_inv = 1 / to_double(rat_pow(eps, 8)) + 0.5;
  int first_level = -1;
  for (unsigned long l = 0; l < 48; ++l) {
    const long long d = floor_rat(rat_pow(1 + eps, l));
    sizes.push_back(d);
    prefix.push_back(prefix.back() + d);
    if (first_level < 0 && d >= eps8_inv) first_level = static_cast<int>(l);
  }
  // Choose an alpha that keeps first_level and first_level+1 in one group.
  long long alpha = ((first_level % q) - inv_eps + q) % q;
  auto kept = [&](long long l) { return ((l - alpha) % q + q) % q >= inv_eps; };
  while (!(kept(first_level) && kept(first_level + 1))) {
    alpha = (alpha + 1) % q;
  }
  const int l1 = first_level, l2 = first_level + 1;
  const long long U = prefix[l2 + 1] + sizes[l2] + 4;
  const int m = std::max(3, spec.m);
  std::vector<long long> caps(m, U);
  std::vector<Task> tasks;
  PlantedStructure planted;

  const Box b1{0, m, sizes[l1], prefix[l1]};
  const Box b2{0, std::max(1, m / 2), sizes[l2], prefix[l2]};
  planted.boxes.push_back(b1);
  planted.boxes.push_back(b2);
  planted.golden_sizes = {sizes[l1], sizes[l2]};
  planted.golden_heights = {prefix[l1], prefix[l2], 0};

  std::map<std::string, std::vector<long long>> load;
  load["b1"] = std::vector<long long>(m, 0);
  load["b2"] = std::vector<long long>(m, 0);
  const int n_small = std::max(2, spec.n - 1);
  for (int i = 0; i < n_small; ++i) {
    const bool into_b1 = rng.next_below(2) == 0;
    const Box& box = into_b1 ? b1 : b2;
    auto& ld = load[into_b1 ? "b1" : "b2"];
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = box.s + static_cast<int>(rng.next_below(static_cast<uint64_t>(box.t - box.s)));
    t.t = t.s + 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(box.t - t.s)));
    t.d = 1;
    t.w = rng.next_int(1, 10);
    long long h = 0;
    for (int e = t.s; e < t.t; ++e) h = std::max(h, ld[e]);
    if (Rat(static_cast<long>(t.d)) > rat_pow(eps, 8) * Rat(static_cast<long>(box.d)) ||
        h + t.d > floor_rat((1 - 2 * eps) * Rat(static_cast<long>(box.d)))) {
      tasks.push_back(std::move(t));
      continue;
    }
    for (int e = t.s; e < t.t; ++e) ld[e] = h + t.d;
    planted.placement.place(t.id, *box.h + h);
    tasks.push_back(std::move(t));
  }
  // One large task above the stack.
  {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = 0;
    t.t = m;
    const long long top = prefix[l2] + sizes[l2];
    t.d = U - top;
    t.w = rng.next_int(10, 30);
    if (Rat(static_cast<long>(t.d)) > spec.delta * Rat(static_cast<long>(U))) {
      planted.placement.place(t.id, top);
      planted.large_ids.push_back(t.id);
      tasks.push_back(std::move(t));
    }
  }
  return finish_planted(std::move(caps), std::move(tasks), std::move(planted));
}

Generated gen_planted_jammed(const GenSpec& spec) {
  Rng rng(spec.seed);
  const int m = std::max(2, spec.m);
  const long long U = std::max<long long>(6, spec.U);
  std::vector<long long> caps(m, U);
  std::vector<Task> tasks;
  PlantedStructure planted;

  // Two segments (or one if m == 2): per segment a large ceiling task above
  // baseline 0 and jammed smalls under it.
  const int cut = m >= 4 ? m / 2 : m;
  std::vector<std::pair<int, int>> segs;
  segs.emplace_back(0, cut);
  if (cut < m) segs.emplace_back(cut, m);
  for (const auto& [a, b] : segs) {
    planted.segments.emplace_back(a, b);
    planted.baselines.push_back(0);
    // Ceiling: a large task across the whole segment.
    const long long gap = 2 + static_cast<long long>(rng.next_below(static_cast<uint64_t>(U / 2)));
    Task big;
    big.id = task_name(static_cast<int>(tasks.size()));
    big.s = a;
    big.t = b;
    big.d = U - gap;
    big.w = rng.next_int(8, 20);
    if (Rat(static_cast<long>(big.d)) > spec.delta * Rat(static_cast<long>(U))) {
      planted.placement.place(big.id, gap);
      planted.large_ids.push_back(big.id);
      tasks.push_back(big);
      // Jammed smalls: d > delta' * gap, one per column.
      for (int e = a; e < b; ++e) {
        if (rng.next_below(3) == 0) continue;
        Task small;
        small.id = task_name(static_cast<int>(tasks.size()));
        small.s = e;
        small.t = e + 1;
        small.d = floor_rat(spec.delta_prime * Rat(static_cast<long>(gap))) + 1;
        if (small.d > gap || Rat(static_cast<long>(small.d)) > spec.delta * Rat(static_cast<long>(U))) continue;
        small.w = rng.next_int(1, 10);
        planted.placement.place(small.id, 0);
        tasks.push_back(small);
      }
    } else {
      tasks.push_back(big);
    }
  }
  if (tasks.empty()) return gen_uniform_random(spec);
  return finish_planted(std::move(caps), std::move(tasks), std::move(planted));
}

Generated gen_planted_stair(const GenSpec& spec) {
  Rng rng(spec.seed);
  const int m = std::max(3, spec.m);
  const long long uL = std::max<long long>(3, spec.U / 2);
  const long long uM = std::max<long long>(uL + 3, spec.U);
  std::vector<long long> caps(m, uM);
  caps[0] = uL;
  std::vector<Task> tasks;
  PlantedStructure planted;

  StairBlock sb;
  sb.e_L = 0;
  sb.e_M = 1;
  sb.e_R = m - 1;
  const long long f_tail = uL / 2;
  if (m > 2) sb.f_steps.emplace_back(2, f_tail);

  // One fixed large task poking above the f (below u_{e_L}).
  if (m > 2) {
    Task fixed;
    fixed.id = task_name(0);
    fixed.s = 2;
    fixed.t = m;
    fixed.d = uL - f_tail;
    fixed.w = rng.next_int(5, 12);
    if (Rat(static_cast<long>(fixed.d)) > spec.delta * Rat(static_cast<long>(uM))) {
      tasks.push_back(fixed);
      sb.fixed.emplace_back(fixed.id, f_tail);
      planted.placement.place(fixed.id, f_tail);
      planted.large_ids.push_back(fixed.id);
    }
  }
  // Small tasks through e_M above u_{e_L}.
  long long h = uL;
  const int n_small = std::max(2, spec.n - 3);
  for (int i = 0; i < n_small && h < uM; ++i) {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = 1;
    t.t = 2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m - 1)));
    t.d = 1;
    t.w = rng.next_int(1, 10);
    if (Rat(static_cast<long>(t.d)) > spec.delta * Rat(static_cast<long>(uM))) {
      tasks.push_back(t);
      continue;
    }
    planted.placement.place(t.id, h);
    h += t.d;
    tasks.push_back(t);
  }
  // A large candidate inside the staircase area (heights below d).
  {
    Task t;
    t.id = task_name(static_cast<int>(tasks.size()));
    t.s = std::min(2, m - 1);
    t.t = m;
    t.d = f_tail + 2 + static_cast<long long>(rng.next_below(2));
    t.w = rng.next_int(6, 15);
    const long long ht = f_tail;
    bool clash = false;
    for (const auto& [id, ph] : planted.placement.heights) {
      const Task& other = tasks[std::stoi(id.substr(1))];
      if (t.s < other.t && other.s < t.t && ht < ph + other.d && ph < ht + t.d) clash = true;
    }
    if (!clash && Rat(static_cast<long>(t.d)) > spec.delta * Rat(static_cast<long>(uM)) && ht < t.d &&
        ht + t.d <= uM) {
      planted.placement.place(t.id, ht);
      planted.large_ids.push_back(t.id);
      tasks.push_back(t);
    }
  }
  planted.blocks.push_back(sb);
  return finish_planted(std::move(caps), std::move(tasks), std::move(planted));
}

}  // namespace

GenKind gen_kind_from_string(const std::string& s) {
  if (s == "uniform-random") return GenKind::UniformRandom;
  if (s == "planted-boxable") return GenKind::PlantedBoxable;
  if (s == "planted-pile") return GenKind::PlantedPile;
  if (s == "planted-laminar") return GenKind::PlantedLaminar;
  if (s == "planted-jammed") return GenKind::PlantedJammed;
  if (s == "planted-stair") return GenKind::PlantedStair;
  throw std::invalid_argument("unknown generator kind " + s);
}

std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::UniformRandom: return "uniform-random";
    case GenKind::PlantedBoxable: return "planted-boxable";
    case GenKind::PlantedPile: return "planted-pile";
    case GenKind::PlantedLaminar: return "planted-laminar";
    case GenKind::PlantedJammed: return "planted-jammed";
    case GenKind::PlantedStair: return "planted-stair";
  }
  throw std::logic_error("bad kind");
}

Generated generate_instance(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::UniformRandom: return gen_uniform_random(spec);
    case GenKind::PlantedBoxable: return gen_planted_boxable(spec);
    case GenKind::PlantedPile: return gen_planted_pile(spec);
    case GenKind::PlantedLaminar: return gen_planted_laminar(spec);
    case GenKind::PlantedJammed: return gen_planted_jammed(spec);
    case GenKind::PlantedStair: return gen_planted_stair(spec);
  }
  throw std::logic_error("bad kind");
}

}  // namespace sap
