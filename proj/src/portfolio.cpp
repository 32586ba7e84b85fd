#include "sap/portfolio.hpp"

#include <chrono>
#include <sstream>

#include "sap/boxes.hpp"
#include "sap/jammed.hpp"
#include "sap/laminar.hpp"
#include "sap/pile.hpp"
#include "sap/qboxes.hpp"
#include "sap/stair.hpp"

namespace sap {

namespace {

SolveResult run_algo(const SapInstance& instance, const std::string& algo, const PortfolioConfig& config,
                     const std::optional<PlantedStructure>& planted) {
  if (algo == "boxable") {
    ConstantBoxableParams params;
    params.beta = config.beta;
    params.epsilon = config.epsilon;
    params.state_budget = config.state_budget;
    params.seed = config.solver_seed;
    if (config.use_planted_hints && planted) {
      params.height_candidates = planted->golden_heights;
      params.size_candidates = planted->golden_sizes;
      for (const Box& b : planted->boxes) {
        if (b.h) params.height_candidates.push_back(*b.h);
        params.size_candidates.push_back(b.d);
      }
    }
    return solve_constant_boxable(instance, params);
  }
  if (algo == "qboxable") {
    QBoxableParams params;
    params.beta = config.beta;
    params.epsilon = config.epsilon;
    params.state_budget = config.state_budget;
    params.seed = config.solver_seed;
    if (config.use_planted_hints && planted) {
      params.height_candidates = planted->golden_heights;
      params.size_candidates = planted->golden_sizes;
      for (const Box& b : planted->boxes) {
        if (b.h) params.height_candidates.push_back(*b.h);
        params.size_candidates.push_back(b.d);
      }
    }
    return solve_boxable_recursive(instance, params);
  }
  if (algo == "stair") {
    StairSolutionParams params;
    params.stair.delta = config.delta;
    params.stair.epsilon = config.epsilon;
    params.stair.alpha = config.alpha;
    params.stair.seed = config.solver_seed;
    params.stair.state_budget = config.state_budget;
    params.gamma = config.gamma;
    std::vector<StairBlock> blocks;
    if (planted) blocks = planted->blocks;
    return solve_stair_solution(instance, blocks, params);
  }
  if (algo == "jammed") {
    JammedParams params;
    params.delta = config.delta;
    params.delta_prime = config.delta_prime;
    params.epsilon = config.epsilon;
    params.state_budget = config.state_budget;
    return solve_jammed(instance, params);
  }
  if (algo == "pile") {
    PileParams params;
    params.beta = config.beta;
    params.epsilon = config.epsilon;
    params.delta = config.delta;
    params.seed = config.solver_seed;
    params.state_budget = config.state_budget;
    return solve_pile(instance, params);
  }
  if (algo == "laminar") {
    LaminarParams params;
    params.epsilon = config.epsilon <= Rat(1, 3) ? Rat(1, 3) : config.epsilon;
    params.delta = config.delta;
    params.seed = config.solver_seed;
    params.state_budget = config.state_budget;
    return solve_laminar_general(instance, params);
  }
  throw std::invalid_argument("unknown algorithm " + algo);
}

}  // namespace

PortfolioOutcome run_portfolio(const SapInstance& instance, const PortfolioConfig& config,
                               const std::optional<PlantedStructure>& planted) {
  PortfolioOutcome outcome;
  outcome.best.profit = -1;
  for (const auto& algo : config.algos) {
    try {
      SolveResult r = run_algo(instance, algo, config, planted);
      if (auto bad = check_feasible(instance, r.placement)) {
        outcome.notes.push_back(algo + ": infeasible output rejected (" + bad->describe() + ")");
        continue;
      }
      outcome.per_algo.emplace_back(algo, r.profit);
      if (r.refused) outcome.notes.push_back(algo + ": " + r.note);
      if (r.profit > outcome.best.profit) {
        outcome.best = r;
        outcome.best_algo = algo;
      }
    } catch (const std::invalid_argument& e) {
      outcome.per_algo.emplace_back(algo, -1);
      outcome.notes.push_back(algo + ": refused (" + e.what() + ")");
    }
  }
  if (outcome.best.profit < 0) {
    outcome.best = SolveResult{};
    outcome.best_algo = "none";
    outcome.best.note = "all solvers refused";
  }
  return outcome;
}

std::vector<RatioRow> compare_with_oracle(const std::vector<std::pair<std::string, Generated>>& instances,
                                          const BenchConfig& config) {
  std::vector<RatioRow> rows;
  for (const auto& [id, gen] : instances) {
    const auto start = std::chrono::steady_clock::now();
    PortfolioOutcome outcome = run_portfolio(gen.instance, config.portfolio, gen.planted);
    const auto stop = std::chrono::steady_clock::now();
    RatioRow row;
    row.instance_id = id;
    row.algo = outcome.best_algo;
    row.profit = outcome.best.profit;
    row.seed = config.portfolio.solver_seed;
    row.ms = config.zero_timing
                 ? 0
                 : std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
    row.refused = outcome.best.refused;
    if (config.run_oracle) {
      try {
        row.opt = exact_opt(gen.instance, config.oracle_limits).profit;
      } catch (const OracleRefused&) {
        row.opt = std::nullopt;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string ratio_field(const RatioRow& row) {
  if (!row.opt) return "";
  if (row.profit <= 0) return *row.opt == 0 ? "1" : "inf";
  std::ostringstream os;
  os << static_cast<double>(*row.opt) / static_cast<double>(row.profit);
  return os.str();
}

}  // namespace

std::string rows_to_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  os << "instance_id,algo,profit,opt,ratio,ms,seed\n";
  for (const auto& row : rows) {
    os << row.instance_id << "," << row.algo << "," << row.profit << ","
       << (row.opt ? std::to_string(*row.opt) : "") << "," << ratio_field(row) << "," << row.ms << "," << row.seed
       << "\n";
  }
  return os.str();
}

std::string rows_to_json(const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    os << (i ? "," : "") << "{\"instance_id\":\"" << row.instance_id << "\",\"algo\":\"" << row.algo
       << "\",\"profit\":" << row.profit << ",\"opt\":" << (row.opt ? std::to_string(*row.opt) : "null")
       << ",\"ratio\":" << (ratio_field(row).empty() ? "null" : ratio_field(row)) << ",\"ms\":" << row.ms
       << ",\"seed\":" << row.seed << "}";
  }
  os << "]";
  return os.str();
}

}  // namespace sap
