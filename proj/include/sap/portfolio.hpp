#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sap/core.hpp"
#include "sap/generator.hpp"
#include "sap/oracle.hpp"

namespace sap {

struct PortfolioConfig {
  std::vector<std::string> algos = {"boxable", "qboxable", "stair", "jammed", "pile", "laminar"};
  uint64_t solver_seed = 1;
  Rat epsilon = Rat(1, 4);
  Rat delta = Rat(1, 4);
  Rat delta_prime = Rat(1, 2);
  Rat alpha = Rat(833, 100);
  int beta = 2;
  int gamma = 3;
  long long state_budget = 200000;
  bool use_planted_hints = true;  // golden heights/blocks from the generator
};

struct PortfolioOutcome {
  SolveResult best;
  std::string best_algo;
  std::vector<std::pair<std::string, long long>> per_algo;  // (algo, profit); -1 marks refusal to run
  std::vector<std::string> notes;
};

PortfolioOutcome run_portfolio(const SapInstance& instance, const PortfolioConfig& config,
                               const std::optional<PlantedStructure>& planted);

struct RatioRow {
  std::string instance_id;
  std::string algo;
  long long profit = 0;
  std::optional<long long> opt;
  uint64_t seed = 0;
  long long ms = 0;
  bool refused = false;
};

struct BenchConfig {
  PortfolioConfig portfolio;
  OracleLimits oracle_limits;
  bool run_oracle = true;
  bool zero_timing = false;  // deterministic byte-identical reports
};

std::vector<RatioRow> compare_with_oracle(const std::vector<std::pair<std::string, Generated>>& instances,
                                          const BenchConfig& config);

// instance_id, algo, profit, opt, ratio, ms, seed
std::string rows_to_csv(const std::vector<RatioRow>& rows);
std::string rows_to_json(const std::vector<RatioRow>& rows);

}  // namespace sap
