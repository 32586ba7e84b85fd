#include "doctest.h"
#include "sap/generator.hpp"
#include "sap/io.hpp"
#include "sap/pile.hpp"
#include "sap/portfolio.hpp"

using namespace sap;

TEST_CASE("generators are deterministic and planted placements are feasible") {
  for (GenKind kind : {GenKind::UniformRandom, GenKind::PlantedBoxable, GenKind::PlantedPile,
                       GenKind::PlantedLaminar, GenKind::PlantedJammed, GenKind::PlantedStair}) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      GenSpec spec;
      spec.kind = kind;
      spec.seed = seed;
      spec.n = 8;
      spec.m = 4;
      spec.U = 10;
      Generated a = generate_instance(spec);
      Generated b = generate_instance(spec);
      CHECK(instance_to_json(a.instance) == instance_to_json(b.instance));
      if (a.planted) {
        CHECK(!check_feasible(a.instance, a.planted->placement));
        CHECK(a.planted->profit == profit(a.instance, a.planted->placement));
        CHECK(a.planted->large_profit + a.planted->small_profit == a.planted->profit);
        CHECK(placement_to_json(a.planted->placement) == placement_to_json(b.planted->placement));
      }
    }
  }
}

TEST_CASE("n=0 uniform-random gives an empty task list") {
  GenSpec spec;
  spec.kind = GenKind::UniformRandom;
  spec.n = 0;
  Generated g = generate_instance(spec);
  CHECK(g.instance.num_tasks() == 0);
}

TEST_CASE("planted-pile emits a valid pile geometry") {
  GenSpec spec;
  spec.kind = GenKind::PlantedPile;
  spec.beta = 2;
  spec.seed = 3;
  spec.epsilon = Rat(1, 4);
  Generated g = generate_instance(spec);
  REQUIRE(g.planted.has_value());
  PileSpec pile{g.planted->boxes};
  CHECK(valid_pile(g.instance, pile, spec.beta));
}

TEST_CASE("planted-stair emits blocks the planted placement fits") {
  GenSpec spec;
  spec.kind = GenKind::PlantedStair;
  spec.seed = 13;
  spec.m = 4;
  spec.U = 8;
  spec.delta = Rat(1, 2);
  Generated g = generate_instance(spec);
  REQUIRE(g.planted.has_value());
  REQUIRE(!g.planted->blocks.empty());
  // Non-fixed planted tasks fit the block.
  const StairBlock& sb = g.planted->blocks[0];
  Placement inside;
  for (const auto& [id, h] : g.planted->placement.heights) {
    bool fixed = false;
    for (const auto& [fid, fh] : sb.fixed) {
      if (fid == id) fixed = true;
    }
    if (!fixed) inside.place(id, h);
  }
  CHECK(fits_into_stair_block(g.instance, sb, inside, spec.delta));
}

TEST_CASE("portfolio includes any single algorithm and stays feasible") {
  GenSpec spec;
  spec.kind = GenKind::UniformRandom;
  spec.n = 5;
  spec.m = 3;
  spec.U = 6;
  spec.seed = 7;
  Generated g = generate_instance(spec);
  PortfolioConfig config;
  config.state_budget = 30000;
  config.delta = Rat(1, 2);
  PortfolioOutcome all = run_portfolio(g.instance, config, g.planted);
  CHECK(!check_feasible(g.instance, all.best.placement));
  for (const auto& [algo, value] : all.per_algo) {
    CHECK(all.best.profit >= value);
  }
  PortfolioConfig only;
  only.algos = {"jammed"};
  only.delta = Rat(1, 2);
  PortfolioOutcome one = run_portfolio(g.instance, only, g.planted);
  CHECK(all.best.profit >= one.best.profit);
}

TEST_CASE("bench rows are deterministic with zero timing") {
  std::vector<std::pair<std::string, Generated>> instances;
  for (int i = 0; i < 3; ++i) {
    GenSpec spec;
    spec.kind = GenKind::UniformRandom;
    spec.n = 4;
    spec.m = 3;
    spec.U = 5;
    spec.seed = 100 + static_cast<uint64_t>(i);
    instances.emplace_back("i" + std::to_string(i), generate_instance(spec));
  }
  BenchConfig config;
  config.zero_timing = true;
  config.portfolio.state_budget = 20000;
  config.portfolio.delta = Rat(1, 2);
  auto rows1 = compare_with_oracle(instances, config);
  auto rows2 = compare_with_oracle(instances, config);
  CHECK(rows_to_csv(rows1) == rows_to_csv(rows2));
  CHECK(rows_to_csv(rows1).substr(0, 42) == "instance_id,algo,profit,opt,ratio,ms,seed\n");
  // ratio = opt/profit >= 1 whenever the oracle ran and profit > 0.
  for (const auto& row : rows1) {
    if (row.opt && row.profit > 0) CHECK(*row.opt >= row.profit);
  }
}

TEST_CASE("empty batch gives a header-only CSV") {
  BenchConfig config;
  auto rows = compare_with_oracle({}, config);
  CHECK(rows_to_csv(rows) == "instance_id,algo,profit,opt,ratio,ms,seed\n");
}
