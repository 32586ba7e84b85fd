#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sap/boxes.hpp"
#include "sap/certlp.hpp"
#include "sap/generator.hpp"
#include "sap/io.hpp"
#include "sap/jammed.hpp"
#include "sap/laminar.hpp"
#include "sap/oracle.hpp"
#include "sap/pile.hpp"
#include "sap/portfolio.hpp"
#include "sap/qboxes.hpp"
#include "sap/stair.hpp"

namespace {

sap::Rat parse_rat(const std::string& text) {
  // Accepts "p/q", integers, and decimals like "8.33".
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    sap::Rat r(text.substr(0, slash) + "/" + text.substr(slash + 1));
    r.canonicalize();
    return r;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    sap::Rat r(text);
    r.canonicalize();
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::string den = "1" + std::string(text.size() - dot - 1, '0');
  sap::Rat r(digits + "/" + den);
  r.canonicalize();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storage allocation problem solver toolkit"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  app.add_option("--seed", seed, "global seed")->capture_default_str();
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->capture_default_str();

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      std::cout << text << "\n";
    } else {
      sap::write_file(out_path, text);
    }
  };

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string kind = "uniform-random";
  sap::GenSpec spec;
  std::string planted_out, blocks_out;
  gen->add_option("--kind", kind, "uniform-random|planted-boxable|planted-pile|planted-laminar|planted-jammed|planted-stair")
      ->capture_default_str();
  gen->add_option("--n", spec.n, "task count")->capture_default_str();
  gen->add_option("--m", spec.m, "edges")->capture_default_str();
  gen->add_option("--U", spec.U, "capacity scale")->capture_default_str();
  gen->add_option("--beta", spec.beta, "boxes per edge / pile size")->capture_default_str();
  std::string gen_eps = "1/4", gen_delta = "1/4", gen_dp = "1/2";
  gen->add_option("--epsilon", gen_eps, "epsilon")->capture_default_str();
  gen->add_option("--delta", gen_delta, "large-task threshold")->capture_default_str();
  gen->add_option("--delta-prime", gen_dp, "jammedness threshold")->capture_default_str();
  gen->add_option("--planted-out", planted_out, "write the planted placement here");
  gen->add_option("--blocks-out", blocks_out, "write planted stair blocks here");

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "run one solver or the portfolio");
  std::string instance_path, algo = "portfolio", blocks_path, placement_out;
  std::string s_eps = "1/4", s_delta = "1/4", s_dp = "1/2", s_alpha = "8.33";
  int beta = 2, gamma = 3;
  long long budget = 200000;
  std::string anchors_mode = "pseudo";
  int profile_pool = 64, steps = 4;
  solve->add_option("--instance", instance_path, "instance JSON")->required();
  solve->add_option("--algo", algo, "boxable|qboxable|stair|jammed|pile|laminar|portfolio|oracle")
      ->capture_default_str();
  solve->add_option("--epsilon", s_eps, "epsilon")->capture_default_str();
  solve->add_option("--delta", s_delta, "large-task threshold")->capture_default_str();
  solve->add_option("--delta-prime", s_dp, "jammedness threshold")->capture_default_str();
  solve->add_option("--alpha", s_alpha, "stair ratio parameter")->capture_default_str();
  solve->add_option("--beta", beta, "box multiplicity")->capture_default_str();
  solve->add_option("--gamma", gamma, "stair multiplicity")->capture_default_str();
  solve->add_option("--budget", budget, "state budget")->capture_default_str();
  solve->add_option("--blocks", blocks_path, "candidate stair blocks JSON");
  solve->add_option("--anchors", anchors_mode, "full|pseudo height discretization")->capture_default_str();
  solve->add_option("--profile-pool", profile_pool, "profile pool size")->capture_default_str();
  solve->add_option("--steps", steps, "profile step budget")->capture_default_str();
  solve->add_option("--placement-out", placement_out, "write the placement JSON here");

  // --- cert ---
  auto* cert = app.add_subcommand("cert", "verify the built-in structural LP certificates");
  std::string variant = "uniform", alpha_text = "8.33";
  cert->add_option("--variant", variant, "stair_high|stair_low|uniform")->capture_default_str();
  cert->add_option("--alpha", alpha_text, "alpha (exact rational or decimal)")->capture_default_str();

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "batched solver-vs-oracle comparison");
  std::string suite = "uniform-random";
  int count = 10;
  std::string timing = "real";
  long long bench_U = 8;
  int bench_n = 6, bench_m = 4, bench_beta = 2;
  bench->add_option("--suite", suite, "generator kind for the batch")->capture_default_str();
  bench->add_option("--count", count, "instances")->capture_default_str();
  bench->add_option("--n", bench_n, "tasks per instance")->capture_default_str();
  bench->add_option("--m", bench_m, "edges")->capture_default_str();
  bench->add_option("--U", bench_U, "capacity scale")->capture_default_str();
  bench->add_option("--beta", bench_beta, "structure parameter")->capture_default_str();
  bench->add_option("--timing", timing, "real|zero (zero gives byte-identical reruns)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      spec.kind = sap::gen_kind_from_string(kind);
      spec.seed = seed;
      spec.epsilon = parse_rat(gen_eps);
      spec.delta = parse_rat(gen_delta);
      spec.delta_prime = parse_rat(gen_dp);
      sap::Generated g = sap::generate_instance(spec);
      emit(sap::instance_to_json(g.instance));
      if (!planted_out.empty() && g.planted) sap::write_file(planted_out, sap::placement_to_json(g.planted->placement));
      if (!blocks_out.empty() && g.planted) sap::write_file(blocks_out, sap::blocks_to_json(g.planted->blocks));
      return 0;
    }
    if (*solve) {
      sap::SapInstance instance = sap::instance_from_json(sap::read_file(instance_path));
      sap::SolveResult result;
      std::string used_algo = algo;
      if (algo == "oracle") {
        sap::OracleResult r = sap::exact_opt(instance);
        result.placement = r.placement;
        result.profit = r.profit;
      } else if (algo == "portfolio") {
        sap::PortfolioConfig config;
        config.solver_seed = seed;
        config.epsilon = parse_rat(s_eps);
        config.delta = parse_rat(s_delta);
        config.delta_prime = parse_rat(s_dp);
        config.alpha = parse_rat(s_alpha);
        config.beta = beta;
        config.gamma = gamma;
        config.state_budget = budget;
        config.use_planted_hints = false;
        sap::PortfolioOutcome outcome = sap::run_portfolio(instance, config, std::nullopt);
        result = outcome.best;
        used_algo = "portfolio:" + outcome.best_algo;
      } else if (algo == "boxable") {
        sap::ConstantBoxableParams params;
        params.beta = beta;
        params.epsilon = parse_rat(s_eps);
        params.state_budget = budget;
        params.seed = seed;
        result = sap::solve_constant_boxable(instance, params);
      } else if (algo == "qboxable") {
        sap::QBoxableParams params;
        params.beta = beta;
        params.epsilon = parse_rat(s_eps);
        params.state_budget = budget;
        params.seed = seed;
        params.profile_pool = profile_pool;
        params.step_budget = steps;
        result = sap::solve_boxable_recursive(instance, params);
      } else if (algo == "stair") {
        sap::StairSolutionParams params;
        params.stair.delta = parse_rat(s_delta);
        params.stair.epsilon = parse_rat(s_eps);
        params.stair.alpha = parse_rat(s_alpha);
        params.stair.seed = seed;
        params.stair.state_budget = budget;
        params.gamma = gamma;
        std::vector<sap::StairBlock> blocks;
        if (!blocks_path.empty()) blocks = sap::blocks_from_json(sap::read_file(blocks_path));
        result = sap::solve_stair_solution(instance, blocks, params);
      } else if (algo == "jammed") {
        sap::JammedParams params;
        params.delta = parse_rat(s_delta);
        params.delta_prime = parse_rat(s_dp);
        params.epsilon = parse_rat(s_eps);
        params.state_budget = budget;
        if (anchors_mode == "full") {
          sap::AnchorSet anchors = sap::anchor_heights(instance, params.delta, params.delta_prime, 3);
          params.height_set = anchors.levels.back();
        }
        result = sap::solve_jammed(instance, params);
      } else if (algo == "pile") {
        sap::PileParams params;
        params.beta = beta;
        params.epsilon = parse_rat(s_eps);
        params.delta = parse_rat(s_delta);
        params.seed = seed;
        params.state_budget = budget;
        result = sap::solve_pile(instance, params);
      } else if (algo == "laminar") {
        sap::LaminarParams params;
        params.epsilon = parse_rat(s_eps);
        params.delta = parse_rat(s_delta);
        params.seed = seed;
        params.state_budget = budget;
        result = sap::solve_laminar_general(instance, params);
      } else {
        std::cerr << "unknown algo " << algo << "\n";
        return 2;
      }
      if (!placement_out.empty()) sap::write_file(placement_out, sap::placement_to_json(result.placement));
      std::ostringstream os;
      os << "{\"algo\":\"" << used_algo << "\",\"profit\":" << result.profit
         << ",\"tasks\":" << result.placement.size() << ",\"refused\":" << (result.refused ? "true" : "false")
         << (result.note.empty() ? "" : ",\"note\":\"" + result.note + "\"") << "}";
      emit(os.str());
      return 0;
    }
    if (*cert) {
      sap::CertificateReport report =
          sap::verify_certificates(sap::cert_variant_from_string(variant), parse_rat(alpha_text));
      emit(report.to_json());
      return 0;
    }
    if (*bench) {
      std::vector<std::pair<std::string, sap::Generated>> instances;
      for (int i = 0; i < count; ++i) {
        sap::GenSpec bspec;
        bspec.kind = sap::gen_kind_from_string(suite);
        bspec.n = bench_n;
        bspec.m = bench_m;
        bspec.U = bench_U;
        bspec.beta = bench_beta;
        bspec.seed = seed + static_cast<uint64_t>(i);
        instances.emplace_back(suite + "-" + std::to_string(bspec.seed), sap::generate_instance(bspec));
      }
      sap::BenchConfig config;
      config.portfolio.solver_seed = seed;
      config.zero_timing = timing == "zero";
      auto rows = sap::compare_with_oracle(instances, config);
      emit(format == "json" ? sap::rows_to_json(rows) : sap::rows_to_csv(rows));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
