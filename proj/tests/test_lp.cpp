#include "doctest.h"
#include "sap/lp.hpp"
#include "sap/rng.hpp"

using namespace sap;

TEST_CASE("max x subject to x <= 1") {
  LpModel lp;
  lp.direction = Direction::Maximize;
  int x = lp.add_variable("x", 1.0);
  lp.add_constraint("c", Sense::LE, 1.0, {{x, 1.0}});
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[x] == doctest::Approx(1.0));
}

TEST_CASE("min z with z >= 0, x+z >= 1, x <= 0") {
  LpModel lp;
  lp.direction = Direction::Minimize;
  int x = lp.add_variable("x", 0.0);
  int z = lp.add_variable("z", 1.0);
  lp.add_constraint("c1", Sense::GE, 1.0, {{x, 1.0}, {z, 1.0}});
  lp.add_constraint("c2", Sense::LE, 0.0, {{x, 1.0}});
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LpModel bad;
  int x = bad.add_variable("x", 1.0);
  bad.add_constraint("c1", Sense::GE, 2.0, {{x, 1.0}});
  bad.add_constraint("c2", Sense::LE, 1.0, {{x, 1.0}});
  CHECK(lp_solve(bad).status == LpStatus::Infeasible);

  LpModel unb;
  unb.direction = Direction::Maximize;
  int y = unb.add_variable("y", 1.0);
  unb.add_constraint("c", Sense::GE, 0.0, {{y, 1.0}});
  CHECK(lp_solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("rational mode: exact duals and weak duality") {
  RationalLpModel lp;
  lp.direction = Direction::Minimize;
  int x = lp.add_variable("x", Rat(3));
  int y = lp.add_variable("y", Rat(5));
  lp.add_constraint("c1", Sense::GE, Rat(4), {{x, Rat(1)}, {y, Rat(2)}});
  lp.add_constraint("c2", Sense::GE, Rat(3), {{x, Rat(1)}, {y, Rat(1)}});
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // Exact strong duality: objective equals y*b.
  Rat dual_obj = sol.dual[0] * Rat(4) + sol.dual[1] * Rat(3);
  CHECK(sol.objective == dual_obj);
  // Reduced costs nonnegative for a min problem.
  CHECK(sol.reduced_cost(lp, x) >= 0);
  CHECK(sol.reduced_cost(lp, y) >= 0);
  // Complementary slackness: positive primal means zero reduced cost.
  for (int v : {x, y}) {
    if (sol.primal[v] > 0) CHECK(sol.reduced_cost(lp, v) == 0);
  }
}

TEST_CASE("add_column keeps the objective when the column is useless") {
  LpModel lp;
  lp.direction = Direction::Maximize;
  int x = lp.add_variable("x", 2.0);
  int c = lp.add_constraint("cap", Sense::LE, 3.0, {{x, 1.0}});
  auto before = lp_solve(lp);
  REQUIRE(before.status == LpStatus::Optimal);

  lp.add_column("zero", 0.0, {});
  auto with_zero = lp_solve(lp);
  CHECK(with_zero.objective == doctest::Approx(before.objective));

  lp.add_column("dup", 2.0, {{c, 1.0}});  // duplicates x
  auto with_dup = lp_solve(lp);
  CHECK(with_dup.objective == doctest::Approx(before.objective));

  CHECK_THROWS_AS(lp.add_column("dup", 1.0, {}), std::invalid_argument);
}

TEST_CASE("add_column with a profitable column raises a maximization objective") {
  LpModel lp;
  lp.direction = Direction::Maximize;
  int x = lp.add_variable("x", 1.0);
  int c = lp.add_constraint("cap", Sense::LE, 1.0, {{x, 1.0}});
  auto before = lp_solve(lp);
  lp.add_column("better", 5.0, {{c, 1.0}});
  auto after = lp_solve(lp);
  CHECK(after.objective >= before.objective);
  CHECK(after.objective == doctest::Approx(5.0));
}

TEST_CASE("permuted constraint order gives the same objective") {
  Rng rng(7);
  for (int round = 0; round < 30; ++round) {
    const int n = 3, m = 4;
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    for (int j = 0; j < n; ++j) c[j] = static_cast<double>(rng.next_int(1, 5));
    for (int i = 0; i < m; ++i) {
      b[i] = static_cast<double>(rng.next_int(2, 9));
      for (int j = 0; j < n; ++j) a[i][j] = static_cast<double>(rng.next_int(0, 3));
    }
    LpModel lp1, lp2;
    lp1.direction = lp2.direction = Direction::Maximize;
    for (int j = 0; j < n; ++j) {
      int v1 = lp1.add_variable("x" + std::to_string(j), c[j]);
      int v2 = lp2.add_variable("x" + std::to_string(j), c[j]);
      // Box constraints keep the random program bounded.
      lp1.add_constraint("ub" + std::to_string(j), Sense::LE, 10.0, {{v1, 1.0}});
      lp2.add_constraint("ub" + std::to_string(j), Sense::LE, 10.0, {{v2, 1.0}});
    }
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j) coeffs.emplace_back(j, a[i][j]);
      lp1.add_constraint("c" + std::to_string(i), Sense::LE, b[i], coeffs);
    }
    for (int i = m - 1; i >= 0; --i) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j) coeffs.emplace_back(j, a[i][j]);
      lp2.add_constraint("c" + std::to_string(i), Sense::LE, b[i], coeffs);
    }
    auto s1 = lp_solve(lp1);
    auto s2 = lp_solve(lp2);
    REQUIRE(s1.status == LpStatus::Optimal);
    REQUIRE(s2.status == LpStatus::Optimal);
    CHECK(s1.objective == doctest::Approx(s2.objective));
  }
}

TEST_CASE("equality constraints and negative rhs normalize correctly") {
  RationalLpModel lp;
  lp.direction = Direction::Minimize;
  int x = lp.add_variable("x", Rat(1));
  int y = lp.add_variable("y", Rat(1));
  lp.add_constraint("eq", Sense::EQ, Rat(-2), {{x, Rat(-1)}, {y, Rat(-1)}});
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == Rat(2));
}

TEST_CASE("model dump lists variables and constraints") {
  LpModel lp;
  int x = lp.add_variable("x", 1.0);
  lp.add_constraint("c", Sense::LE, 2.0, {{x, 1.0}});
  const std::string dump = lp.dump();
  CHECK(dump.find("x") != std::string::npos);
  CHECK(dump.find("c:") != std::string::npos);
  CHECK(dump.find("<= 2") != std::string::npos);
}
