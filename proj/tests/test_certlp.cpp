// The certificate checks pin exact rational values; the second, independently
// keyed transcription of the three structural LPs lives at the bottom and
// must agree with the primary one coefficient by coefficient.
#include <map>

#include "doctest.h"
#include "sap/certlp.hpp"

using namespace sap;

namespace {

const Rat kAlpha = Rat(833, 100);

Rat dec(const std::string& s) {
  // Exact decimal parse ("0.500804" -> 500804/1000000).
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rat r(s);
    r.canonicalize();
    return r;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  while (digits.size() > 1 && digits.front() == '0') digits.erase(digits.begin());
  Rat r(digits + "/1" + std::string(s.size() - dot - 1, '0'));
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("uniform variant has 15 constraints besides nonnegativity") {
  auto lp = build_structural_lp(CertVariant::Uniform, kAlpha);
  CHECK(lp.cons.size() == 15);
  CHECK(lp.vars.size() == 14);  // 13 x variables + z
}

TEST_CASE("stair variants carry the window constraint in the right direction") {
  auto high = build_structural_lp(CertVariant::StairHigh, kAlpha);
  REQUIRE(high.con_index.count("c7_window"));
  CHECK(high.cons[high.con_index.at("c7_window")].sense == Sense::GE);
  CHECK(high.cons[high.con_index.at("c7_window")].rhs == 1 / kAlpha);

  auto low = build_structural_lp(CertVariant::StairLow, kAlpha);
  REQUIRE(low.con_index.count("c6_window"));
  CHECK(low.cons[low.con_index.at("c6_window")].sense == Sense::LE);
  CHECK(low.cons[low.con_index.at("c6_window")].rhs == 1 / kAlpha);
}

TEST_CASE("uniform certificate: published points verify exactly, optimum 32/63") {
  auto report = verify_certificates(CertVariant::Uniform, kAlpha);
  CHECK(report.primal_published.feasible);
  CHECK(report.primal_published.objective == Rat(32, 63));
  CHECK(report.primal_published.repairs.empty());
  CHECK(report.primal_repaired.repairs.empty());
  CHECK(report.dual_published.feasible);
  CHECK(report.dual_published.objective == Rat(32, 63));
  CHECK(report.dual_published.printed_rows_ok);
  REQUIRE(report.solver_status == LpStatus::Optimal);
  CHECK(report.solver_optimum == Rat(32, 63));
  CHECK(report.sandwich_ok);
}

TEST_CASE("stair_high certificate: published typos quantified, repaired point verifies") {
  auto report = verify_certificates(CertVariant::StairHigh, kAlpha);
  // Published point: the coordinates sum to 101/100 and miss the window row
  // by exactly 1/52062500.
  CHECK(!report.primal_published.feasible);
  bool saw_sum = false, saw_window = false;
  for (const auto& v : report.primal_published.violations) {
    if (v.find("c0_total") != std::string::npos && v.find("101/100") != std::string::npos) saw_sum = true;
    if (v.find("c7_window") != std::string::npos && v.find("-1/52062500") != std::string::npos) saw_window = true;
  }
  CHECK(saw_sum);
  CHECK(saw_window);
  // Published dual point: infeasible (x_SZ row) and worth 933/1666 ~ 0.56,
  // which would contradict weak duality if it were feasible.
  CHECK(!report.dual_published.feasible);
  CHECK(report.dual_published.objective == Rat(933, 1666));

  // Repaired points: feasible, objective inside (0.500804, 0.500805),
  // dual value above 0.5008, both sandwiching the exact optimum.
  CHECK(report.primal_repaired.feasible);
  CHECK(report.primal_repaired.objective > dec("0.500804"));
  CHECK(report.primal_repaired.objective < dec("0.500805"));
  CHECK(report.dual_repaired.feasible);
  CHECK(report.dual_repaired.objective > dec("0.5008"));
  REQUIRE(report.solver_status == LpStatus::Optimal);
  CHECK(report.solver_optimum > dec("0.500804"));
  CHECK(report.solver_optimum < dec("0.500805"));
  CHECK(report.sandwich_ok);
  // The repaired dual is exactly optimal for this LP.
  CHECK(report.solver_optimum == report.dual_repaired.objective);
  CHECK(report.solver_optimum == Rat(778439, 1554378));
}

TEST_CASE("stair_low certificate: repaired objective exactly 313/625") {
  auto report = verify_certificates(CertVariant::StairLow, kAlpha);
  CHECK(!report.primal_published.feasible);  // coordinates sum to 97/100
  bool saw_sum = false;
  for (const auto& v : report.primal_published.violations) {
    if (v.find("c0_total") != std::string::npos && v.find("97/100") != std::string::npos) saw_sum = true;
  }
  CHECK(saw_sum);
  CHECK(report.primal_published.objective == Rat(1277, 2500));  // 0.5108, off the claim

  CHECK(report.primal_repaired.feasible);
  CHECK(report.primal_repaired.objective == Rat(313, 625));
  // Published dual (gamma_6 = 100) is feasible but its value misses the
  // claim by an order of magnitude; the repaired 4/25 lands above 1/1.997.
  CHECK(report.dual_published.feasible);
  CHECK(report.dual_published.objective < 0);
  CHECK(report.dual_repaired.feasible);
  CHECK(report.dual_repaired.objective == Rat(10429, 20825));
  CHECK(report.dual_repaired.objective > Rat(1000, 1997));
  REQUIRE(report.solver_status == LpStatus::Optimal);
  CHECK(report.solver_optimum == Rat(10429, 20825));
  CHECK(report.sandwich_ok);
}

TEST_CASE("alpha sensitivity: certificates are checked, not assumed") {
  // At alpha = 10 the published stair_low dual point no longer matches the
  // repaired optimum automatically; the report must stay internally
  // consistent (sandwich between repaired points whenever both verify).
  auto report = verify_certificates(CertVariant::StairLow, Rat(10));
  if (report.primal_repaired.feasible && report.dual_repaired.feasible) {
    CHECK(report.dual_repaired.objective <= report.solver_optimum);
    CHECK(report.solver_optimum <= report.primal_repaired.objective);
  }
}

// ---------------------------------------------------------------------------
// Second transcription, keyed by variable name per row. "q1/4" style strings
// are parsed into exact rationals so nothing is shared with the builder's
// coefficient tables.
// ---------------------------------------------------------------------------
namespace second_transcription {

struct Row {
  Sense sense;
  std::string rhs;                                       // "0", "1", "1/alpha"
  std::vector<std::pair<std::string, std::string>> lhs;  // (variable, coefficient)
};

std::vector<Row> rows_for(CertVariant v) {
  const std::string A = "1/alpha";
  const std::string S = "1/(8(alpha+1))";
  if (v == CertVariant::Uniform) {
    return {
        {Sense::EQ, "1",
         {{"x_SBS", "1"}, {"x_SBL", "1"}, {"x_STS", "1"}, {"x_STL", "1"}, {"x_SMTS", "1"}, {"x_SMTL", "1"},
          {"x_SMBS", "1"}, {"x_SMBL", "1"}, {"x_SMSW", "1"}, {"x_SMCr", "1"}, {"x_LT", "1"}, {"x_LB", "1"},
          {"x_LM", "1"}}},
        {Sense::LE, "0",
         {{"x_SBS", "1"}, {"x_SBL", "1"}, {"x_STS", "1"}, {"x_STL", "1"}, {"x_SMTS", "1"}, {"x_SMTL", "1"},
          {"x_SMBS", "1"}, {"x_SMBL", "1"}, {"x_SMSW", "1"}, {"x_SMCr", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SBS", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SBL", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_STS", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_STL", "1"}, {"z", "-1"}}},
        {Sense::LE, "0",
         {{"x_LT", "1"}, {"x_LM", "1"}, {"x_STS", "1/2"}, {"x_STL", "1/2"}, {"x_SMTS", "1/2"}, {"x_SMTL", "1/2"},
          {"x_SMBS", "1/2"}, {"x_SMBL", "1/2"}, {"x_SMSW", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0",
         {{"x_LT", "1"}, {"x_LM", "1"}, {"x_SBS", "1/2"}, {"x_SBL", "1/2"}, {"x_SMTS", "1/2"}, {"x_SMTL", "1/2"},
          {"x_SMBS", "1/2"}, {"x_SMBL", "1/2"}, {"x_SMSW", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SMCr", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SMTL", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SMTS", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SMBL", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_LB", "1"}, {"x_LM", "1"}, {"x_SMBS", "1/2"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LT", "1"}, {"x_SMSW", "1"}, {"z", "-1"}}},
        {Sense::LE, "0", {{"x_LB", "1"}, {"x_SMSW", "1"}, {"z", "-1"}}},
    };
  }
  std::vector<Row> rows = {
      {Sense::EQ, "1",
       {{"x_SSWL", "1"}, {"x_SNCS", "1"}, {"x_SNCL", "1"}, {"x_SZ", "1"}, {"x_SCr", "1"}, {"x_SBS", "1"},
        {"x_SBL", "1"}, {"x_STS", "1"}, {"x_STL", "1"}, {"x_SSWS", "1"}, {"x_LU", "1"}, {"x_LD", "1"}}},
      {Sense::LE, "0", {{"x_LU", "1"}, {"x_LD", "1"}, {"z", "-1"}}},
      {Sense::LE, "0",
       {{"x_SCr", "1"}, {"x_SBS", "1"}, {"x_SBL", "1"}, {"x_STS", "1"}, {"x_STL", "1"}, {"x_SSWS", "1"},
        {"x_SSWL", "1"}, {"x_SNCS", "1"}, {"x_SNCL", "1"}, {"x_SZ", "1"}, {"x_LU", "1"}, {"z", "-1"}}},
      {Sense::LE, "0",
       {{"x_LD", "1"}, {"x_SCr", "1"}, {"x_STL", "1"}, {"x_SBL", "1"}, {"x_SSWL", "1"}, {"x_SNCL", "1"},
        {"z", "-1"}}},
      {Sense::LE, "0", {{"x_LD", "1"}, {"x_STS", "1"}, {"x_SBS", "1"}, {"x_SNCS", "1"}, {"z", "-1"}}},
      {Sense::LE, "0", {{"x_LD", "1/4"}, {"x_SSWS", "1"}, {"z", "-1"}}},
  };
  if (v == CertVariant::StairHigh) {
    rows.push_back({Sense::LE, "0", {{"x_LD", "1"}, {"x_SZ", S}, {"z", "-1"}}});
    rows.push_back({Sense::GE, A, {{"x_SZ", "1"}}});
  } else {
    rows.push_back({Sense::LE, A, {{"x_SZ", "1"}}});
  }
  return rows;
}

Rat coeff(const std::string& text, const Rat& alpha) {
  if (text == "1/alpha") return 1 / alpha;
  if (text == "1/(8(alpha+1))") return 1 / (8 * (alpha + 1));
  Rat r(text);
  r.canonicalize();
  return r;
}

}  // namespace second_transcription

TEST_CASE("second transcription agrees with the builder on all three systems") {
  for (CertVariant v : {CertVariant::StairHigh, CertVariant::StairLow, CertVariant::Uniform}) {
    auto lp = build_structural_lp(v, kAlpha);
    auto rows = second_transcription::rows_for(v);
    REQUIRE(lp.cons.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      INFO(to_string(v) << " row " << i);
      const auto& con = lp.cons[i];
      CHECK(con.sense == rows[i].sense);
      CHECK(con.rhs == second_transcription::coeff(rows[i].rhs, kAlpha));
      std::map<std::string, Rat> got, want;
      for (const auto& [var, c] : con.coeffs) got[lp.vars[var].name] += c;
      for (const auto& [name, c] : rows[i].lhs) want[name] += second_transcription::coeff(c, kAlpha);
      CHECK(got.size() == want.size());
      for (const auto& [name, c] : want) {
        REQUIRE(got.count(name));
        CHECK(got[name] == c);
      }
    }
  }
}
