#include "sap/certlp.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace sap {

namespace {

const std::vector<std::string> kStairVars = {"x_SSWL", "x_SNCS", "x_SNCL", "x_SZ",   "x_SCr", "x_SBS",
                                             "x_SBL",  "x_STS",  "x_STL",  "x_SSWS", "x_LU",  "x_LD"};
const std::vector<std::string> kUniformVars = {"x_SBS",  "x_SBL",  "x_STS",  "x_STL", "x_SMTS", "x_SMTL", "x_SMBS",
                                               "x_SMBL", "x_SMSW", "x_SMCr", "x_LT",  "x_LB",   "x_LM"};

using Coeffs = std::vector<std::pair<std::string, Rat>>;

void add_row(RationalLpModel& lp, const std::string& name, Sense sense, const Rat& rhs, const Coeffs& xs,
             bool with_z) {
  std::vector<std::pair<int, Rat>> c;
  for (const auto& [v, a] : xs) c.emplace_back(lp.var_index.at(v), a);
  if (with_z) c.emplace_back(lp.var_index.at("z"), Rat(-1));
  lp.add_constraint(name, sense, rhs, std::move(c));
}

Coeffs ones(const std::vector<std::string>& names) {
  Coeffs c;
  for (const auto& n : names) c.emplace_back(n, Rat(1));
  return c;
}

struct PublishedPoint {
  std::map<std::string, Rat> values;           // sparse; unset names are 0
  std::map<std::string, Rat> repaired_values;  // only the coordinates that differ
};

// Row of a published dual system, kept verbatim (duplicates and all).
struct PrintedDualRow {
  std::string label;
  std::vector<std::pair<int, Rat>> coeffs;  // (gamma index, coefficient)
  Sense sense;
  Rat rhs;
};

struct VariantData {
  std::vector<std::string> var_names;
  PublishedPoint primal;
  PublishedPoint dual;  // keys "g0", "g1", ...
  int num_gammas = 0;   // gammas 0..num_gammas
  // gamma index that multiplies constraint i. Identity except for the high
  // stair variant, whose published naming pairs g6 with the window row and
  // g7 with the stair row.
  std::vector<int> gamma_for_constraint;
  std::vector<PrintedDualRow> printed_dual_rows;
};

Rat inv_8a1(const Rat& alpha) { return 1 / (8 * (alpha + 1)); }

VariantData stair_high_data(const Rat& alpha) {
  VariantData d;
  d.var_names = kStairVars;
  d.primal.values = {{"x_SCr", Rat(1, 625)},      {"x_SBS", Rat(1, 625)},   {"x_SSWS", Rat(193, 500)},
                     {"x_SZ", Rat(7503, 62500)},  {"x_LU", Rat(389, 250000)}, {"x_LD", Rat(124799, 250000)}};
  // Repairs: the published coordinates fail the sum-to-one row by exactly
  // 1/100 and miss x_SZ >= 1/alpha by 1/52062500. Snapping x_SSWS to 47/125,
  // x_SZ to 1/alpha and absorbing the slack in x_LD restores exact
  // feasibility and lands the objective inside the published interval.
  d.primal.repaired_values = {{"x_SSWS", Rat(47, 125)},
                              {"x_SZ", 1 / alpha},
                              {"x_LD", Rat(124799, 250000) - (1 / alpha - Rat(7503, 62500))}};
  d.num_gammas = 7;
  d.gamma_for_constraint = {0, 1, 2, 3, 4, 5, 7, 6};
  d.dual.values = {{"g0", Rat(-1, 2)}, {"g1", Rat(0)}, {"g2", Rat(1, 2)}, {"g3", Rat(0)},
                   {"g4", Rat(0)},     {"g5", Rat(0)}, {"g6", Rat(1, 2)}, {"g7", Rat(1, 2)}};
  // The published g6 = 1/2 violates the x_SZ dual row; the largest feasible
  // value given g7 = 1/2 is g7/(8(alpha+1)).
  d.dual.repaired_values = {{"g6", Rat(1, 2) * inv_8a1(alpha)}};

  auto row = [&](const std::string& label, std::vector<std::pair<int, Rat>> cs, Sense s, Rat rhs) {
    d.printed_dual_rows.push_back(PrintedDualRow{label, std::move(cs), s, std::move(rhs)});
  };
  row("z-row", {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {7, 1}}, Sense::LE, Rat(1));
  row("x_LD", {{0, 1}, {1, 1}, {3, 1}, {4, 1}, {5, Rat(1, 4)}, {6, 1}}, Sense::GE, Rat(0));
  row("x_LU", {{0, 1}, {1, 1}, {2, 1}}, Sense::GE, Rat(0));
  for (int rep = 0; rep < 5; ++rep) row("g0+g2+g3", {{0, 1}, {2, 1}, {3, 1}}, Sense::GE, Rat(0));
  row("x_SSWS", {{0, 1}, {2, 1}, {5, 1}}, Sense::GE, Rat(0));
  for (int rep = 0; rep < 2; ++rep) row("g0+g2+g4", {{0, 1}, {2, 1}, {4, 1}}, Sense::GE, Rat(0));
  row("g0+g2", {{0, 1}, {2, 1}}, Sense::GE, Rat(0));
  row("x_SZ", {{0, 1}, {2, 1}, {7, inv_8a1(alpha)}, {6, Rat(-1)}}, Sense::GE, Rat(0));
  return d;
}

VariantData stair_low_data(const Rat& alpha) {
  VariantData d;
  d.var_names = kStairVars;
  d.primal.values = {{"x_SBS", Rat(1, 625)}, {"x_SBL", Rat(1, 625)},   {"x_LU", Rat(1, 625)},
                     {"x_SSWS", Rat(193, 500)}, {"x_SZ", Rat(2, 25)},  {"x_LD", Rat(312, 625)}};
  // Published coordinates sum to 97/100 and overload the x_LD/4 + x_SSWS row;
  // x_SSWS = 47/125 and x_SZ = 3/25 give exact feasibility with the published
  // objective 313/625.
  d.primal.repaired_values = {{"x_SSWS", Rat(47, 125)}, {"x_SZ", Rat(3, 25)}};
  d.num_gammas = 6;
  d.dual.values = {{"g0", Rat(-13, 25)}, {"g1", Rat(4, 25)}, {"g2", Rat(9, 25)}, {"g3", Rat(4, 25)},
                   {"g4", Rat(4, 25)},   {"g5", Rat(4, 25)}, {"g6", Rat(100)}};
  // Published g6 = 100 is feasible but its certificate value is far below the
  // claim; the intended tight value is 4/25.
  d.dual.repaired_values = {{"g6", Rat(4, 25)}};

  auto row = [&](const std::string& label, std::vector<std::pair<int, Rat>> cs, Sense s, Rat rhs) {
    d.printed_dual_rows.push_back(PrintedDualRow{label, std::move(cs), s, std::move(rhs)});
  };
  row("z-row", {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, Sense::LE, Rat(1));
  row("x_LD", {{0, 1}, {1, 1}, {3, 1}, {4, 1}, {5, Rat(1, 4)}}, Sense::GE, Rat(0));
  row("x_LU", {{0, 1}, {1, 1}, {2, 1}}, Sense::GE, Rat(0));
  for (int rep = 0; rep < 5; ++rep) row("g0+g2+g3", {{0, 1}, {2, 1}, {3, 1}}, Sense::GE, Rat(0));
  row("x_SSWS", {{0, 1}, {2, 1}, {5, 1}}, Sense::GE, Rat(0));
  for (int rep = 0; rep < 2; ++rep) row("g0+g2+g4", {{0, 1}, {2, 1}, {4, 1}}, Sense::GE, Rat(0));
  row("g0+g2", {{0, 1}, {2, 1}}, Sense::GE, Rat(0));
  row("x_SZ", {{0, 1}, {2, 1}, {6, 1}}, Sense::GE, Rat(0));
  return d;
}

VariantData uniform_data() {
  VariantData d;
  d.var_names = kUniformVars;
  d.primal.values = {{"x_SBS", Rat(2, 63)},  {"x_STS", Rat(2, 63)},  {"x_SMTS", Rat(2, 63)}, {"x_SMBS", Rat(2, 63)},
                     {"x_SBL", Rat(1, 63)},  {"x_STL", Rat(1, 63)},  {"x_SMTL", Rat(1, 63)}, {"x_SMBL", Rat(1, 63)},
                     {"x_SMCr", Rat(1, 63)}, {"x_LB", Rat(13, 63)},  {"x_LM", Rat(18, 63)},  {"x_LT", Rat(0)},
                     {"x_SMSW", Rat(19, 63)}};
  d.num_gammas = 14;
  d.dual.values = {{"g0", Rat(-32, 63)}, {"g1", Rat(29, 63)}, {"g2", Rat(2, 21)}, {"g3", Rat(1, 21)},
                   {"g4", Rat(4, 63)},   {"g5", Rat(2, 63)},  {"g6", Rat(2, 63)}, {"g7", Rat(0)},
                   {"g8", Rat(1, 21)},   {"g9", Rat(2, 63)},  {"g10", Rat(4, 63)}, {"g11", Rat(2, 63)},
                   {"g12", Rat(4, 63)},  {"g13", Rat(0)},     {"g14", Rat(2, 63)}};

  auto row = [&](const std::string& label, std::vector<std::pair<int, Rat>> cs, Sense s, Rat rhs) {
    d.printed_dual_rows.push_back(PrintedDualRow{label, std::move(cs), s, std::move(rhs)});
  };
  {
    std::vector<std::pair<int, Rat>> zrow = {{1, 1}, {2, 1}};
    for (int k = 1; k <= 14; ++k) zrow.emplace_back(k, Rat(1));
    row("z-row", std::move(zrow), Sense::GE, Rat(1));
  }
  const Rat h(1, 2);
  row("x_SBS", {{0, 1}, {1, 1}, {2, h}, {7, h}}, Sense::GE, Rat(0));
  row("x_SBL", {{0, 1}, {1, 1}, {3, 1}, {7, h}}, Sense::GE, Rat(0));
  row("x_STS", {{0, 1}, {1, 1}, {4, h}, {6, h}}, Sense::GE, Rat(0));
  row("x_STL", {{0, 1}, {1, 1}, {5, 1}, {6, h}}, Sense::GE, Rat(0));
  row("x_LT", {{0, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}, {10, 1}, {11, 1}, {12, 1}, {13, 1}},
      Sense::GE, Rat(0));
  row("x_LB", {{0, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {8, 1}, {9, 1}, {10, 1}, {11, 1}, {12, 1}, {14, 1}}, Sense::GE,
      Rat(0));
  row("x_LM", {{0, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}, {10, 1}, {11, 1}, {12, 1}},
      Sense::GE, Rat(0));
  row("x_SMTS", {{0, 1}, {1, 1}, {6, h}, {7, h}, {10, h}}, Sense::GE, Rat(0));
  row("x_SMTL", {{0, 1}, {1, 1}, {6, h}, {7, h}, {9, 1}}, Sense::GE, Rat(0));
  row("x_SMBS", {{0, 1}, {1, 1}, {6, h}, {7, h}, {12, h}}, Sense::GE, Rat(0));
  row("x_SMBL", {{0, 1}, {1, 1}, {6, h}, {7, h}, {11, 1}}, Sense::GE, Rat(0));
  row("x_SMSW", {{0, 1}, {1, 1}, {6, h}, {7, h}, {13, 1}, {14, 1}}, Sense::GE, Rat(0));
  row("x_SMCr", {{0, 1}, {1, 1}, {8, 1}}, Sense::GE, Rat(0));
  return d;
}

VariantData variant_data(CertVariant v, const Rat& alpha) {
  VariantData d;
  switch (v) {
    case CertVariant::StairHigh: d = stair_high_data(alpha); break;
    case CertVariant::StairLow: d = stair_low_data(alpha); break;
    case CertVariant::Uniform: d = uniform_data(); break;
  }
  // Table literals may carry reducible fractions; mpq arithmetic requires
  // canonical values.
  for (auto* pt : {&d.primal, &d.dual}) {
    for (auto& [k, v2] : pt->values) v2.canonicalize();
    for (auto& [k, v2] : pt->repaired_values) v2.canonicalize();
  }
  for (auto& row : d.printed_dual_rows) {
    for (auto& [k, c] : row.coeffs) c.canonicalize();
    row.rhs.canonicalize();
  }
  return d;
}

std::vector<Rat> point_vector(const std::vector<std::string>& names, const std::map<std::string, Rat>& sparse,
                              const std::map<std::string, Rat>& overrides) {
  std::vector<Rat> x(names.size(), Rat(0));
  for (size_t i = 0; i < names.size(); ++i) {
    auto it = overrides.find(names[i]);
    if (it != overrides.end()) {
      x[i] = it->second;
      continue;
    }
    auto jt = sparse.find(names[i]);
    if (jt != sparse.end()) x[i] = jt->second;
  }
  return x;
}

// gamma ("g0".."gN") -> dual vector y in the solver convention for the min
// model: y[c0] = -g0, y[<= rows] = -g_k, y[>= rows] = +g_k.
std::vector<Rat> gammas_to_y(const RationalLpModel& lp, const VariantData& data,
                             const std::map<std::string, Rat>& overrides) {
  auto value = [&](int k) {
    const std::string key = "g" + std::to_string(k);
    auto it = overrides.find(key);
    if (it != overrides.end()) return it->second;
    auto jt = data.dual.values.find(key);
    return jt == data.dual.values.end() ? Rat(0) : jt->second;
  };
  std::vector<Rat> y(lp.cons.size(), Rat(0));
  for (size_t i = 0; i < lp.cons.size(); ++i) {
    const int k = data.gamma_for_constraint.empty() ? static_cast<int>(i) : data.gamma_for_constraint[i];
    const Rat g = value(k);
    y[i] = (lp.cons[i].sense == Sense::GE) ? g : -g;
  }
  return y;
}

}  // namespace

CertVariant cert_variant_from_string(const std::string& s) {
  if (s == "stair_high") return CertVariant::StairHigh;
  if (s == "stair_low") return CertVariant::StairLow;
  if (s == "uniform") return CertVariant::Uniform;
  throw std::invalid_argument("unknown certificate variant " + s + " (stair_high|stair_low|uniform)");
}

std::string to_string(CertVariant v) {
  switch (v) {
    case CertVariant::StairHigh: return "stair_high";
    case CertVariant::StairLow: return "stair_low";
    case CertVariant::Uniform: return "uniform";
  }
  return "?";
}

RationalLpModel build_structural_lp(CertVariant variant, const Rat& alpha) {
  RationalLpModel lp;
  lp.direction = Direction::Minimize;
  const bool uniform = variant == CertVariant::Uniform;
  const auto& names = uniform ? kUniformVars : kStairVars;
  for (const auto& n : names) lp.add_variable(n, Rat(0));
  lp.add_variable("z", Rat(1));

  if (!uniform) {
    add_row(lp, "c0_total", Sense::EQ, Rat(1), ones(names), false);
    add_row(lp, "c1_boxable_L", Sense::LE, Rat(0), ones({"x_LU", "x_LD"}), true);
    add_row(lp, "c2_boxable_SUp", Sense::LE, Rat(0),
            ones({"x_SCr", "x_SBS", "x_SBL", "x_STS", "x_STL", "x_SSWS", "x_SSWL", "x_SNCS", "x_SNCL", "x_SZ",
                  "x_LU"}),
            true);
    add_row(lp, "c3_boxable_relL", Sense::LE, Rat(0),
            ones({"x_LD", "x_SCr", "x_STL", "x_SBL", "x_SSWL", "x_SNCL"}), true);
    add_row(lp, "c4_boxable_relS", Sense::LE, Rat(0), ones({"x_LD", "x_STS", "x_SBS", "x_SNCS"}), true);
    add_row(lp, "c5_sandwich", Sense::LE, Rat(0), {{"x_LD", Rat(1, 4)}, {"x_SSWS", Rat(1)}}, true);
    if (variant == CertVariant::StairHigh) {
      add_row(lp, "c6_stair", Sense::LE, Rat(0), {{"x_LD", Rat(1)}, {"x_SZ", inv_8a1(alpha)}}, true);
      add_row(lp, "c7_window", Sense::GE, 1 / alpha, {{"x_SZ", Rat(1)}}, false);
    } else {
      add_row(lp, "c6_window", Sense::LE, 1 / alpha, {{"x_SZ", Rat(1)}}, false);
    }
    return lp;
  }

  add_row(lp, "c0_total", Sense::EQ, Rat(1), ones(names), false);
  add_row(lp, "c1_pile_S", Sense::LE, Rat(0),
          ones({"x_SBS", "x_SBL", "x_STS", "x_STL", "x_SMTS", "x_SMTL", "x_SMBS", "x_SMBL", "x_SMSW", "x_SMCr"}),
          true);
  const Coeffs all_large = ones({"x_LT", "x_LB", "x_LM"});
  auto plus = [](Coeffs base, Coeffs more) {
    for (auto& p : more) base.push_back(std::move(p));
    return base;
  };
  const Rat h(1, 2);
  add_row(lp, "c2_lam_SBS", Sense::LE, Rat(0), plus(all_large, {{"x_SBS", h}}), true);
  add_row(lp, "c3_jam_SBL", Sense::LE, Rat(0), plus(all_large, {{"x_SBL", Rat(1)}}), true);
  add_row(lp, "c4_lam_STS", Sense::LE, Rat(0), plus(all_large, {{"x_STS", h}}), true);
  add_row(lp, "c5_jam_STL", Sense::LE, Rat(0), plus(all_large, {{"x_STL", Rat(1)}}), true);
  add_row(lp, "c6_box_bottom", Sense::LE, Rat(0),
          {{"x_LT", Rat(1)}, {"x_LM", Rat(1)}, {"x_STS", h}, {"x_STL", h}, {"x_SMTS", h}, {"x_SMTL", h},
           {"x_SMBS", h}, {"x_SMBL", h}, {"x_SMSW", h}},
          true);
  add_row(lp, "c7_box_top", Sense::LE, Rat(0),
          {{"x_LT", Rat(1)}, {"x_LM", Rat(1)}, {"x_SBS", h}, {"x_SBL", h}, {"x_SMTS", h}, {"x_SMTL", h},
           {"x_SMBS", h}, {"x_SMBL", h}, {"x_SMSW", h}},
          true);
  add_row(lp, "c8_cross", Sense::LE, Rat(0), plus(all_large, {{"x_SMCr", Rat(1)}}), true);
  add_row(lp, "c9_mid_STL", Sense::LE, Rat(0), plus(all_large, {{"x_SMTL", Rat(1)}}), true);
  add_row(lp, "c10_mid_STS", Sense::LE, Rat(0), plus(all_large, {{"x_SMTS", h}}), true);
  add_row(lp, "c11_mid_SBL", Sense::LE, Rat(0), plus(all_large, {{"x_SMBL", Rat(1)}}), true);
  add_row(lp, "c12_mid_SBS", Sense::LE, Rat(0), plus(all_large, {{"x_SMBS", h}}), true);
  add_row(lp, "c13_sw_top", Sense::LE, Rat(0), {{"x_LT", Rat(1)}, {"x_SMSW", Rat(1)}}, true);
  add_row(lp, "c14_sw_bottom", Sense::LE, Rat(0), {{"x_LB", Rat(1)}, {"x_SMSW", Rat(1)}}, true);
  return lp;
}

bool dual_point_feasible(const RationalLpModel& model, const std::vector<Rat>& y, Rat* value,
                         std::vector<std::string>* violations) {
  bool ok = true;
  // Sign conditions per row sense (min model): y <= 0 on LE rows, >= 0 on GE.
  for (size_t i = 0; i < model.cons.size(); ++i) {
    const auto& con = model.cons[i];
    if (con.sense == Sense::LE && y[i] > 0) {
      ok = false;
      if (violations) violations->push_back("dual sign: y(" + con.name + ") = " + to_string(y[i]) + " > 0");
    }
    if (con.sense == Sense::GE && y[i] < 0) {
      ok = false;
      if (violations) violations->push_back("dual sign: y(" + con.name + ") = " + to_string(y[i]) + " < 0");
    }
  }
  // Reduced costs.
  for (size_t j = 0; j < model.vars.size(); ++j) {
    Rat rc = model.vars[j].objective;
    for (size_t i = 0; i < model.cons.size(); ++i) {
      for (const auto& [v, c] : model.cons[i].coeffs) {
        if (v == static_cast<int>(j)) rc -= y[i] * c;
      }
    }
    if (rc < 0) {
      ok = false;
      if (violations)
        violations->push_back("dual row for " + model.vars[j].name + ": reduced cost " + to_string(rc) + " < 0");
    }
  }
  if (value) {
    Rat obj(0);
    for (size_t i = 0; i < model.cons.size(); ++i) obj += y[i] * model.cons[i].rhs;
    *value = obj;
  }
  return ok;
}

namespace {

PointCheck check_primal(const RationalLpModel& lp, const VariantData& data, bool repaired) {
  PointCheck pc;
  const auto overrides = repaired ? data.primal.repaired_values : std::map<std::string, Rat>{};
  std::vector<Rat> x = point_vector(data.var_names, data.primal.values, overrides);
  if (repaired) {
    for (const auto& [k, v] : data.primal.repaired_values)
      pc.repairs.push_back(k + ": " + to_string(data.primal.values.count(k) ? data.primal.values.at(k) : Rat(0)) +
                           " -> " + to_string(v));
  }
  pc.feasible = true;
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0) {
      pc.feasible = false;
      pc.violations.push_back(data.var_names[j] + " negative");
    }
  }
  const int z_var = lp.var_index.at("z");
  Rat z_needed(0);
  for (const auto& con : lp.cons) {
    Rat lhs(0);
    bool has_z = false;
    for (const auto& [v, c] : con.coeffs) {
      if (v == z_var) {
        has_z = true;
      } else {
        lhs += c * x[v];
      }
    }
    if (has_z) {
      // Row of the form lhs - z <= 0: it pins the minimal feasible z.
      if (lhs > z_needed) z_needed = lhs;
      continue;
    }
    const bool bad = (con.sense == Sense::EQ && lhs != con.rhs) || (con.sense == Sense::LE && lhs > con.rhs) ||
                     (con.sense == Sense::GE && lhs < con.rhs);
    if (bad) {
      pc.feasible = false;
      pc.violations.push_back(con.name + ": lhs = " + to_string(lhs) + " vs rhs " + to_string(con.rhs) +
                              " (residual " + to_string(lhs - con.rhs) + ")");
    }
  }
  pc.objective = z_needed;
  return pc;
}

PointCheck check_dual(const RationalLpModel& lp, const VariantData& data, bool repaired) {
  PointCheck pc;
  const auto overrides = repaired ? data.dual.repaired_values : std::map<std::string, Rat>{};
  if (repaired) {
    for (const auto& [k, v] : data.dual.repaired_values)
      pc.repairs.push_back(k + ": " + to_string(data.dual.values.count(k) ? data.dual.values.at(k) : Rat(0)) +
                           " -> " + to_string(v));
  }
  std::vector<Rat> y = gammas_to_y(lp, data, overrides);
  Rat value;
  pc.feasible = dual_point_feasible(lp, y, &value, &pc.violations);
  pc.objective = value;

  // Verbatim published rows.
  auto gamma_value = [&](int k) {
    const std::string key = "g" + std::to_string(k);
    auto it = overrides.find(key);
    if (it != overrides.end()) return it->second;
    auto jt = data.dual.values.find(key);
    return jt == data.dual.values.end() ? Rat(0) : jt->second;
  };
  pc.printed_rows_ok = true;
  for (int k = 1; k <= data.num_gammas; ++k) {
    if (gamma_value(k) < 0) {
      pc.printed_rows_ok = false;
      pc.violations.push_back("printed-form: g" + std::to_string(k) + " < 0");
    }
  }
  for (const auto& row : data.printed_dual_rows) {
    Rat lhs(0);
    for (const auto& [k, c] : row.coeffs) lhs += c * gamma_value(k);
    const bool bad = (row.sense == Sense::LE && lhs > row.rhs) || (row.sense == Sense::GE && lhs < row.rhs) ||
                     (row.sense == Sense::EQ && lhs != row.rhs);
    if (bad) {
      pc.printed_rows_ok = false;
      pc.violations.push_back("printed-form row " + row.label + ": lhs = " + to_string(lhs) + " vs " +
                              to_string(row.rhs));
    }
  }
  return pc;
}

}  // namespace

CertificateReport verify_certificates(CertVariant variant, const Rat& alpha) {
  CertificateReport report;
  report.variant = variant;
  report.alpha = alpha;
  RationalLpModel lp = build_structural_lp(variant, alpha);
  const VariantData data = variant_data(variant, alpha);

  report.primal_published = check_primal(lp, data, false);
  report.primal_repaired = check_primal(lp, data, true);
  report.dual_published = check_dual(lp, data, false);
  report.dual_repaired = check_dual(lp, data, true);

  LpSolution<Rat> sol = lp_solve(lp);
  report.solver_status = sol.status;
  if (sol.status == LpStatus::Optimal) report.solver_optimum = sol.objective;
  report.sandwich_ok = sol.status == LpStatus::Optimal && report.dual_repaired.feasible &&
                       report.primal_repaired.feasible && report.dual_repaired.objective <= report.solver_optimum &&
                       report.solver_optimum <= report.primal_repaired.objective;
  return report;
}

std::string CertificateReport::to_json() const {
  auto point = [](const PointCheck& pc) {
    std::ostringstream os;
    os << "{\"feasible\":" << (pc.feasible ? "true" : "false")
       << ",\"printed_rows_ok\":" << (pc.printed_rows_ok ? "true" : "false") << ",\"objective\":\""
       << to_string(pc.objective) << "\",\"objective_approx\":" << to_double(pc.objective) << ",\"violations\":[";
    for (size_t i = 0; i < pc.violations.size(); ++i) os << (i ? "," : "") << "\"" << pc.violations[i] << "\"";
    os << "],\"repairs\":[";
    for (size_t i = 0; i < pc.repairs.size(); ++i) os << (i ? "," : "") << "\"" << pc.repairs[i] << "\"";
    os << "]}";
    return os.str();
  };
  std::ostringstream os;
  os << "{\"variant\":\"" << sap::to_string(variant) << "\",\"alpha\":\"" << sap::to_string(alpha) << "\""
     << ",\"primal_published\":" << point(primal_published) << ",\"primal_repaired\":" << point(primal_repaired)
     << ",\"dual_published\":" << point(dual_published) << ",\"dual_repaired\":" << point(dual_repaired)
     << ",\"solver_status\":\""
     << (solver_status == LpStatus::Optimal ? "optimal"
                                            : solver_status == LpStatus::Infeasible ? "infeasible" : "unbounded")
     << "\",\"solver_optimum\":\"" << sap::to_string(solver_optimum)
     << "\",\"solver_optimum_approx\":" << to_double(solver_optimum)
     << ",\"sandwich_ok\":" << (sandwich_ok ? "true" : "false") << "}";
  return os.str();
}

}  // namespace sap
