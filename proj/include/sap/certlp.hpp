#pragma once

#include <string>
#include <vector>

#include "sap/lp.hpp"
#include "sap/rational.hpp"

namespace sap {

// The three structural LPs with published primal/dual certificates. All
// checks run in exact rational arithmetic.
enum class CertVariant { StairHigh, StairLow, Uniform };

CertVariant cert_variant_from_string(const std::string& s);
std::string to_string(CertVariant v);

// The exact constraint system (min z). alpha enters only the stair variants.
RationalLpModel build_structural_lp(CertVariant variant, const Rat& alpha);

struct PointCheck {
  bool feasible = false;        // against the LP / the dual derived from it
  bool printed_rows_ok = true;  // against the published dual rows, verbatim (duals only)
  Rat objective;                // primal: minimal feasible z for the x-part; dual: certificate value
  std::vector<std::string> violations;  // exact residual descriptions
  std::vector<std::string> repairs;     // coordinate fixes relative to the published point
};

struct CertificateReport {
  CertVariant variant = CertVariant::Uniform;
  Rat alpha;
  PointCheck primal_published;  // the point exactly as published
  PointCheck primal_repaired;   // with documented typo fixes (equals published when clean)
  PointCheck dual_published;
  PointCheck dual_repaired;
  Rat solver_optimum;
  LpStatus solver_status = LpStatus::Infeasible;
  bool sandwich_ok = false;  // repaired dual value <= solver optimum <= repaired primal value

  std::string to_json() const;
};

CertificateReport verify_certificates(CertVariant variant, const Rat& alpha);

// Checks y against the dual of `model` (min sense assumed): reduced costs of
// all variables nonnegative. Returns the dual objective value through `value`.
bool dual_point_feasible(const RationalLpModel& model, const std::vector<Rat>& y, Rat* value,
                         std::vector<std::string>* violations);

}  // namespace sap
