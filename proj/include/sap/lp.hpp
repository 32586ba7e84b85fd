#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sap/rational.hpp"

namespace sap {

enum class Sense { LE, EQ, GE };
enum class Direction { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename T>
struct LpTraits;

template <>
struct LpTraits<double> {
  static double tol() { return 1e-9; }
};

template <>
struct LpTraits<Rat> {
  static Rat tol() { return Rat(0); }
};

// Generic LP over scalar T (double: float mode, Rat: exact rational mode).
// Variables are nonnegative. Solved by primal simplex with Bland's rule,
// so results are deterministic.
template <typename T>
struct LpProblem {
  struct Variable {
    std::string name;
    T objective{};
  };
  struct Constraint {
    std::string name;
    Sense sense = Sense::LE;
    T rhs{};
    std::vector<std::pair<int, T>> coeffs;  // (variable index, coefficient)
  };

  Direction direction = Direction::Minimize;
  std::vector<Variable> vars;
  std::vector<Constraint> cons;
  std::map<std::string, int> var_index;
  std::map<std::string, int> con_index;
  // Optimal basis of the last solve; reused as a warm start when columns are
  // added afterwards (the old basis stays primal feasible).
  std::optional<std::vector<long long>> last_basis;

  int add_variable(const std::string& name, const T& objective) {
    if (var_index.count(name)) throw std::invalid_argument("duplicate variable " + name);
    var_index[name] = static_cast<int>(vars.size());
    vars.push_back(Variable{name, objective});
    return static_cast<int>(vars.size()) - 1;
  }

  int add_constraint(const std::string& name, Sense sense, const T& rhs,
                     std::vector<std::pair<int, T>> coeffs) {
    if (con_index.count(name)) throw std::invalid_argument("duplicate constraint " + name);
    for (const auto& [v, c] : coeffs) {
      if (v < 0 || v >= static_cast<int>(vars.size())) throw std::invalid_argument("bad variable index in " + name);
    }
    con_index[name] = static_cast<int>(cons.size());
    cons.push_back(Constraint{name, sense, rhs, std::move(coeffs)});
    return static_cast<int>(cons.size()) - 1;
  }

  // Column generation entry point: a new variable with entries per existing
  // constraint. The stored warm-start basis remains valid.
  int add_column(const std::string& name, const T& objective,
                 const std::vector<std::pair<int, T>>& entries) {
    const int v = add_variable(name, objective);
    for (const auto& [con, coeff] : entries) {
      if (con < 0 || con >= static_cast<int>(cons.size())) throw std::invalid_argument("bad constraint index for column " + name);
      cons[con].coeffs.emplace_back(v, coeff);
    }
    return v;
  }

  // Plain-text model listing for debugging.
  std::string dump() const {
    std::ostringstream os;
    os << (direction == Direction::Minimize ? "min" : "max");
    for (size_t j = 0; j < vars.size(); ++j) os << (j ? " + " : " ") << vars[j].objective << "*" << vars[j].name;
    os << "\n";
    for (const auto& con : cons) {
      os << con.name << ":";
      for (const auto& [v, c] : con.coeffs) os << " + " << c << "*" << vars[v].name;
      os << (con.sense == Sense::LE ? " <= " : con.sense == Sense::EQ ? " == " : " >= ") << con.rhs << "\n";
    }
    return os.str();
  }
};

template <typename T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T objective{};
  std::vector<T> primal;  // per variable
  // Per constraint. Convention: at optimality, objective == sum_i dual[i]*rhs[i]
  // and for every variable j the reduced cost obj_j - sum_i dual[i]*a_ij is
  // >= 0 when minimizing and <= 0 when maximizing.
  std::vector<T> dual;
  // Basic variable per row, encoded stably under later add_column calls:
  // entry >= 0 is a structural variable index, entry -(i+1) is row i's
  // slack/artificial unit column.
  std::vector<long long> basis;

  T reduced_cost(const LpProblem<T>& p, int var) const {
    T rc = p.vars[var].objective;
    for (size_t i = 0; i < p.cons.size(); ++i) {
      for (const auto& [v, c] : p.cons[i].coeffs) {
        if (v == var) rc -= dual[i] * c;
      }
    }
    return rc;
  }
};

namespace detail {

// Dense two-phase primal simplex. Internal form: minimize. Rows are
// normalized to nonnegative rhs; every row gets a slack (LE) or an
// artificial (EQ/GE, plus surplus for GE).
template <typename T>
class Simplex {
 public:
  explicit Simplex(const LpProblem<T>& p) : p_(p), tol_(LpTraits<T>::tol()) { build(); }

  LpSolution<T> run(const std::optional<std::vector<long long>>& basis_hint) {
    bool warm = false;
    if (basis_hint && basis_hint->size() == rows_.size()) warm = try_warm_start(*basis_hint);
    if (!warm) {
      if (!phase1()) return make_solution(LpStatus::Infeasible);
    }
    set_phase2_costs();
    const int state = optimize(/*phase1=*/false);
    if (state == kUnbounded) return make_solution(LpStatus::Unbounded);
    return make_solution(LpStatus::Optimal);
  }

 private:
  static constexpr int kOptimal = 0;
  static constexpr int kUnbounded = 1;

  const LpProblem<T>& p_;
  T tol_;
  int n_ = 0;           // structural variables
  int n_total_ = 0;     // structural + slack/surplus + artificial
  std::vector<std::vector<T>> rows_;  // m x (n_total_ + 1), last column = rhs
  std::vector<T> obj_;                // reduced-cost row, size n_total_
  T obj_value_{};
  std::vector<int> basis_;
  std::vector<int> art_col_;    // per row: its initial unit column (slack or artificial)
  std::vector<bool> is_art_;    // per column
  std::vector<int> row_sign_;   // +1/-1 normalization applied to the original row
  std::vector<T> costs_;        // phase-2 costs per column

  void build() {
    n_ = static_cast<int>(p_.vars.size());
    const int m = static_cast<int>(p_.cons.size());
    rows_.assign(m, {});
    art_col_.assign(m, -1);
    row_sign_.assign(m, 1);
    std::vector<std::vector<T>> body(m, std::vector<T>(n_, T{}));
    for (int i = 0; i < m; ++i) {
      for (const auto& [v, c] : p_.cons[i].coeffs) body[i][v] += c;
    }
    // Count extra columns.
    int extra = 0;
    for (int i = 0; i < m; ++i) {
      Sense s = p_.cons[i].sense;
      T rhs = p_.cons[i].rhs;
      bool flip = rhs < T{};
      if (flip) s = (s == Sense::LE ? Sense::GE : s == Sense::GE ? Sense::LE : Sense::EQ);
      extra += (s == Sense::GE) ? 2 : 1;
    }
    n_total_ = n_ + extra;
    is_art_.assign(n_total_, false);
    int next = n_;
    for (int i = 0; i < m; ++i) {
      rows_[i].assign(n_total_ + 1, T{});
      Sense s = p_.cons[i].sense;
      T rhs = p_.cons[i].rhs;
      int sign = 1;
      if (rhs < T{}) {
        sign = -1;
        rhs = -rhs;
        s = (s == Sense::LE ? Sense::GE : s == Sense::GE ? Sense::LE : Sense::EQ);
      }
      row_sign_[i] = sign;
      for (int j = 0; j < n_; ++j) rows_[i][j] = sign > 0 ? body[i][j] : -body[i][j];
      rows_[i][n_total_] = rhs;
      if (s == Sense::LE) {
        rows_[i][next] = T(1);
        art_col_[i] = next;
        ++next;
      } else if (s == Sense::GE) {
        rows_[i][next] = T(-1);  // surplus
        ++next;
        rows_[i][next] = T(1);  // artificial
        is_art_[next] = true;
        art_col_[i] = next;
        ++next;
      } else {
        rows_[i][next] = T(1);
        is_art_[next] = true;
        art_col_[i] = next;
        ++next;
      }
    }
    basis_.resize(m);
    for (int i = 0; i < m; ++i) basis_[i] = art_col_[i];
    costs_.assign(n_total_, T{});
    for (int j = 0; j < n_; ++j) {
      costs_[j] = (p_.direction == Direction::Minimize) ? p_.vars[j].objective : -p_.vars[j].objective;
    }
  }

  void compute_obj_row(const std::vector<T>& costs) {
    obj_.assign(n_total_, T{});
    obj_value_ = T{};
    for (int j = 0; j < n_total_; ++j) obj_[j] = costs[j];
    for (size_t i = 0; i < rows_.size(); ++i) {
      const T cb = costs[basis_[i]];
      if (cb == T{}) continue;
      for (int j = 0; j < n_total_; ++j) obj_[j] -= cb * rows_[i][j];
      obj_value_ -= cb * rows_[i][n_total_];
    }
  }

  bool phase1() {
    std::vector<T> costs(n_total_, T{});
    bool any_art = false;
    for (int j = 0; j < n_total_; ++j) {
      if (is_art_[j]) {
        costs[j] = T(1);
        any_art = true;
      }
    }
    if (!any_art) {
      compute_obj_row(costs_);
      return true;
    }
    compute_obj_row(costs);
    optimize(/*phase1=*/true);
    // obj_value_ holds -(sum of artificials).
    T infeas = -obj_value_;
    if (infeas > tol_) return false;
    // Drive remaining artificials out of the basis when possible.
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (!is_art_[basis_[i]]) continue;
      int pivot = -1;
      for (int j = 0; j < n_total_; ++j) {
        if (is_art_[j]) continue;
        T a = rows_[i][j];
        if (a > tol_ || a < -tol_) {
          pivot = j;
          break;
        }
      }
      if (pivot >= 0) do_pivot(static_cast<int>(i), pivot);
      // else: redundant row; artificial stays basic at value 0.
    }
    return true;
  }

  void set_phase2_costs() { compute_obj_row(costs_); }

  int optimize(bool phase1) {
    const size_t m = rows_.size();
    while (true) {
      // Bland: entering = smallest index with negative reduced cost.
      int enter = -1;
      for (int j = 0; j < n_total_; ++j) {
        if (!phase1 && is_art_[j]) continue;  // artificials never re-enter
        if (obj_[j] < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return kOptimal;
      int leave = -1;
      T best_ratio{};
      for (size_t i = 0; i < m; ++i) {
        const T a = rows_[i][enter];
        if (a > tol_) {
          const T ratio = rows_[i][n_total_] / a;
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = static_cast<int>(i);
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return kUnbounded;
      do_pivot(leave, enter);
    }
  }

  void do_pivot(int row, int col) {
    const T pivot = rows_[row][col];
    for (int j = 0; j <= n_total_; ++j) rows_[row][j] /= pivot;
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == row) continue;
      const T factor = rows_[i][col];
      if (factor == T{}) continue;
      for (int j = 0; j <= n_total_; ++j) rows_[i][j] -= factor * rows_[row][j];
    }
    const T ofac = obj_[col];
    if (ofac != T{}) {
      for (int j = 0; j < n_total_; ++j) obj_[j] -= ofac * rows_[row][j];
      obj_value_ -= ofac * rows_[row][n_total_];
    }
    basis_[row] = col;
  }

  bool try_warm_start(const std::vector<long long>& hint) {
    // Decode stable encoding into current internal column indices.
    std::vector<int> cols(hint.size());
    for (size_t i = 0; i < hint.size(); ++i) {
      if (hint[i] >= 0) {
        if (hint[i] >= n_) return false;
        cols[i] = static_cast<int>(hint[i]);
      } else {
        const size_t row = static_cast<size_t>(-hint[i] - 1);
        if (row >= rows_.size()) return false;
        cols[i] = art_col_[row];
      }
    }
    compute_obj_row(std::vector<T>(n_total_, T{}));  // placeholder; phase-2 costs set later
    // Pivot the hinted variables in, row by row.
    for (size_t i = 0; i < rows_.size(); ++i) {
      const int want = cols[i];
      if (basis_[i] == want) continue;
      T a = rows_[i][want];
      if (!(a > tol_ || a < -tol_)) return false;
      do_pivot(static_cast<int>(i), want);
    }
    for (const auto& row : rows_) {
      if (row[n_total_] < -tol_) return false;  // hint not primal feasible
    }
    return true;
  }

  LpSolution<T> make_solution(LpStatus status) {
    LpSolution<T> sol;
    sol.status = status;
    if (status != LpStatus::Optimal) return sol;
    sol.primal.assign(n_, T{});
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) sol.primal[basis_[i]] = rows_[i][n_total_];
    }
    // Internal duals: y_i = cost(unit column of row i) - reduced cost of it.
    sol.dual.assign(rows_.size(), T{});
    for (size_t i = 0; i < rows_.size(); ++i) {
      const int col = art_col_[i];
      T y = costs_[col] - obj_[col];
      if (row_sign_[i] < 0) y = -y;
      sol.dual[i] = (p_.direction == Direction::Minimize) ? y : -y;
    }
    // obj_value_ tracks -(c_B B^-1 b); the internal objective is -obj_value_.
    const T value = -obj_value_;
    sol.objective = (p_.direction == Direction::Minimize) ? value : -value;
    // Stable basis encoding (see LpSolution::basis).
    std::vector<long long> unit_row(n_total_, -1);
    for (size_t i = 0; i < rows_.size(); ++i) unit_row[art_col_[i]] = static_cast<long long>(i);
    sol.basis.resize(rows_.size());
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) {
        sol.basis[i] = basis_[i];
      } else if (unit_row[basis_[i]] >= 0) {
        sol.basis[i] = -(unit_row[basis_[i]] + 1);
      } else {
        // A surplus column; no stable name, drop the hint.
        sol.basis.clear();
        break;
      }
    }
    return sol;
  }
};

}  // namespace detail

// Solves the model; stores the optimal basis back into the model so later
// add_column calls can warm start.
template <typename T>
LpSolution<T> lp_solve(LpProblem<T>& model) {
  detail::Simplex<T> simplex(model);
  LpSolution<T> sol = simplex.run(model.last_basis);
  if (sol.status == LpStatus::Optimal && !sol.basis.empty()) model.last_basis = sol.basis;
  return sol;
}

template <typename T>
LpSolution<T> lp_solve_fresh(const LpProblem<T>& model) {
  LpProblem<T> copy = model;
  copy.last_basis.reset();
  return lp_solve(copy);
}

using LpModel = LpProblem<double>;
using RationalLpModel = LpProblem<Rat>;

}  // namespace sap
