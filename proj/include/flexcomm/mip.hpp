#pragma once

// Mixed-integer linear program container and solver entry points.
//
// Minimisation only. Rows are stored sparsely; variables have finite or
// infinite bounds and an optional binary marker. The solvers are exact
// (rational-free) floating-point implementations: a bounded-variable revised
// simplex for the relaxation and best-first branch and bound on binaries.

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "flexcomm/core.hpp"

namespace flexcomm {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The factorisation or pivoting failed beyond recovery (cycling or severe
// ill-conditioning after the anti-cycling fallback).
struct NumericalBreakdown : Error {
  using Error::Error;
};

enum class RowSense { le, eq, ge };

// One sparse constraint row: sum(coef[i] * x[idx[i]]) sense rhs.
struct MipRow {
  std::vector<int> idx;
  std::vector<double> coef;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::string tag;  // used for LP export names and infeasibility reports
};

struct MipModel {
  int n_vars = 0;
  Eigen::VectorXd lower;     // per-variable bounds, -inf/+inf allowed
  Eigen::VectorXd upper;
  std::vector<char> binary;  // 1 = restricted to {0, 1} by branch and bound
  Eigen::VectorXd objective;
  double objective_offset = 0.0;  // constant added to every objective value
  std::vector<MipRow> rows;

  int add_var(double lo, double hi, double obj, bool is_binary = false);
  void add_row(MipRow row);
  int n_binaries() const;
  // Structural checks: bound order, finite binary bounds within [0, 1],
  // sorted unique row indices in range. Throws DomainError/DimensionMismatch.
  void validate() const;
};

struct SolveOptions {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double rel_gap = 1e-6;
  long node_limit = 0;            // 0 = unlimited
  double time_limit_seconds = 0;  // 0 = unlimited
  int n_workers = 1;              // node LPs solved per deterministic batch
};

enum class SolveStatus { optimal, gap_reached, infeasible, unbounded, limit };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  Eigen::VectorXd assignment;  // structural variables; empty if none found
  double objective = std::numeric_limits<double>::quiet_NaN();
  double best_bound = -kInf;
  long nodes = 0;
  int infeasible_row = -1;  // most violated row when status == infeasible
};

// Relative optimality gap used for reporting and termination.
double relative_gap(double objective, double best_bound);

// Solves the LP relaxation (binary markers ignored). The returned assignment
// is a basic solution satisfying every row within feasibility_tol, and
// best_bound is the matching dual bound.
SolveResult solve_lp(const MipModel& model, const SolveOptions& opts = {});

// As solve_lp but with the variable bounds replaced; used by branch and bound
// to fix binaries without copying the model.
SolveResult solve_lp_bounded(const MipModel& model, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const SolveOptions& opts = {});

// Exact branch and bound over the binary variables. Best-first on the node
// bound with newest-node tie-breaking (depth dives for early incumbents),
// most-fractional branching, deterministic for any n_workers.
SolveResult branch_and_bound(const MipModel& model, const SolveOptions& opts = {});

}  // namespace flexcomm
