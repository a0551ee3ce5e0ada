// Bounded-variable revised simplex.
//
// Layout: the model's rows are turned into equalities  A x + s = b  with one
// slack column per row (bounds from the row sense). Rows whose slack-basic
// start would violate the slack bounds get an artificial column; phase 1
// minimises the artificial sum, phase 2 the true objective. The basis is
// factorised with Eigen's SparseLU and updated between refactorisations with
// product-form eta vectors. Pricing is Dantzig's rule with a switch to
// Bland's rule after a run of degenerate pivots.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "flexcomm/mip.hpp"

namespace flexcomm {

namespace {

enum class VStat : unsigned char { basic, at_lower, at_upper, nb_free };

constexpr double kPivTol = 1e-9;     // smallest usable pivot magnitude
constexpr double kDualTol = 1e-9;    // reduced-cost threshold for entering
constexpr double kDegenTol = 1e-10;  // step sizes below this count as degenerate
constexpr int kRefactorEvery = 64;   // eta vectors kept before refactorising
constexpr int kBlandAfter = 256;     // degenerate pivots before Bland's rule

class Simplex {
 public:
  Simplex(const MipModel& model, const Eigen::VectorXd& lo,
          const Eigen::VectorXd& hi, const SolveOptions& opts)
      : model_(model), opts_(opts) {
    m_ = static_cast<int>(model.rows.size());
    n_ = model.n_vars;
    build_columns(lo, hi);
  }

  SolveResult run();

 private:
  const MipModel& model_;
  const SolveOptions& opts_;
  int m_ = 0, n_ = 0;

  // One entry list per column (structural, then slacks, then artificials).
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_, hi_, cost_, value_;
  std::vector<VStat> stat_;
  std::vector<int> basis_;          // row position -> column
  std::vector<int> basis_pos_;      // column -> row position or -1
  Eigen::VectorXd rhs_;
  std::vector<int> art_row_;        // artificial column -> row
  int first_art_ = 0;               // column index of the first artificial

  // mutable: SparseLU::transpose() is non-const in Eigen 3.4 although it
  // only returns a view of the factorisation.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  std::vector<std::pair<Eigen::VectorXd, int>> etas_;
  bool bland_ = false;
  int degenerate_run_ = 0;
  long iterations_ = 0;

  void build_columns(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  void refactor();
  void recompute_basics();
  Eigen::VectorXd ftran(Eigen::VectorXd v) const;
  Eigen::VectorXd btran(Eigen::VectorXd v) const;
  double col_dot(int j, const Eigen::VectorXd& y) const;
  Eigen::VectorXd basic_costs(const std::vector<double>& c) const;
  // One phase of the simplex loop; returns false when the phase LP is
  // unbounded (only possible in phase 2).
  bool optimise(const std::vector<double>& c);
  double phase1_sum() const;
  SolveResult finish(SolveStatus status);
};

void Simplex::build_columns(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  cols_.resize(n_ + m_);
  lo_.assign(n_ + m_, 0.0);
  hi_.assign(n_ + m_, 0.0);
  cost_.assign(n_ + m_, 0.0);
  value_.assign(n_ + m_, 0.0);
  stat_.assign(n_ + m_, VStat::at_lower);
  rhs_.resize(m_);

  for (int j = 0; j < n_; ++j) {
    lo_[j] = lo[j];
    hi_[j] = hi[j];
    cost_[j] = model_.objective[j];
  }
  for (int i = 0; i < m_; ++i) {
    const MipRow& row = model_.rows[i];
    for (std::size_t k = 0; k < row.idx.size(); ++k)
      cols_[row.idx[k]].emplace_back(i, row.coef[k]);
    const int s = n_ + i;
    cols_[s].emplace_back(i, 1.0);
    switch (row.sense) {
      case RowSense::le: lo_[s] = 0.0;   hi_[s] = kInf; break;
      case RowSense::eq: lo_[s] = 0.0;   hi_[s] = 0.0;  break;
      case RowSense::ge: lo_[s] = -kInf; hi_[s] = 0.0;  break;
    }
    rhs_[i] = row.rhs;
  }

  // Nonbasic start: every structural variable at its bound nearest zero.
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] == -kInf && hi_[j] == kInf) {
      stat_[j] = VStat::nb_free;
      value_[j] = 0.0;
    } else if (hi_[j] == kInf || (lo_[j] != -kInf && std::abs(lo_[j]) <= std::abs(hi_[j]))) {
      stat_[j] = VStat::at_lower;
      value_[j] = lo_[j];
    } else {
      stat_[j] = VStat::at_upper;
      value_[j] = hi_[j];
    }
  }

  Eigen::VectorXd activity = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_; ++j) {
    if (value_[j] == 0.0) continue;
    for (const auto& [i, a] : cols_[j]) activity[i] += a * value_[j];
  }

  // Slack-basic where feasible, otherwise clamp the slack and add an
  // artificial carrying the residual; the start basis is then triangular.
  basis_.assign(m_, -1);
  first_art_ = n_ + m_;
  for (int i = 0; i < m_; ++i) {
    const int s = n_ + i;
    const double want = rhs_[i] - activity[i];
    if (want >= lo_[s] - 1e-12 && want <= hi_[s] + 1e-12) {
      basis_[i] = s;
      stat_[s] = VStat::basic;
      value_[s] = want;
      continue;
    }
    value_[s] = std::clamp(want, lo_[s], hi_[s]);
    stat_[s] = value_[s] == lo_[s] ? VStat::at_lower : VStat::at_upper;
    const double resid = want - value_[s];
    const int a = static_cast<int>(cols_.size());
    cols_.push_back({{i, resid >= 0.0 ? 1.0 : -1.0}});
    lo_.push_back(0.0);
    hi_.push_back(kInf);
    cost_.push_back(0.0);
    value_.push_back(std::abs(resid));
    stat_.push_back(VStat::basic);
    art_row_.push_back(i);
    basis_[i] = a;
  }

  basis_pos_.assign(cols_.size(), -1);
  for (int i = 0; i < m_; ++i) basis_pos_[basis_[i]] = i;
}

void Simplex::refactor() {
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m_; ++i)
    for (const auto& [r, a] : cols_[basis_[i]]) trips.emplace_back(r, i, a);
  Eigen::SparseMatrix<double> B(m_, m_);
  B.setFromTriplets(trips.begin(), trips.end());
  lu_.compute(B);
  if (lu_.info() != Eigen::Success)
    throw NumericalBreakdown("simplex: basis factorisation failed");
  etas_.clear();
}

void Simplex::recompute_basics() {
  Eigen::VectorXd r = rhs_;
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (stat_[j] == VStat::basic || value_[j] == 0.0) continue;
    for (const auto& [i, a] : cols_[j]) r[i] -= a * value_[j];
  }
  const Eigen::VectorXd xb = ftran(std::move(r));
  for (int i = 0; i < m_; ++i) value_[basis_[i]] = xb[i];
}

Eigen::VectorXd Simplex::ftran(Eigen::VectorXd v) const {
  Eigen::VectorXd x = lu_.solve(v);
  for (const auto& [w, r] : etas_) {
    const double t = x[r] / w[r];
    x.noalias() -= t * w;
    x[r] = t;
  }
  return x;
}

Eigen::VectorXd Simplex::btran(Eigen::VectorXd v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const auto& [w, r] = *it;
    const double s = w.dot(v) - w[r] * v[r];
    v[r] = (v[r] - s) / w[r];
  }
  return lu_.transpose().solve(v);
}

double Simplex::col_dot(int j, const Eigen::VectorXd& y) const {
  double d = 0.0;
  for (const auto& [i, a] : cols_[j]) d += a * y[i];
  return d;
}

Eigen::VectorXd Simplex::basic_costs(const std::vector<double>& c) const {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = c[basis_[i]];
  return cb;
}

double Simplex::phase1_sum() const {
  double s = 0.0;
  for (std::size_t k = 0; k < art_row_.size(); ++k) s += value_[first_art_ + k];
  return s;
}

bool Simplex::optimise(const std::vector<double>& c) {
  const long iter_cap = 200000 + 500L * (m_ + n_);
  while (true) {
    if (++iterations_ > iter_cap)
      throw NumericalBreakdown("simplex: iteration cap hit (cycling suspected)");

    const Eigen::VectorXd y = btran(basic_costs(c));

    // Pricing. Dantzig: most violating reduced cost; Bland: lowest index.
    int enter = -1;
    double best = kDualTol;
    int dir = 0;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (stat_[j] == VStat::basic || lo_[j] == hi_[j]) continue;
      const double d = c[j] - col_dot(static_cast<int>(j), y);
      double viol = 0.0;
      int dj = 0;
      if (stat_[j] == VStat::at_lower && d < -kDualTol) { viol = -d; dj = +1; }
      else if (stat_[j] == VStat::at_upper && d > kDualTol) { viol = d; dj = -1; }
      else if (stat_[j] == VStat::nb_free && std::abs(d) > kDualTol) {
        viol = std::abs(d);
        dj = d < 0.0 ? +1 : -1;
      }
      if (dj == 0) continue;
      if (bland_) { enter = static_cast<int>(j); dir = dj; break; }
      if (viol > best) { best = viol; enter = static_cast<int>(j); dir = dj; }
    }
    if (enter < 0) return true;  // no improving column: phase optimum

    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    for (const auto& [i, v] : cols_[enter]) a[i] = v;
    const Eigen::VectorXd w = ftran(std::move(a));

    // Ratio test over the basic variables plus the entering bound flip.
    double t_best = kInf;
    if (lo_[enter] != -kInf && hi_[enter] != kInf) t_best = hi_[enter] - lo_[enter];
    int leave_pos = -1;
    double leave_delta = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double delta = dir * w[i];
      if (std::abs(delta) <= kPivTol) continue;
      const int bj = basis_[i];
      double t;
      if (delta > 0.0) {
        if (lo_[bj] == -kInf) continue;
        t = (value_[bj] - lo_[bj]) / delta;
      } else {
        if (hi_[bj] == kInf) continue;
        t = (value_[bj] - hi_[bj]) / delta;
      }
      if (t < -1e-11) t = 0.0;  // bound drift from eta roundoff
      const bool better =
          t < t_best - 1e-12 ||
          (t <= t_best + 1e-12 && leave_pos >= 0 &&
           (bland_ ? bj < basis_[leave_pos]
                   : std::abs(delta) > std::abs(leave_delta) + 1e-15));
      if (better || (t < t_best && leave_pos < 0)) {
        t_best = std::min(t_best, std::max(t, 0.0));
        leave_pos = i;
        leave_delta = delta;
      }
    }
    if (t_best == kInf) return false;  // unbounded direction

    const double step = std::max(t_best, 0.0);
    degenerate_run_ = step <= kDegenTol ? degenerate_run_ + 1 : 0;
    if (degenerate_run_ > kBlandAfter) bland_ = true;
    if (degenerate_run_ == 0) bland_ = false;

    // Move the basic variables and the entering variable.
    if (step != 0.0) {
      for (int i = 0; i < m_; ++i) {
        const double delta = dir * w[i];
        if (delta != 0.0) value_[basis_[i]] -= step * delta;
      }
    }
    if (leave_pos < 0) {
      // No basic variable blocks before the entering bound: a bound flip.
      stat_[enter] = stat_[enter] == VStat::at_lower ? VStat::at_upper : VStat::at_lower;
      value_[enter] = stat_[enter] == VStat::at_lower ? lo_[enter] : hi_[enter];
      continue;
    }

    // Basis change: entering moves off its bound, leaving lands on one.
    value_[enter] = (stat_[enter] == VStat::at_upper ? hi_[enter]
                     : stat_[enter] == VStat::nb_free ? 0.0
                                                      : lo_[enter]) +
                    dir * step;
    const int bj = basis_[leave_pos];
    value_[bj] = leave_delta > 0.0 ? lo_[bj] : hi_[bj];
    stat_[bj] = leave_delta > 0.0 ? VStat::at_lower : VStat::at_upper;
    stat_[enter] = VStat::basic;
    basis_pos_[bj] = -1;
    basis_[leave_pos] = enter;
    basis_pos_[enter] = leave_pos;

    if (std::abs(w[leave_pos]) < kPivTol)
      throw NumericalBreakdown("simplex: pivot element vanished");
    etas_.emplace_back(w, leave_pos);
    if (static_cast<int>(etas_.size()) >= kRefactorEvery) {
      refactor();
      recompute_basics();
    }
  }
}

SolveResult Simplex::finish(SolveStatus status) {
  SolveResult res;
  res.status = status;
  res.nodes = 0;
  if (status != SolveStatus::optimal) {
    if (status == SolveStatus::infeasible) {
      // Report the row whose artificial kept the largest violation.
      double worst = 0.0;
      for (std::size_t k = 0; k < art_row_.size(); ++k) {
        if (value_[first_art_ + k] > worst) {
          worst = value_[first_art_ + k];
          res.infeasible_row = art_row_[k];
        }
      }
    }
    return res;
  }

  refactor();
  recompute_basics();

  res.assignment.resize(n_);
  for (int j = 0; j < n_; ++j) {
    double v = value_[j];
    if (lo_[j] != -kInf && std::abs(v - lo_[j]) <= 1e-9) v = lo_[j];
    if (hi_[j] != kInf && std::abs(v - hi_[j]) <= 1e-9) v = hi_[j];
    res.assignment[j] = std::clamp(v, lo_[j], hi_[j]);
  }
  double obj = model_.objective_offset;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * res.assignment[j];
  res.objective = obj;

  // Dual bound: y'b plus the reduced-cost value of the nonbasic columns.
  const Eigen::VectorXd y = btran(basic_costs(cost_));
  double bound = y.dot(rhs_) + model_.objective_offset;
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (stat_[j] == VStat::basic || value_[j] == 0.0) continue;
    bound += (cost_[j] - col_dot(static_cast<int>(j), y)) * value_[j];
  }
  res.best_bound = bound;

  // Final feasibility audit against the original rows.
  for (int i = 0; i < m_; ++i) {
    const MipRow& row = model_.rows[i];
    double act = 0.0;
    for (std::size_t k = 0; k < row.idx.size(); ++k)
      act += row.coef[k] * res.assignment[row.idx[k]];
    const double tol = opts_.feasibility_tol * (1.0 + std::abs(row.rhs));
    const bool ok = row.sense == RowSense::le   ? act <= row.rhs + tol
                    : row.sense == RowSense::ge ? act >= row.rhs - tol
                                                : std::abs(act - row.rhs) <= tol;
    if (!ok)
      throw NumericalBreakdown("simplex: solution violates row " +
                               std::to_string(i) + " beyond tolerance");
  }
  return res;
}

SolveResult Simplex::run() {
  refactor();

  if (!art_row_.empty()) {
    std::vector<double> c1(cols_.size(), 0.0);
    for (std::size_t k = 0; k < art_row_.size(); ++k) c1[first_art_ + k] = 1.0;
    if (!optimise(c1))
      throw NumericalBreakdown("simplex: phase 1 reported an unbounded ray");
    const double tol = opts_.feasibility_tol *
                       (1.0 + rhs_.cwiseAbs().maxCoeff());
    if (phase1_sum() > tol) return finish(SolveStatus::infeasible);
    for (std::size_t k = 0; k < art_row_.size(); ++k) hi_[first_art_ + k] = 0.0;
    refactor();
    recompute_basics();
    bland_ = false;
    degenerate_run_ = 0;
  }

  cost_.resize(cols_.size(), 0.0);
  if (!optimise(cost_)) return finish(SolveStatus::unbounded);
  return finish(SolveStatus::optimal);
}

// Bound-only solution for models without rows.
SolveResult solve_rowless(const MipModel& model, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  SolveResult res;
  res.assignment.resize(model.n_vars);
  double obj = model.objective_offset;
  for (int j = 0; j < model.n_vars; ++j) {
    const double c = model.objective[j];
    double v;
    if (c > 0.0) v = lo[j];
    else if (c < 0.0) v = hi[j];
    else v = lo[j] != -kInf ? lo[j] : (hi[j] != kInf ? hi[j] : 0.0);
    if (v == -kInf || v == kInf) {
      res.status = SolveStatus::unbounded;
      return res;
    }
    if (lo[j] > hi[j]) {
      res.status = SolveStatus::infeasible;
      return res;
    }
    res.assignment[j] = v;
    obj += c * v;
  }
  res.status = SolveStatus::optimal;
  res.objective = obj;
  res.best_bound = obj;
  return res;
}

}  // namespace

SolveResult solve_lp_bounded(const MipModel& model, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, const SolveOptions& opts) {
  model.validate();
  if (lower.size() != model.n_vars || upper.size() != model.n_vars)
    throw DimensionMismatch("solve_lp: bound vector size mismatch");
  for (int j = 0; j < model.n_vars; ++j)
    if (lower[j] > upper[j]) {
      SolveResult res;
      res.status = SolveStatus::infeasible;
      return res;
    }
  if (model.rows.empty()) return solve_rowless(model, lower, upper);
  Simplex s(model, lower, upper, opts);
  return s.run();
}

SolveResult solve_lp(const MipModel& model, const SolveOptions& opts) {
  return solve_lp_bounded(model, model.lower, model.upper, opts);
}

}  // namespace flexcomm
