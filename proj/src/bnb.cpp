// Branch and bound over binary variables.
//
// Search order is best-first on the node's inherited bound with ties broken
// towards the newest node, which makes the search dive after each branching
// and find incumbents early. Results are deterministic for any worker count:
// workers only solve node LPs speculatively (the relaxation depends on the
// node alone), while the search trajectory itself is integrated strictly in
// serial node order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "flexcomm/mip.hpp"

namespace flexcomm {

namespace {

struct Node {
  long id = 0;
  double estimate = -kInf;  // parent LP bound, a valid lower bound
  std::vector<std::pair<int, char>> fixings;  // binary var -> 0/1 along the path
};

struct NodeOrder {
  // priority_queue keeps the "largest"; we want the smallest estimate and,
  // among equal estimates, the newest id.
  bool operator()(const Node& a, const Node& b) const {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.id < b.id;
  }
};

// Interval propagation restricted to binary variables: fixes binaries whose
// opposite value cannot satisfy some row. Returns false on a proven conflict
// (writes the row index to *conflict_row).
bool tighten_binaries(const MipModel& model, Eigen::VectorXd& lo,
                      Eigen::VectorXd& hi, int* conflict_row) {
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
      const MipRow& row = model.rows[r];
      if (row.sense == RowSense::ge) continue;  // builder emits le/eq only
      double min_act = 0.0;
      int n_inf = 0;
      for (std::size_t k = 0; k < row.idx.size(); ++k) {
        const int j = row.idx[k];
        const double a = row.coef[k];
        const double contrib = a > 0.0 ? a * lo[j] : a * hi[j];
        if (contrib == -kInf) ++n_inf;
        else min_act += contrib;
      }
      // Even the smallest achievable activity violates the row: proven
      // conflict, no LP needed.
      if (n_inf == 0 && min_act > row.rhs + 1e-7) {
        *conflict_row = static_cast<int>(r);
        return false;
      }
      for (std::size_t k = 0; k < row.idx.size(); ++k) {
        const int j = row.idx[k];
        if (!model.binary[j] || lo[j] == hi[j]) continue;
        const double a = row.coef[k];
        const double own = a > 0.0 ? a * lo[j] : a * hi[j];
        if (n_inf > (own == -kInf ? 1 : 0)) continue;
        const double rest = own == -kInf ? min_act : min_act - own;
        // a*x_j <= rhs - rest must be satisfiable.
        if (a > 0.0 && rest + a > row.rhs + 1e-7) {
          hi[j] = 0.0;
          changed = true;
        } else if (a < 0.0 && rest > row.rhs + 1e-7) {
          lo[j] = 1.0;
          changed = true;
        }
        if (lo[j] > hi[j]) {
          *conflict_row = static_cast<int>(r);
          return false;
        }
      }
    }
    if (!changed) break;
  }
  return true;
}

class Search {
 public:
  Search(const MipModel& model, const SolveOptions& opts)
      : model_(model), opts_(opts), start_(std::chrono::steady_clock::now()) {}

  SolveResult run();

 private:
  const MipModel& model_;
  const SolveOptions& opts_;
  std::chrono::steady_clock::time_point start_;

  Eigen::VectorXd root_lo_, root_hi_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::map<long, std::future<SolveResult>> in_flight_;
  long next_id_ = 0;
  long processed_ = 0;
  double lb_pruned_ = kInf;

  bool has_incumbent_ = false;
  Eigen::VectorXd incumbent_;
  double incumbent_obj_ = kInf;

  double cutoff() const {
    return has_incumbent_
               ? incumbent_obj_ - opts_.rel_gap * std::max(1.0, std::abs(incumbent_obj_))
               : kInf;
  }
  bool out_of_time() const {
    if (opts_.time_limit_seconds <= 0) return false;
    const auto dt = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double>(dt).count() > opts_.time_limit_seconds;
  }

  void bounds_for(const Node& n, Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
    lo = root_lo_;
    hi = root_hi_;
    for (const auto& [j, v] : n.fixings) lo[j] = hi[j] = v;
  }
  SolveResult solve_node(const Node& n) const {
    Eigen::VectorXd lo, hi;
    bounds_for(n, lo, hi);
    return solve_lp_bounded(model_, lo, hi, opts_);
  }
  SolveResult take_result(const Node& n);
  void speculate();
  int pick_branch_var(const Eigen::VectorXd& x) const;
  bool try_incumbent(const Node& n, const SolveResult& lp);
  void rounding_heuristic(const Node& n, const SolveResult& lp);
  void offer_incumbent(const SolveResult& r);
  SolveResult finish(SolveStatus status);
};

SolveResult Search::take_result(const Node& n) {
  if (auto it = in_flight_.find(n.id); it != in_flight_.end()) {
    SolveResult r = it->second.get();
    in_flight_.erase(it);
    return r;
  }
  return solve_node(n);
}

// Launch LP solves for the best queued nodes that are not being solved yet.
void Search::speculate() {
  if (opts_.n_workers <= 1) return;
  const int budget = opts_.n_workers - static_cast<int>(in_flight_.size());
  if (budget <= 0) return;
  std::vector<Node> tmp;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> copy = open_;
  int launched = 0;
  while (!copy.empty() && launched < budget) {
    Node n = copy.top();
    copy.pop();
    if (in_flight_.count(n.id)) continue;
    in_flight_.emplace(n.id, std::async(std::launch::async, [this, n] {
      return solve_node(n);
    }));
    ++launched;
  }
}

int Search::pick_branch_var(const Eigen::VectorXd& x) const {
  int best = -1;
  double best_frac = -1.0;
  for (int j = 0; j < model_.n_vars; ++j) {
    if (!model_.binary[j]) continue;
    const double f = x[j] - std::floor(x[j]);
    const double dist = std::min(f, 1.0 - f);
    if (dist > best_frac + 1e-15) {
      best_frac = dist;
      best = j;
    }
  }
  return best;
}

void Search::offer_incumbent(const SolveResult& r) {
  if (r.status != SolveStatus::optimal) return;
  if (!has_incumbent_ || r.objective < incumbent_obj_) {
    has_incumbent_ = true;
    incumbent_obj_ = r.objective;
    incumbent_ = r.assignment;
  }
}

// Accepts the node LP solution if the binaries are integral; re-solves with
// them pinned when they are integral only up to tolerance, so incumbents are
// always exact 0/1 assignments.
bool Search::try_incumbent(const Node& n, const SolveResult& lp) {
  bool integral = true, exact = true;
  for (int j = 0; j < model_.n_vars; ++j) {
    if (!model_.binary[j]) continue;
    const double dist = std::abs(lp.assignment[j] - std::round(lp.assignment[j]));
    if (dist > opts_.integrality_tol) integral = false;
    if (dist > 1e-12) exact = false;
  }
  if (!integral) return false;
  if (exact) {
    offer_incumbent(lp);
    return true;
  }
  Eigen::VectorXd lo, hi;
  bounds_for(n, lo, hi);
  for (int j = 0; j < model_.n_vars; ++j)
    if (model_.binary[j]) lo[j] = hi[j] = std::round(lp.assignment[j]);
  const SolveResult clean = solve_lp_bounded(model_, lo, hi, opts_);
  if (clean.status != SolveStatus::optimal) return false;
  offer_incumbent(clean);
  return true;
}

// Round every binary to its nearest value, fix, and solve the remaining LP.
void Search::rounding_heuristic(const Node& n, const SolveResult& lp) {
  Eigen::VectorXd lo, hi;
  bounds_for(n, lo, hi);
  for (int j = 0; j < model_.n_vars; ++j)
    if (model_.binary[j]) lo[j] = hi[j] = std::round(lp.assignment[j]);
  const SolveResult fixed = solve_lp_bounded(model_, lo, hi, opts_);
  offer_incumbent(fixed);
}

SolveResult Search::finish(SolveStatus status) {
  SolveResult res;
  res.status = status;
  res.nodes = processed_;
  if (has_incumbent_) {
    res.assignment = incumbent_;
    res.objective = incumbent_obj_;
    double lb = std::min(incumbent_obj_, lb_pruned_);
    if (!open_.empty()) lb = std::min(lb, open_.top().estimate);
    res.best_bound = lb;
  }
  return res;
}

SolveResult Search::run() {
  model_.validate();
  root_lo_ = model_.lower;
  root_hi_ = model_.upper;
  int conflict = -1;
  if (!tighten_binaries(model_, root_lo_, root_hi_, &conflict)) {
    SolveResult res;
    res.status = SolveStatus::infeasible;
    res.infeasible_row = conflict;
    return res;
  }

  open_.push(Node{next_id_++, -kInf, {}});
  int root_infeasible_row = -1;

  while (!open_.empty()) {
    if (opts_.node_limit > 0 && processed_ >= opts_.node_limit)
      return finish(SolveStatus::limit);
    if (out_of_time()) return finish(SolveStatus::limit);

    Node n = open_.top();
    open_.pop();
    if (n.estimate >= cutoff()) {
      lb_pruned_ = std::min(lb_pruned_, n.estimate);
      if (auto it = in_flight_.find(n.id); it != in_flight_.end()) {
        it->second.wait();
        in_flight_.erase(it);
      }
      continue;
    }

    speculate();
    const SolveResult lp = take_result(n);
    ++processed_;

    if (lp.status == SolveStatus::unbounded) {
      SolveResult res;
      res.status = SolveStatus::unbounded;
      res.nodes = processed_;
      return res;
    }
    if (lp.status == SolveStatus::infeasible) {
      if (n.id == 0) root_infeasible_row = lp.infeasible_row;
      continue;
    }
    if (lp.objective >= cutoff()) {
      lb_pruned_ = std::min(lb_pruned_, lp.objective);
      continue;
    }
    if (try_incumbent(n, lp)) continue;

    if (processed_ % 16 == 1) rounding_heuristic(n, lp);
    if (lp.objective >= cutoff()) {
      lb_pruned_ = std::min(lb_pruned_, lp.objective);
      continue;
    }

    const int j = pick_branch_var(lp.assignment);
    if (j < 0) continue;  // nothing to branch on (numerically settled)
    const char near = lp.assignment[j] >= 0.5 ? 1 : 0;
    Node away{next_id_++, lp.objective, n.fixings};
    away.fixings.emplace_back(j, static_cast<char>(1 - near));
    Node dive{next_id_++, lp.objective, std::move(n.fixings)};
    dive.fixings.emplace_back(j, near);
    open_.push(std::move(away));
    open_.push(std::move(dive));  // newest id: explored first on equal bounds
  }

  if (!has_incumbent_) {
    SolveResult res;
    res.status = SolveStatus::infeasible;
    res.nodes = processed_;
    res.infeasible_row = root_infeasible_row;
    return res;
  }
  return finish(SolveStatus::optimal);
}

}  // namespace

SolveResult branch_and_bound(const MipModel& model, const SolveOptions& opts) {
  if (model.n_binaries() == 0) {
    SolveResult res = solve_lp(model, opts);
    res.nodes = 1;
    return res;
  }
  Search s(model, opts);
  return s.run();
}

}  // namespace flexcomm
