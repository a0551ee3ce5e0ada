#include "flexcomm/mip.hpp"

#include <algorithm>
#include <cmath>

namespace flexcomm {

int MipModel::add_var(double lo, double hi, double obj, bool is_binary) {
  const int id = n_vars++;
  lower.conservativeResize(n_vars);
  upper.conservativeResize(n_vars);
  objective.conservativeResize(n_vars);
  lower[id] = lo;
  upper[id] = hi;
  objective[id] = obj;
  binary.push_back(is_binary ? 1 : 0);
  return id;
}

void MipModel::add_row(MipRow row) { rows.push_back(std::move(row)); }

int MipModel::n_binaries() const {
  return static_cast<int>(std::count(binary.begin(), binary.end(), 1));
}

void MipModel::validate() const {
  if (lower.size() != n_vars || upper.size() != n_vars ||
      objective.size() != n_vars || static_cast<int>(binary.size()) != n_vars)
    throw DimensionMismatch("model: variable array sizes disagree");
  for (int j = 0; j < n_vars; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw DomainError("model: bad bounds on variable " + std::to_string(j));
    if (binary[j] && (lower[j] < -1e-12 || upper[j] > 1.0 + 1e-12))
      throw DomainError("model: binary variable " + std::to_string(j) +
                        " has bounds outside [0, 1]");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const MipRow& row = rows[r];
    if (row.idx.size() != row.coef.size())
      throw DimensionMismatch("model: row " + std::to_string(r) +
                              " index/coefficient size mismatch");
    int prev = -1;
    for (std::size_t k = 0; k < row.idx.size(); ++k) {
      if (row.idx[k] < 0 || row.idx[k] >= n_vars)
        throw DomainError("model: row " + std::to_string(r) +
                          " references an unknown variable");
      if (row.idx[k] <= prev)
        throw DomainError("model: row " + std::to_string(r) +
                          " indices not strictly increasing");
      if (!std::isfinite(row.coef[k]))
        throw DomainError("model: row " + std::to_string(r) +
                          " has a non-finite coefficient");
      prev = row.idx[k];
    }
    if (!std::isfinite(row.rhs))
      throw DomainError("model: row " + std::to_string(r) + " has non-finite rhs");
  }
}

double relative_gap(double objective, double best_bound) {
  if (!std::isfinite(objective) || !std::isfinite(best_bound)) return kInf;
  return std::abs(objective - best_bound) / std::max(1.0, std::abs(objective));
}

}  // namespace flexcomm
