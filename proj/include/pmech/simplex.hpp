// Copyright 2026 The pmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense two-phase simplex for small standard-form LPs:
//   minimize c^T x  subject to  A x = b,  x >= 0.
// Bland's rule (lowest index enters, lowest basic index leaves on ties)
// guarantees termination on degenerate problems.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pmech/errors.hpp"

namespace pmech {

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

class DenseSimplex {
 public:
  DenseSimplex(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c,
               double tol = 1e-11)
      : m_(a.size()), n_(c.size()), tol_(tol), c_(std::move(c)) {
    if (b.size() != m_) throw ValidationError("lp: |b| must equal the number of rows");
    cols_ = n_ + m_ + 1;
    t_.assign((m_ + 1) * cols_, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_) throw ValidationError("lp: ragged constraint matrix");
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * a[i][j];
      at(i, n_ + i) = 1.0;
      rhs(i) = sign * b[i];
      basis_[i] = n_ + i;
    }
    active_.assign(m_, true);
  }

  LpSolution solve() {
    LpSolution sol;
    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j < cols_; ++j) obj(j) = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) obj(j) -= at(i, j);
      obj(cols_ - 1) -= rhs(i);
    }
    if (!iterate(n_ + m_, sol.pivots)) {
      sol.status = LpSolution::Status::unbounded;  // cannot happen in phase 1
      return sol;
    }
    if (-obj(cols_ - 1) > 1e-9) {
      sol.status = LpSolution::Status::infeasible;
      return sol;
    }
    drive_out_artificials(sol.pivots);

    // Phase 2 on the original costs; artificial columns may not re-enter.
    for (std::size_t j = 0; j < cols_; ++j) obj(j) = j < n_ ? c_[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] >= n_) continue;
      const double cb = c_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) obj(j) -= cb * at(i, j);
    }
    if (!iterate(n_, sol.pivots)) {
      sol.status = LpSolution::Status::unbounded;
      return sol;
    }
    sol.status = LpSolution::Status::optimal;
    sol.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (active_[i] && basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, rhs(i));
    for (std::size_t j = 0; j < n_; ++j) sol.objective += c_[j] * sol.x[j];
    return sol;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double& rhs(std::size_t i) { return t_[i * cols_ + cols_ - 1]; }
  double& obj(std::size_t j) { return t_[m_ * cols_ + j]; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      if (i < m_ && !active_[i]) continue;
      const double f = t_[i * cols_ + c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) t_[i * cols_ + j] -= f * at(r, j);
    }
    basis_[r] = c;
  }

  // Returns false if unbounded.
  bool iterate(std::size_t allowed_cols, std::size_t& pivots) {
    const std::size_t limit = 50'000;
    for (std::size_t it = 0; it < limit; ++it) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (obj(j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i]) continue;
        const double a = at(i, enter);
        if (a <= tol_) continue;
        const double ratio = rhs(i) / a;
        const bool tie = std::abs(ratio - best) <= tol_;
        if (leave == m_ || (!tie && ratio < best) || (tie && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      ++pivots;
    }
    throw SolverError("lp: iteration limit reached");
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col < n_) {
        pivot(i, col);
        ++pivots;
      } else {
        active_[i] = false;  // redundant equality
      }
    }
  }

  std::size_t m_, n_, cols_ = 0;
  double tol_;
  std::vector<double> c_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

inline LpSolution solve_lp(std::vector<std::vector<double>> a, std::vector<double> b,
                           std::vector<double> c, double tol = 1e-11) {
  return DenseSimplex(std::move(a), std::move(b), std::move(c), tol).solve();
}

}  // namespace pmech
