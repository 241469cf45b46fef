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

/// Perfect-privacy utility g0 under the chain X - Y - U.
///
/// With U generated from Y alone and I(U;X) = 0, every posterior P_{Y|U=u}
/// lies in the polytope {v >= 0, sum v = 1, P_{X|Y} v = P_X}, and P_Y is their
/// mixture. g0 = H(Y) - min sum_u w_u H(P_{Y|U=u}) over such mixtures. The
/// objective is concave in each posterior, so the minimum is attained with
/// posteriors at polytope vertices; it then becomes an LP over vertex weights.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "pmech/errors.hpp"
#include "pmech/probability.hpp"
#include "pmech/simplex.hpp"

namespace pmech {

struct PerfectPrivacyPolytope {
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  /// Columns of P_{X|Y} kept (P_Y(y) > 0).
  std::vector<std::size_t> support;
  /// constraint[x][k] = P_{X|Y}(x | support[k]).
  std::vector<std::vector<double>> constraint;
  std::vector<double> target;
  /// Vertices as pmfs over the full Y alphabet.
  std::vector<std::vector<double>> vertices;
  std::size_t rank = 0;
};

struct Decomposition {
  std::vector<double> weights;
  std::vector<std::vector<double>> pmfs;
  double utility = 0.0;
  double residual = 0.0;
};

struct PerfectPrivacyResult {
  double value = 0.0;
  Decomposition witness;
};

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k, auto&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

}  // namespace detail

/// Basic feasible solutions of the perfect-privacy polytope.
inline PerfectPrivacyPolytope enumerate_vertices(const JointPmf& j, std::size_t vertex_cap = 12) {
  PerfectPrivacyPolytope poly;
  poly.x_size = j.x_size();
  poly.y_size = j.y_size();
  for (std::size_t y = 0; y < j.y_size(); ++y)
    if (j.py()[y] > 0.0) poly.support.push_back(y);
  const std::size_t m = poly.support.size();
  if (m > vertex_cap) {
    std::ostringstream os;
    os << "perfect-privacy polytope: " << m << " Y symbols with positive mass exceed vertex_cap = "
       << vertex_cap << "; raise the cap (cost grows as C(|Y|, rank)) or merge Y symbols";
    throw SizeError(os.str());
  }
  poly.target = j.px();
  poly.constraint.assign(j.x_size(), std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const auto col = j.x_given_y(poly.support[k]);
    for (std::size_t x = 0; x < j.x_size(); ++x) poly.constraint[x][k] = col[x];
  }

  // Equality system [P_{X|Y}; 1^T] v = [P_X; 1].
  const std::size_t rows = j.x_size() + 1;
  Eigen::MatrixXd a(rows, m);
  Eigen::VectorXd b(rows);
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    for (std::size_t k = 0; k < m; ++k) a(x, k) = poly.constraint[x][k];
    b(x) = poly.target[x];
  }
  a.row(rows - 1).setOnes();
  b(rows - 1) = 1.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> row_qr(a.transpose());
  row_qr.setThreshold(1e-10);
  const auto r = static_cast<std::size_t>(row_qr.rank());
  poly.rank = r;
  std::vector<Eigen::Index> basis_rows(r);
  for (std::size_t i = 0; i < r; ++i) basis_rows[i] = row_qr.colsPermutation().indices()(i);
  Eigen::MatrixXd ar(r, m);
  Eigen::VectorXd br(r);
  for (std::size_t i = 0; i < r; ++i) {
    ar.row(i) = a.row(basis_rows[i]);
    br(i) = b(basis_rows[i]);
  }

  detail::for_each_subset(m, r, [&](const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd bmat(r, r);
    for (std::size_t c = 0; c < r; ++c) bmat.col(c) = ar.col(cols[c]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
    lu.setThreshold(1e-10);
    if (static_cast<std::size_t>(lu.rank()) < r) return;
    const Eigen::VectorXd vs = lu.solve(br);
    if (vs.minCoeff() < -1e-10) return;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    for (std::size_t c = 0; c < r; ++c) v(cols[c]) = std::abs(vs(c)) < 1e-12 ? 0.0 : std::max(0.0, vs(c));
    v /= v.sum();
    if ((a * v - b).cwiseAbs().maxCoeff() > 1e-9) return;
    std::vector<double> full(j.y_size(), 0.0);
    for (std::size_t k = 0; k < m; ++k) full[poly.support[k]] = v(k);
    for (const auto& existing : poly.vertices) {
      double d = 0.0;
      for (std::size_t y = 0; y < full.size(); ++y) d = std::max(d, std::abs(existing[y] - full[y]));
      if (d <= 1e-9) return;
    }
    poly.vertices.push_back(std::move(full));
  });
  if (poly.vertices.empty()) throw SolverError("perfect-privacy polytope: no vertex found");
  return poly;
}

/// g0 from an enumerated polytope: LP over vertex weights.
inline PerfectPrivacyResult g0(const PerfectPrivacyPolytope& poly, std::span<const double> py,
                               const InfoConfig& cfg = {}) {
  const std::size_t nv = poly.vertices.size();
  const double h_y = entropy(py, cfg);
  PerfectPrivacyResult res;
  if (nv == 1) {
    // Only the trivial decomposition P_Y = P_Y exists.
    res.witness.weights = {1.0};
    res.witness.pmfs = poly.vertices;
    res.witness.utility = 0.0;
    for (std::size_t y = 0; y < py.size(); ++y)
      res.witness.residual = std::max(res.witness.residual, std::abs(poly.vertices[0][y] - py[y]));
    res.value = 0.0;
    return res;
  }
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (auto y : poly.support) {
    std::vector<double> row(nv);
    for (std::size_t v = 0; v < nv; ++v) row[v] = poly.vertices[v][y];
    a.push_back(std::move(row));
    b.push_back(py[y]);
  }
  a.emplace_back(nv, 1.0);
  b.push_back(1.0);
  std::vector<double> cost(nv);
  const double lb = std::log(cfg.log_base);
  for (std::size_t v = 0; v < nv; ++v) cost[v] = detail::entropy_nats(poly.vertices[v]) / lb;

  const auto sol = solve_lp(std::move(a), std::move(b), cost);
  if (sol.status != LpSolution::Status::optimal) {
    throw SolverError("g0: decomposition LP is not optimal (numerically infeasible vertex set)");
  }
  std::vector<double> recon(py.size(), 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (sol.x[v] <= 0.0) continue;
    res.witness.weights.push_back(sol.x[v]);
    res.witness.pmfs.push_back(poly.vertices[v]);
    for (std::size_t y = 0; y < py.size(); ++y) recon[y] += sol.x[v] * poly.vertices[v][y];
  }
  for (std::size_t y = 0; y < py.size(); ++y)
    res.witness.residual = std::max(res.witness.residual, std::abs(recon[y] - py[y]));
  if (res.witness.residual > 1e-9) {
    std::ostringstream os;
    os << "g0: witness reconstruction residual " << res.witness.residual << " exceeds 1e-9";
    throw SolverError(os.str());
  }
  res.value = std::max(0.0, h_y - sol.objective);
  res.witness.utility = res.value;
  return res;
}

inline PerfectPrivacyResult g0(const JointPmf& j, const InfoConfig& cfg = {},
                               std::size_t vertex_cap = 12) {
  return g0(enumerate_vertices(j, vertex_cap), j.py(), cfg);
}

}  // namespace pmech
