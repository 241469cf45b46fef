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

/// Randomized lower estimate of h_eps(P_XY) on tiny instances. Every probed
/// kernel P_{U|X,Y} is made feasible by mixing it with a constant-U kernel
/// (leakage is convex in the mixing weight and vanishes at weight 1), so the
/// returned value is always achievable.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pmech/errors.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/probability.hpp"
#include "pmech/random.hpp"

namespace pmech {

struct OracleOptions {
  std::size_t u_cap = 4;
  std::size_t budget = 20000;
  std::uint64_t seed = 1;
  /// Restrict to kernels P_{U|Y} (Markov chain X - Y - U).
  bool markov_only = false;
  /// Best random kernels handed to local improvement.
  std::size_t refine_top = 4;
  double min_step = 1e-4;
};

struct OracleResult {
  double value = 0.0;
  double leakage = 0.0;
  Mechanism mechanism;
  std::size_t kernels_probed = 0;
};

namespace detail {

class KernelSearch {
 public:
  KernelSearch(const JointPmf& j, double epsilon_nats, const OracleOptions& opt)
      : j_(j), eps_nats_(epsilon_nats), opt_(opt), nx_(j.x_size()), ny_(j.y_size()),
        nu_(opt.u_cap), rows_(opt.markov_only ? ny_ : nx_ * ny_) {}

  std::size_t rows() const { return rows_; }
  std::size_t nu() const { return nu_; }

  struct Point {
    std::vector<double> k;  // rows_ x nu_
    double util = -1.0;
    double leak = 0.0;
  };

  /// Conditional tables P(u|x) and P(u|y) of kernel k mixed toward u0 by lambda.
  void conditionals(const std::vector<double>& k, std::vector<double>& qx,
                    std::vector<double>& qy) const {
    qx.assign(nx_ * nu_, 0.0);
    qy.assign(ny_ * nu_, 0.0);
    const auto px = j_.px();
    const auto py = j_.py();
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t y = 0; y < ny_; ++y) {
        const double p = j_(x, y);
        if (p == 0.0) continue;
        const double* row = &k[row_index(x, y) * nu_];
        for (std::size_t u = 0; u < nu_; ++u) {
          qx[x * nu_ + u] += p / px[x] * row[u];
          qy[y * nu_ + u] += p / py[y] * row[u];
        }
      }
  }

  /// I(U;X) or I(U;Y) in nats for P(u|a) = (1 - lambda) q + lambda [u = u0].
  static double mi(std::span<const double> pa, const std::vector<double>& q, std::size_t nu,
                   double lambda, std::size_t u0) {
    std::vector<double> pu(nu, 0.0);
    const std::size_t na = pa.size();
    auto cond = [&](std::size_t a, std::size_t u) {
      return (1.0 - lambda) * q[a * nu + u] + (u == u0 ? lambda : 0.0);
    };
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t u = 0; u < nu; ++u) pu[u] += pa[a] * cond(a, u);
    double v = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      if (pa[a] == 0.0) continue;
      for (std::size_t u = 0; u < nu; ++u) {
        const double c = cond(a, u);
        if (c > 0.0) v += pa[a] * c * std::log(c / pu[u]);
      }
    }
    return std::max(0.0, v);
  }

  /// Smallest mixing weight toward some constant symbol that meets the
  /// leakage cap; the result is written back into `pt`.
  void project(Point& pt) const {
    std::vector<double> qx, qy;
    conditionals(pt.k, qx, qy);
    const auto px = j_.px();
    const auto py = j_.py();
    if (mi(px, qx, nu_, 0.0, 0) <= eps_nats_) {
      pt.leak = mi(px, qx, nu_, 0.0, 0);
      pt.util = mi(py, qy, nu_, 0.0, 0);
      return;
    }
    double best_util = -1.0, best_lambda = 1.0, best_leak = 0.0;
    std::size_t best_u0 = 0;
    for (std::size_t u0 = 0; u0 < nu_; ++u0) {
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (mi(px, qx, nu_, mid, u0) <= eps_nats_ ? hi : lo) = mid;
      }
      const double util = mi(py, qy, nu_, hi, u0);
      if (util > best_util) {
        best_util = util;
        best_lambda = hi;
        best_u0 = u0;
        best_leak = mi(px, qx, nu_, hi, u0);
      }
    }
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t u = 0; u < nu_; ++u) {
        double& v = pt.k[r * nu_ + u];
        v = (1.0 - best_lambda) * v + (u == best_u0 ? best_lambda : 0.0);
      }
    pt.util = best_util;
    pt.leak = best_leak;
  }

  Point random_point(Rng& rng) const {
    Point pt;
    pt.k.resize(rows_ * nu_);
    std::bernoulli_distribution sparse(0.5);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto row = sample_dirichlet(nu_, sparse(rng) ? 0.1 : 1.0, rng);
      std::copy(row.begin(), row.end(), pt.k.begin() + static_cast<std::ptrdiff_t>(r * nu_));
    }
    project(pt);
    return pt;
  }

  /// Pairwise mass moves within each row, halving the step when a sweep
  /// brings no gain.
  void improve(Point& pt) const {
    double step = 0.5;
    while (step >= opt_.min_step) {
      bool gained = false;
      for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t from = 0; from < nu_; ++from)
          for (std::size_t to = 0; to < nu_; ++to) {
            if (from == to) continue;
            const double m = std::min(step, pt.k[r * nu_ + from]);
            if (m <= 0.0) continue;
            Point cand = pt;
            cand.k[r * nu_ + from] -= m;
            cand.k[r * nu_ + to] += m;
            project(cand);
            if (cand.util > pt.util + 1e-13) {
              pt = std::move(cand);
              gained = true;
            }
          }
      if (!gained) step *= 0.5;
    }
  }

  std::size_t row_index(std::size_t x, std::size_t y) const {
    return opt_.markov_only ? y : x * ny_ + y;
  }

  Mechanism to_mechanism(const Point& pt, double epsilon, double log_base) const {
    std::vector<double> kernel(nx_ * ny_ * nu_), p(nx_ * ny_ * nu_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t y = 0; y < ny_; ++y)
        for (std::size_t u = 0; u < nu_; ++u) {
          const double k = pt.k[row_index(x, y) * nu_ + u];
          kernel[(x * ny_ + y) * nu_ + u] = k;
          p[(x * ny_ + y) * nu_ + u] = j_(x, y) * k;
        }
    Mechanism m{nx_, ny_, nu_, std::move(kernel), TripletPmf({nx_, ny_, nu_}, std::move(p)),
                Flavor::exact, {}, std::nullopt};
    m.provenance.construction = Construction::custom;
    m.provenance.epsilon = epsilon;
    m.provenance.log_base = log_base;
    return m;
  }

 private:
  const JointPmf& j_;
  double eps_nats_;
  OracleOptions opt_;
  std::size_t nx_, ny_, nu_, rows_;
};

}  // namespace detail

/// Best feasible I(Y;U) found; a lower estimate of h_eps, never above it.
inline OracleResult estimate_h_eps(const JointPmf& j, double epsilon,
                                   const OracleOptions& opt = {}, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  if (j.x_size() * j.y_size() > 12) {
    std::ostringstream os;
    os << "oracle: |X||Y| = " << j.x_size() * j.y_size() << " exceeds 12";
    throw SizeError(os.str());
  }
  if (opt.u_cap > 6) throw SizeError("oracle: u_cap exceeds 6");
  if (opt.u_cap < 1) throw ValidationError("oracle: u_cap must be >= 1");
  if (opt.budget < 1) throw ValidationError("oracle: budget must be >= 1");
  if (!(epsilon >= 0.0)) throw ValidationError("oracle: epsilon must be >= 0");

  // Bisection stops on the feasible side; the cap is shaved so roundoff in
  // the final audit cannot push leakage past epsilon.
  detail::KernelSearch search(j, std::max(0.0, epsilon * std::log(cfg.log_base) - 1e-12), opt);

  auto rng = make_rng(opt.seed, 0);
  std::vector<detail::KernelSearch::Point> top;
  auto by_util = [](const auto& a, const auto& b) { return a.util > b.util; };
  for (std::size_t i = 0; i < opt.budget; ++i) {
    auto pt = search.random_point(rng);
    if (top.size() < std::max<std::size_t>(opt.refine_top, 1)) {
      top.push_back(std::move(pt));
      std::sort(top.begin(), top.end(), by_util);
    } else if (pt.util > top.back().util) {
      top.back() = std::move(pt);
      std::sort(top.begin(), top.end(), by_util);
    }
  }
  for (std::size_t i = 0; i < std::min(opt.refine_top, top.size()); ++i) search.improve(top[i]);
  std::sort(top.begin(), top.end(), by_util);

  auto m = search.to_mechanism(top.front(), epsilon, cfg.log_base);
  const double value = mutual_information(m.induced, kY, kU, cfg);
  const double leakage = mutual_information(m.induced, kX, kU, cfg);
  return OracleResult{value, leakage, std::move(m), opt.budget};
}

}  // namespace pmech
