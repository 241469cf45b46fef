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

/// Base variables with I(U;X) = 0 and H(Y|U,X) = 0.
///
/// `synthesize_frl` builds the exact functional representation: each x
/// partitions [0, 1) into consecutive intervals of lengths P_{Y|X}(y|x) (in a
/// fixed y order), the partitions are refined into common atoms, U is the
/// atom containing a uniform point and Y is read off the interval of x that
/// contains the atom. Each x contributes at most |Y| - 1 interior cut points,
/// which gives at most |X|(|Y| - 1) + 1 atoms.
///
/// `synthesize_sfrl` realizes the Poisson functional representation with a
/// finite codebook: `sample_budget` independent realizations of a rate-one
/// Poisson process with marks Y_i ~ P_Y. For realization u and symbol x the
/// selected index is K = argmin_i T_i / r_x(Y_i), r_x = P_{Y|X=x} / P_Y, and
/// u maps x to Y_K. U is uniform over realizations (so independent of X), and
/// realizations inducing the same map x -> y are merged.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "pmech/errors.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/probability.hpp"
#include "pmech/random.hpp"

namespace pmech {

using Rational = boost::multiprecision::cpp_rational;

struct IntervalAtlas {
  Arithmetic arithmetic = Arithmetic::floating;
  std::vector<std::size_t> y_order;
  /// Cumulative sums of P_{Y|X}(.|x) in y order, |Y| + 1 entries; empty when P_X(x) = 0.
  std::vector<std::vector<double>> breakpoints;
  /// Merged atom boundaries from 0 to 1.
  std::vector<double> boundaries;
  std::vector<double> lengths;
  /// labels[u][x] = y whose interval under x contains atom u.
  std::vector<std::vector<std::size_t>> labels;

  std::size_t atom_count() const { return lengths.size(); }
};

namespace detail {

inline std::vector<std::size_t> checked_y_order(std::span<const std::size_t> order,
                                                std::size_t ny) {
  std::vector<std::size_t> out(order.begin(), order.end());
  if (out.empty()) {
    out.resize(ny);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  auto sorted = out;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < ny; ++i) {
    if (sorted.size() != ny || sorted[i] != i) throw ValidationError("y_order is not a permutation");
  }
  return out;
}

template <class Real>
Real exact_value(double v) {
  return Real(v);
}

template <class Real>
double as_double(const Real& v) {
  if constexpr (std::is_same_v<Real, double>) {
    return v;
  } else {
    return v.template convert_to<double>();
  }
}

template <class Real>
IntervalAtlas build_atlas(const JointPmf& j, std::vector<std::size_t> y_order, double merge_tol) {
  const std::size_t nx = j.x_size(), ny = j.y_size();
  std::vector<std::vector<Real>> cum(nx);
  std::vector<Real> all;
  for (std::size_t x = 0; x < nx; ++x) {
    if (!(j.px()[x] > 0.0)) continue;
    Real mass = 0;
    for (std::size_t y = 0; y < ny; ++y) mass += exact_value<Real>(j(x, y));
    Real acc = 0;
    cum[x].push_back(acc);
    for (std::size_t k = 0; k < ny; ++k) {
      acc += exact_value<Real>(j(x, y_order[k])) / mass;
      cum[x].push_back(acc);
    }
    cum[x].back() = Real(1);
    all.insert(all.end(), cum[x].begin(), cum[x].end());
  }
  std::sort(all.begin(), all.end());

  std::vector<Real> bounds;
  for (const auto& v : all) {
    if (bounds.empty()) {
      bounds.push_back(v);
    } else if constexpr (std::is_same_v<Real, double>) {
      if (v - bounds.back() > merge_tol) bounds.push_back(v);
    } else {
      if (v != bounds.back()) bounds.push_back(v);
    }
  }
  bounds.front() = Real(0);
  bounds.back() = Real(1);

  IntervalAtlas atlas;
  atlas.arithmetic = std::is_same_v<Real, double> ? Arithmetic::floating : Arithmetic::rational;
  atlas.y_order = y_order;
  atlas.breakpoints.resize(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (const auto& v : cum[x]) atlas.breakpoints[x].push_back(as_double(v));
  for (const auto& v : bounds) atlas.boundaries.push_back(as_double(v));

  for (std::size_t a = 0; a + 1 < bounds.size(); ++a) {
    const Real len = bounds[a + 1] - bounds[a];
    atlas.lengths.push_back(as_double(len));
    const Real mid = (bounds[a] + bounds[a + 1]) / 2;
    std::vector<std::size_t> label(nx, 0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (cum[x].empty()) continue;
      const auto it = std::upper_bound(cum[x].begin(), cum[x].end(), mid);
      const auto k = static_cast<std::size_t>(std::distance(cum[x].begin(), it)) - 1;
      label[x] = y_order[std::min(k, ny - 1)];
    }
    atlas.labels.push_back(std::move(label));
  }
  return atlas;
}

}  // namespace detail

inline IntervalAtlas build_interval_atlas(const JointPmf& j,
                                          std::span<const std::size_t> y_order = {},
                                          Arithmetic arithmetic = Arithmetic::floating,
                                          double merge_tol = 1e-12) {
  auto order = detail::checked_y_order(y_order, j.y_size());
  if (arithmetic == Arithmetic::rational) {
    return detail::build_atlas<Rational>(j, std::move(order), merge_tol);
  }
  return detail::build_atlas<double>(j, std::move(order), merge_tol);
}

/// Exact functional representation of Y given X.
inline Mechanism synthesize_frl(const JointPmf& j, std::span<const std::size_t> y_order = {},
                                Arithmetic arithmetic = Arithmetic::floating,
                                const InfoConfig& cfg = {}) {
  const auto atlas = build_interval_atlas(j, y_order, arithmetic);
  const std::size_t nx = j.x_size(), ny = j.y_size(), nu = atlas.atom_count();

  std::vector<double> p(nx * ny * nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    if (atlas.breakpoints[x].empty()) continue;
    for (std::size_t u = 0; u < nu; ++u)
      p[(x * ny + atlas.labels[u][x]) * nu + u] = j.px()[x] * atlas.lengths[u];
  }
  TripletPmf induced({nx, ny, nu}, std::move(p), cfg.tau_norm);
  auto kernel = kernel_from_induced(induced);

  Provenance prov;
  prov.construction = Construction::frl;
  prov.arithmetic = arithmetic;
  prov.y_order = atlas.y_order;
  prov.log_base = cfg.log_base;
  return Mechanism{nx, ny, nu, std::move(kernel), std::move(induced), Flavor::exact,
                   std::move(prov), std::nullopt};
}

struct SfrlOptions {
  std::uint64_t sample_budget = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t shards = 8;
};

namespace detail {

struct PfrTables {
  std::size_t nx = 0, ny = 0;
  std::vector<std::size_t> support_x;
  std::vector<std::size_t> support_y;
  std::vector<double> py_cumulative;          // over support_y
  std::vector<std::vector<double>> ratio;     // [support x][y]
  std::vector<double> ratio_max;              // per support x
  std::vector<std::uint64_t> radix;           // |Y|^x
};

inline PfrTables pfr_tables(const JointPmf& j) {
  PfrTables t;
  t.nx = j.x_size();
  t.ny = j.y_size();
  t.radix.resize(t.nx);
  std::uint64_t r = 1;
  for (std::size_t x = 0; x < t.nx; ++x) {
    t.radix[x] = r;
    if (x + 1 < t.nx && r > std::numeric_limits<std::uint64_t>::max() / t.ny) {
      throw SizeError("sfrl: |Y|^|X| does not fit a 64-bit codebook key");
    }
    r *= t.ny;
  }
  double acc = 0.0;
  for (std::size_t y = 0; y < t.ny; ++y) {
    if (j.py()[y] > 0.0) {
      t.support_y.push_back(y);
      acc += j.py()[y];
      t.py_cumulative.push_back(acc);
    }
  }
  for (auto& c : t.py_cumulative) c /= acc;
  t.py_cumulative.back() = 1.0;
  for (std::size_t x = 0; x < t.nx; ++x) {
    if (!(j.px()[x] > 0.0)) continue;
    t.support_x.push_back(x);
    std::vector<double> ratio(t.ny, 0.0);
    double best = 0.0;
    for (auto y : t.support_y) {
      ratio[y] = j(x, y) / (j.px()[x] * j.py()[y]);
      best = std::max(best, ratio[y]);
    }
    t.ratio.push_back(std::move(ratio));
    t.ratio_max.push_back(best);
  }
  return t;
}

struct ShardResult {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::vector<std::uint64_t> k_histogram;
  std::uint64_t candidates = 0;
};

inline ShardResult run_pfr_shard(const PfrTables& t, std::uint64_t n, Rng rng) {
  ShardResult out;
  std::exponential_distribution<double> arrival(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t ns = t.support_x.size();
  std::vector<double> best(ns);
  std::vector<std::size_t> best_y(ns);
  std::vector<std::uint64_t> best_k(ns);
  constexpr double inf = std::numeric_limits<double>::infinity();

  for (std::uint64_t s = 0; s < n; ++s) {
    std::fill(best.begin(), best.end(), inf);
    double time = 0.0, stop = inf;
    for (std::uint64_t i = 1;; ++i) {
      time += arrival(rng);
      // No later point can beat the current minimum once T_i exceeds it
      // scaled by the largest density ratio.
      if (time > stop) break;
      ++out.candidates;
      const std::size_t y = t.support_y[sample_index(t.py_cumulative, unif(rng))];
      bool improved = false;
      for (std::size_t k = 0; k < ns; ++k) {
        const double r = t.ratio[k][y];
        if (r > 0.0 && time / r < best[k]) {
          best[k] = time / r;
          best_y[k] = y;
          best_k[k] = i;
          improved = true;
        }
      }
      if (improved) {
        stop = 0.0;
        for (std::size_t k = 0; k < ns; ++k) stop = std::max(stop, best[k] * t.ratio_max[k]);
      }
    }
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < ns; ++k) {
      key += best_y[k] * t.radix[t.support_x[k]];
      if (out.k_histogram.size() <= best_k[k]) out.k_histogram.resize(best_k[k] + 1, 0);
      ++out.k_histogram[best_k[k]];
    }
    ++out.counts[key];
  }
  return out;
}

inline IndexDiagnostics index_diagnostics(const std::vector<std::uint64_t>& hist,
                                          std::uint64_t candidates, std::uint64_t budget) {
  IndexDiagnostics d;
  const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
  d.mean_candidates = budget ? static_cast<double>(candidates) / static_cast<double>(budget) : 0.0;
  if (total == 0) return d;
  std::uint64_t acc = 0;
  bool found = false;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (hist[k]) d.k_max = k;
    acc += hist[k];
    if (!found && static_cast<double>(acc) >= 0.999 * static_cast<double>(total)) {
      d.k_p999 = k;
      found = true;
    }
  }
  std::uint64_t tail = 0;
  for (std::size_t k = d.k_p999 + 1; k < hist.size(); ++k) tail += hist[k];
  d.tail_mass = static_cast<double>(tail) / static_cast<double>(total);
  return d;
}

/// Law of (X, Y, U) for a codebook with weights, optionally composed with a
/// randomized response (U = (Ubar, W)).
inline TripletPmf codebook_law(std::span<const double> px, std::size_t ny,
                               const std::vector<std::vector<std::size_t>>& maps,
                               std::span<const double> weights, const RandomizedResponse* rr,
                               double tau_norm = 1e-9) {
  const std::size_t nx = px.size(), nb = maps.size();
  const std::size_t nw = rr ? rr->w_size() : 1, nu = nb * nw;
  std::vector<double> p(nx * ny * nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      const double base = px[x] * weights[b];
      if (base == 0.0) continue;
      const std::size_t offset = (x * ny + maps[b][x]) * nu + b * nw;
      if (!rr) {
        p[offset] = base;
      } else {
        p[offset + rr->source_of_x[x]] = base * rr->alpha;
        p[offset + rr->constant()] = base * (1.0 - rr->alpha);
      }
    }
  }
  return TripletPmf({nx, ny, nu}, std::move(p), tau_norm);
}

inline std::vector<double> codebook_weights(const std::vector<std::uint64_t>& counts) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) w[i] = static_cast<double>(counts[i]) / total;
  return w;
}

}  // namespace detail

/// Draws the codebook only; shards run concurrently and merge by sorted key,
/// so the result depends on (budget, seed, shards) alone.
inline SamplingRecord sample_pfr_codebook(const JointPmf& j, const SfrlOptions& opt) {
  if (opt.sample_budget < 10'000) throw ValidationError("sfrl: sample_budget must be >= 1e4");
  if (opt.shards == 0) throw ValidationError("sfrl: shards must be >= 1");
  const auto tables = detail::pfr_tables(j);

  std::vector<std::future<detail::ShardResult>> jobs;
  for (std::size_t s = 0; s < opt.shards; ++s) {
    const std::uint64_t n = opt.sample_budget / opt.shards + (s < opt.sample_budget % opt.shards);
    jobs.push_back(std::async(std::launch::async, detail::run_pfr_shard, std::cref(tables), n,
                              make_rng(opt.seed, s)));
  }
  std::map<std::uint64_t, std::uint64_t> merged;
  std::vector<std::uint64_t> hist;
  std::uint64_t candidates = 0;
  for (auto& job : jobs) {
    auto r = job.get();
    for (const auto& [key, c] : r.counts) merged[key] += c;
    if (hist.size() < r.k_histogram.size()) hist.resize(r.k_histogram.size(), 0);
    for (std::size_t k = 0; k < r.k_histogram.size(); ++k) hist[k] += r.k_histogram[k];
    candidates += r.candidates;
  }

  SamplingRecord rec;
  rec.budget = opt.sample_budget;
  rec.seed = opt.seed;
  rec.shards = opt.shards;
  for (const auto& [key, c] : merged) {
    std::vector<std::size_t> map(j.x_size());
    std::uint64_t rest = key;
    for (std::size_t x = 0; x < j.x_size(); ++x) {
      map[x] = rest % j.y_size();
      rest /= j.y_size();
    }
    rec.maps.push_back(std::move(map));
    rec.counts.push_back(c);
  }
  rec.diagnostics = detail::index_diagnostics(hist, candidates, opt.sample_budget);
  return rec;
}

/// Mechanism defined by a codebook (and optional randomized response).
inline Mechanism codebook_mechanism(const JointPmf& j, SamplingRecord rec, Provenance prov,
                                    const InfoConfig& cfg = {}) {
  const auto weights = detail::codebook_weights(rec.counts);
  const RandomizedResponse* rr = prov.response ? &*prov.response : nullptr;
  auto induced = detail::codebook_law(j.px(), j.y_size(), rec.maps, weights, rr, cfg.tau_norm);
  auto kernel = kernel_from_induced(induced);
  const auto nu = induced.size(2);
  return Mechanism{j.x_size(), j.y_size(), nu, std::move(kernel), std::move(induced),
                   Flavor::empirical, std::move(prov), std::move(rec)};
}

/// Empirical strong functional representation (see file comment).
inline Mechanism synthesize_sfrl(const JointPmf& j, const SfrlOptions& opt = {},
                                 const InfoConfig& cfg = {}) {
  Provenance prov;
  prov.construction = Construction::sfrl;
  prov.log_base = cfg.log_base;
  return codebook_mechanism(j, sample_pfr_codebook(j, opt), std::move(prov), cfg);
}

}  // namespace pmech
