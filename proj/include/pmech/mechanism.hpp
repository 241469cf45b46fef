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

// Mechanism: a channel P_{U|X,Y} together with the law of (X, Y, U) it
// induces, plus enough provenance to rebuild or resample it.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmech/probability.hpp"
#include "pmech/separation.hpp"

namespace pmech {

enum class Flavor { exact, empirical };
enum class Construction { frl, sfrl, efrl, esfrl, separated, custom };
enum class Arithmetic { floating, rational };

inline const char* to_string(Flavor f) { return f == Flavor::exact ? "exact" : "empirical"; }
inline const char* to_string(Arithmetic a) {
  return a == Arithmetic::floating ? "float" : "rational";
}
inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::frl: return "frl";
    case Construction::sfrl: return "sfrl";
    case Construction::efrl: return "efrl";
    case Construction::esfrl: return "esfrl";
    case Construction::separated: return "separated";
    case Construction::custom: return "custom";
  }
  return "custom";
}

/// Two-point channel W: copies the source symbol s(x) with probability
/// alpha, otherwise emits the sentinel `constant()` (one past the source
/// alphabet, so it differs from every source symbol).
struct RandomizedResponse {
  enum class Source { x, x2 };
  Source source = Source::x;
  double alpha = 0.0;
  std::size_t source_size = 0;
  /// source_of_x[x] = symbol W copies when X = x.
  std::vector<std::size_t> source_of_x;

  std::size_t constant() const { return source_size; }
  std::size_t w_size() const { return source_size + 1; }
  double prob(std::size_t w, std::size_t x) const {
    if (w == constant()) return 1.0 - alpha;
    return w == source_of_x[x] ? alpha : 0.0;
  }
};

inline const char* to_string(RandomizedResponse::Source s) {
  return s == RandomizedResponse::Source::x ? "X" : "X2";
}

/// Index K of the selected Poisson-process point, summarized over the codebook.
struct IndexDiagnostics {
  std::uint64_t k_max = 0;
  std::uint64_t k_p999 = 0;
  double tail_mass = 0.0;
  double mean_candidates = 0.0;
};

/// Codebook behind an empirical mechanism: base symbol u corresponds to the
/// map x -> maps[u][x] and was drawn counts[u] times out of `budget`.
struct SamplingRecord {
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
  std::vector<std::vector<std::size_t>> maps;
  std::vector<std::uint64_t> counts;
  IndexDiagnostics diagnostics;
};

struct Provenance {
  Construction construction = Construction::custom;
  Arithmetic arithmetic = Arithmetic::floating;
  std::vector<std::size_t> y_order;
  double epsilon = 0.0;
  double log_base = 2.0;
  std::optional<RandomizedResponse> response;
  std::optional<Representation> representation;
};

struct Mechanism {
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  std::size_t u_size = 0;
  /// kernel[(x * y_size + y) * u_size + u] = P(U = u | X = x, Y = y).
  std::vector<double> kernel;
  TripletPmf induced;
  Flavor flavor = Flavor::exact;
  Provenance provenance;
  std::optional<SamplingRecord> sampling;

  double kernel_at(std::size_t x, std::size_t y, std::size_t u) const {
    return kernel[(x * y_size + y) * u_size + u];
  }

  /// Number of U symbols with positive probability.
  std::size_t support_size() const {
    const auto pu = induced.marginal(kU);
    return static_cast<std::size_t>(
        std::count_if(pu.begin(), pu.end(), [](double v) { return v > 0.0; }));
  }
};

/// Base mechanism plus the randomized response appended to it.
struct ExtendedMechanism {
  Mechanism base;
  RandomizedResponse response;
  Mechanism composite;
  double target_epsilon = 0.0;
};

/// Kernel implied by an induced law; rows of zero-mass (x, y) get P_U.
inline std::vector<double> kernel_from_induced(const TripletPmf& t) {
  const auto [nx, ny, nu] = t.dims();
  const auto pu = t.marginal(kU);
  std::vector<double> k(nx * ny * nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      double row = 0.0;
      for (std::size_t u = 0; u < nu; ++u) row += t(x, y, u);
      for (std::size_t u = 0; u < nu; ++u)
        k[(x * ny + y) * nu + u] = row > 0.0 ? t(x, y, u) / row : pu[u];
    }
  return k;
}

/// Composite U = (Ubar, W) indexed ubar * w_size + w; W drawn from P(w | x)
/// independently of Ubar given (X, Y).
inline Mechanism compose_with_response(const Mechanism& base, const RandomizedResponse& rr,
                                       Construction construction, double epsilon) {
  const std::size_t nx = base.x_size, ny = base.y_size, nb = base.u_size, nw = rr.w_size();
  const std::size_t nu = nb * nw;
  std::vector<double> p(nx * ny * nu, 0.0), k(nx * ny * nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t b = 0; b < nb; ++b) {
        const double pb = base.induced(x, y, b), kb = base.kernel_at(x, y, b);
        for (std::size_t w = 0; w < nw; ++w) {
          const double pw = rr.prob(w, x);
          const std::size_t idx = (x * ny + y) * nu + b * nw + w;
          p[idx] = pb * pw;
          k[idx] = kb * pw;
        }
      }
  Mechanism m{nx, ny, nu, std::move(k), TripletPmf({nx, ny, nu}, std::move(p)), base.flavor,
              base.provenance, base.sampling};
  m.provenance.construction = construction;
  m.provenance.epsilon = epsilon;
  m.provenance.response = rr;
  return m;
}

}  // namespace pmech
