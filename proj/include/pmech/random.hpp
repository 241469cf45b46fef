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

// Seeded streams and the small set of samplers the constructions and
// generators need.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pmech/probability.hpp"

namespace pmech {

using Rng = std::mt19937_64;

/// Independent stream `stream` derived from `seed`.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x70u};
  return Rng(seq);
}

inline std::vector<double> sample_dirichlet(std::size_t n, double concentration, Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  do {
    sum = 0.0;
    for (auto& x : v) {
      x = gamma(rng);
      sum += x;
    }
  } while (!(sum > 0.0));
  for (auto& x : v) x /= sum;
  return v;
}

/// Random joint with a Dirichlet(concentration) table.
inline JointPmf random_joint(std::size_t x_size, std::size_t y_size, Rng& rng,
                             double concentration = 1.0) {
  return JointPmf(x_size, y_size, sample_dirichlet(x_size * y_size, concentration, rng));
}

/// Index drawn from `cumulative` (nondecreasing, last entry 1) by inversion.
inline std::size_t sample_index(std::span<const double> cumulative, double u) {
  std::size_t i = 0;
  while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
  return i;
}

/// Multinomial(n, p) by sequential conditional binomials.
inline std::vector<std::uint64_t> sample_multinomial(std::uint64_t n, std::span<const double> p,
                                                     Rng& rng) {
  std::vector<std::uint64_t> out(p.size(), 0);
  double remaining_mass = 1.0;
  std::uint64_t remaining = n;
  for (std::size_t i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double q = remaining_mass > 0.0 ? std::clamp(p[i] / remaining_mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> bin(remaining, q);
    out[i] = bin(rng);
    remaining -= out[i];
    remaining_mass -= p[i];
  }
  if (!p.empty()) out.back() += remaining;
  return out;
}

}  // namespace pmech
