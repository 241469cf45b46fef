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

/// Separation of a finite variable X into a pair (X1, X2).
///
/// A representation assigns every symbol x a distinct cell (x1, x2) of an
/// n1 x n2 grid. When |X| has no factorization with both factors >= 2 the
/// grid has |X| + 1 cells and exactly one cell stays unassigned (mass zero).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pmech/errors.hpp"
#include "pmech/probability.hpp"

namespace pmech {

struct FactorPair {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool padded = false;

  friend bool operator==(const FactorPair&, const FactorPair&) = default;
};

namespace detail {

inline std::vector<FactorPair> exact_factor_pairs(std::size_t n, bool padded) {
  std::vector<FactorPair> out;
  for (std::size_t n1 = n / 2; n1 >= 2; --n1) {
    if (n % n1 == 0 && n / n1 >= 2) out.push_back({n1, n / n1, padded});
  }
  return out;
}

}  // namespace detail

/// Ordered pairs (n1, n2), both >= 2, with n1 * n2 = n in descending n1. Falls
/// back to the pairs of n + 1 (flagged padded) when n has none.
inline std::vector<FactorPair> factor_pairs(std::size_t n) {
  if (n < 2) return {};
  auto pairs = detail::exact_factor_pairs(n, false);
  if (pairs.empty()) pairs = detail::exact_factor_pairs(n + 1, true);
  return pairs;
}

struct Representation {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  /// cell[x] = x1 * n2 + x2 (0-based).
  std::vector<std::size_t> cell;
  bool padded = false;

  std::size_t x_size() const { return cell.size(); }
  std::size_t x1(std::size_t x) const { return cell.at(x) / n2; }
  std::size_t x2(std::size_t x) const { return cell.at(x) % n2; }

  /// The cell left unassigned by a padded representation.
  std::optional<std::size_t> unassigned_cell() const {
    if (!padded) return std::nullopt;
    std::vector<bool> used(n1 * n2, false);
    for (auto c : cell) used[c] = true;
    for (std::size_t c = 0; c < used.size(); ++c)
      if (!used[c]) return c;
    return std::nullopt;
  }

  friend bool operator==(const Representation&, const Representation&) = default;
};

/// Checks the bijection invariants against an alphabet of `x_size` symbols.
inline void validate_representation(const Representation& rep, std::size_t x_size) {
  if (rep.n1 < 2 || rep.n2 < 2) throw ValidationError("representation: factors must be >= 2");
  if (rep.cell.size() != x_size) {
    throw ValidationError("representation: assignment length does not match |X|");
  }
  const std::size_t cells = rep.n1 * rep.n2;
  if (cells != x_size + (rep.padded ? 1 : 0)) {
    throw ValidationError(rep.padded ? "representation: padded grid must have |X|+1 cells"
                                     : "representation: grid must have |X| cells");
  }
  std::vector<bool> used(cells, false);
  for (auto c : rep.cell) {
    if (c >= cells) throw ValidationError("representation: cell index out of range");
    if (used[c]) throw ValidationError("representation: assignment is not injective");
    used[c] = true;
  }
}

/// Row-major assignment x -> (x / n2, x % n2); padded grids leave the last cell.
inline Representation row_major(const FactorPair& pair, std::size_t x_size) {
  Representation rep{pair.n1, pair.n2, std::vector<std::size_t>(x_size), pair.padded};
  std::iota(rep.cell.begin(), rep.cell.end(), std::size_t{0});
  validate_representation(rep, x_size);
  return rep;
}

/// X2-major assignment x -> (x % n1, x / n1).
inline Representation column_major(const FactorPair& pair, std::size_t x_size) {
  Representation rep{pair.n1, pair.n2, std::vector<std::size_t>(x_size), pair.padded};
  for (std::size_t x = 0; x < x_size; ++x) rep.cell[x] = (x % pair.n1) * pair.n2 + x / pair.n1;
  validate_representation(rep, x_size);
  return rep;
}

/// Law of (X1, X2, Y) induced by a representation; axes are (X1, X2, Y).
struct SeparatedJoint {
  Representation rep;
  TripletPmf law;
};

inline SeparatedJoint build_representation(const JointPmf& j, const Representation& rep) {
  validate_representation(rep, j.x_size());
  std::vector<double> p(rep.n1 * rep.n2 * j.y_size(), 0.0);
  for (std::size_t x = 0; x < j.x_size(); ++x)
    for (std::size_t y = 0; y < j.y_size(); ++y) p[rep.cell[x] * j.y_size() + y] = j(x, y);
  return {rep, TripletPmf({rep.n1, rep.n2, j.y_size()}, std::move(p))};
}

inline SeparatedJoint build_representation(const JointPmf& j, const FactorPair& pair,
                                           std::vector<std::size_t> cell) {
  return build_representation(j, Representation{pair.n1, pair.n2, std::move(cell), pair.padded});
}

/// Inverse of build_representation: collapse (X1, X2) back to X.
inline JointPmf merge(const SeparatedJoint& s) {
  const auto& rep = s.rep;
  const std::size_t ny = s.law.size(2);
  if (rep.padded) {
    const auto free_cell = *rep.unassigned_cell();
    for (std::size_t y = 0; y < ny; ++y) {
      if (s.law(free_cell / rep.n2, free_cell % rep.n2, y) != 0.0) {
        throw ValidationError("representation: padded cell carries positive mass");
      }
    }
  }
  std::vector<double> p(rep.x_size() * ny);
  for (std::size_t x = 0; x < rep.x_size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) p[x * ny + y] = s.law(rep.x1(x), rep.x2(x), y);
  return JointPmf(rep.x_size(), ny, std::move(p));
}

/// Entropies of the X2 coordinate that the bounds need.
struct X2Entropies {
  double h_x2 = 0.0;
  double h_x2_given_y = 0.0;
};

inline X2Entropies x2_entropies(const JointPmf& j, const Representation& rep,
                                const InfoConfig& cfg = {}) {
  std::vector<double> p2(rep.n2, 0.0), p2y(rep.n2 * j.y_size(), 0.0);
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    const auto c = rep.x2(x);
    p2[c] += j.px()[x];
    for (std::size_t y = 0; y < j.y_size(); ++y) p2y[c * j.y_size() + y] += j(x, y);
  }
  const double lb = std::log(cfg.log_base);
  X2Entropies e;
  e.h_x2 = detail::entropy_nats(p2) / lb;
  e.h_x2_given_y =
      std::max(0.0, (detail::entropy_nats(p2y) - detail::entropy_nats(j.py())) / lb);
  return e;
}

enum class AssignmentPolicy { exhaustive, canonical };

inline const char* to_string(AssignmentPolicy p) {
  return p == AssignmentPolicy::exhaustive ? "exhaustive" : "canonical";
}

struct RepresentationSet {
  std::vector<Representation> members;
  AssignmentPolicy requested = AssignmentPolicy::exhaustive;
  AssignmentPolicy used = AssignmentPolicy::exhaustive;
  std::size_t exhaustive_cap = 8;
};

namespace detail {

inline void for_each_exhaustive(const FactorPair& pair, std::size_t x_size, auto&& visit) {
  std::vector<std::size_t> perm(pair.n1 * pair.n2);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    Representation rep{pair.n1, pair.n2, {perm.begin(), perm.begin() + x_size}, pair.padded};
    visit(std::move(rep));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline std::vector<Representation> canonical_candidates(const JointPmf& j,
                                                        const FactorPair& pair) {
  const std::size_t n = j.x_size();
  std::vector<std::size_t> by_mass(n);
  std::iota(by_mass.begin(), by_mass.end(), std::size_t{0});
  std::stable_sort(by_mass.begin(), by_mass.end(),
                   [&](std::size_t a, std::size_t b) { return j.px()[a] > j.px()[b]; });

  std::vector<Representation> out;
  auto add = [&](Representation rep) {
    if (std::find(out.begin(), out.end(), rep) == out.end()) out.push_back(std::move(rep));
  };
  const auto rm = row_major(pair, n);
  const auto cm = column_major(pair, n);
  add(rm);
  add(cm);
  // Same layouts applied to symbols ranked by probability.
  for (const auto* base : {&rm, &cm}) {
    Representation sorted = *base;
    for (std::size_t rank = 0; rank < n; ++rank) sorted.cell[by_mass[rank]] = base->cell[rank];
    add(std::move(sorted));
  }
  return out;
}

}  // namespace detail

/// Members of S_X usable at leakage `epsilon`: H(X2) > 0 and H(X2) >= epsilon.
/// `exhaustive` enumerates every assignment when |X| <= exhaustive_cap and
/// otherwise falls back to the canonical heuristic subset.
inline RepresentationSet enumerate_representations(const JointPmf& j, double epsilon,
                                                   AssignmentPolicy policy,
                                                   const InfoConfig& cfg = {},
                                                   std::size_t exhaustive_cap = 8) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  RepresentationSet set;
  set.requested = policy;
  set.exhaustive_cap = exhaustive_cap;
  set.used = (policy == AssignmentPolicy::exhaustive && j.x_size() <= exhaustive_cap)
                 ? AssignmentPolicy::exhaustive
                 : AssignmentPolicy::canonical;

  auto keep = [&](Representation rep) {
    const auto e = x2_entropies(j, rep, cfg);
    if (e.h_x2 > 1e-12 && e.h_x2 >= epsilon) set.members.push_back(std::move(rep));
  };
  for (const auto& pair : factor_pairs(j.x_size())) {
    if (set.used == AssignmentPolicy::exhaustive) {
      detail::for_each_exhaustive(pair, j.x_size(), keep);
    } else {
      for (auto& rep : detail::canonical_candidates(j, pair)) keep(std::move(rep));
    }
  }
  return set;
}

}  // namespace pmech
