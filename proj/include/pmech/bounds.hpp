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

/// Upper bound U1 and lower bounds L1..L5 on the privacy-utility function
/// h_eps(P_XY) = sup { I(Y;U) : I(U;X) <= eps }.
///
/// With C = log(I(X;Y) + 1) + 4, alpha = eps / H(X) and, per representation
/// X = (X1, X2), alpha2 = eps / H(X2):
///   U1 = H(Y|X) + eps
///   L1 = H(Y|X) - H(X|Y) + eps
///   L2 = H(Y|X) - alpha H(X|Y) + eps - (1 - alpha) C
///   L3 = eps H(Y) / I(X;Y) + g0 (1 - eps / I(X;Y))
///   L4 = H(Y|X) + eps - C - min_rep alpha2 H(X2|Y)
///   L5 = H(Y|X) + eps - min_rep [(1 - alpha2) C + alpha2 H(X|Y)]
/// U1 follows from I(Y;U) = I(X;U) + H(Y|X) - H(Y|U,X) - I(X;U|Y) <= eps + H(Y|X);
/// the form H(Y|X) - eps is kept only as `u1_literal` for comparison.

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmech/errors.hpp"
#include "pmech/perfect_privacy.hpp"
#include "pmech/probability.hpp"
#include "pmech/separation.hpp"

namespace pmech {

struct RepresentationRow {
  Representation rep;
  double alpha2 = 0.0;
  double h_x2 = 0.0;
  double h_x2_given_y = 0.0;
  double l4_term = 0.0;
  double l5_term = 0.0;
};

struct BoundsReport {
  double epsilon = 0.0;
  double log_base = 2.0;
  double mutual_information = 0.0;
  double h_x = 0.0;
  double h_y = 0.0;
  double h_y_given_x = 0.0;
  double h_x_given_y = 0.0;
  double sfrl_constant = 0.0;
  std::optional<double> alpha;

  double u1 = 0.0;
  double u1_literal = 0.0;
  std::optional<double> l1, l2, l3, l4, l5;
  std::optional<double> g0;
  std::optional<Representation> argmin_l4, argmin_l5;
  std::vector<RepresentationRow> table;
  AssignmentPolicy policy_requested = AssignmentPolicy::exhaustive;
  AssignmentPolicy policy_used = AssignmentPolicy::exhaustive;
  std::vector<std::string> notes;

  std::vector<std::pair<std::string, std::optional<double>>> lower_bounds() const {
    return {{"L1", l1}, {"L2", l2}, {"L3", l3}, {"L4", l4}, {"L5", l5}};
  }

  /// Largest applicable lower bound; -inf when none applies.
  double max_lower_bound() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [name, v] : lower_bounds())
      if (v) best = std::max(best, *v);
    return best;
  }
};

struct BoundsOptions {
  AssignmentPolicy policy = AssignmentPolicy::exhaustive;
  bool include_l3 = true;
  std::size_t exhaustive_cap = 8;
  std::size_t vertex_cap = 12;
  /// Reuse a precomputed g0 instead of solving the LP again.
  std::optional<double> g0;
};

struct RepresentationTerms {
  double alpha2 = 0.0;
  double l4_term = 0.0;
  double l5_term = 0.0;
};

namespace detail {

struct SourceEntropies {
  double mi, h_x, h_y, h_y_given_x, h_x_given_y, c;
};

inline SourceEntropies source_entropies(const JointPmf& j, const InfoConfig& cfg) {
  check_log_base(cfg.log_base);
  SourceEntropies s{};
  s.h_x = entropy_x(j, cfg);
  s.h_y = entropy_y(j, cfg);
  s.h_y_given_x = entropy_y_given_x(j, cfg);
  s.h_x_given_y = entropy_x_given_y(j, cfg);
  s.mi = mutual_information(j, cfg);
  s.c = sfrl_constant(s.mi, cfg);
  return s;
}

inline RepresentationTerms representation_terms(const SourceEntropies& s, double epsilon,
                                                const X2Entropies& e) {
  RepresentationTerms t;
  t.alpha2 = epsilon / e.h_x2;
  t.l4_term = s.h_y_given_x + epsilon - s.c - t.alpha2 * e.h_x2_given_y;
  t.l5_term = s.h_y_given_x + epsilon - ((1.0 - t.alpha2) * s.c + t.alpha2 * s.h_x_given_y);
  return t;
}

}  // namespace detail

/// L4 and L5 evaluated at one representation, without minimizing over S_X.
inline RepresentationTerms bound_terms_for_representation(const JointPmf& j, double epsilon,
                                                          const Representation& rep,
                                                          const InfoConfig& cfg = {}) {
  validate_representation(rep, j.x_size());
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  const auto e = x2_entropies(j, rep, cfg);
  if (!(e.h_x2 > 0.0) || epsilon > e.h_x2) {
    std::ostringstream os;
    os << "representation invalid at epsilon = " << epsilon << ": H(X2) = " << e.h_x2
       << " gives alpha2 outside [0, 1]";
    throw ValidationError(os.str());
  }
  return detail::representation_terms(detail::source_entropies(j, cfg), epsilon, e);
}

/// All bound formulas at `epsilon` without the 0 <= eps < I(X;Y) precondition.
/// Bounds whose formula is undefined on this joint come back empty.
inline BoundsReport evaluate_bounds(const JointPmf& j, double epsilon,
                                    const BoundsOptions& opt = {}, const InfoConfig& cfg = {}) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  const auto s = detail::source_entropies(j, cfg);
  BoundsReport r;
  r.epsilon = epsilon;
  r.log_base = cfg.log_base;
  r.mutual_information = s.mi;
  r.h_x = s.h_x;
  r.h_y = s.h_y;
  r.h_y_given_x = s.h_y_given_x;
  r.h_x_given_y = s.h_x_given_y;
  r.sfrl_constant = s.c;
  r.policy_requested = opt.policy;

  r.u1 = s.h_y_given_x + epsilon;
  r.u1_literal = s.h_y_given_x - epsilon;
  r.l1 = s.h_y_given_x - s.h_x_given_y + epsilon;
  if (s.h_x > 0.0) {
    r.alpha = epsilon / s.h_x;
    r.l2 = s.h_y_given_x - *r.alpha * s.h_x_given_y + epsilon - (1.0 - *r.alpha) * s.c;
  } else {
    r.notes.push_back("L2 not applicable: H(X) = 0");
  }

  if (opt.include_l3) {
    if (s.mi > 0.0) {
      try {
        r.g0 = opt.g0 ? *opt.g0 : g0(j, cfg, opt.vertex_cap).value;
        r.l3 = epsilon * s.h_y / s.mi + *r.g0 * (1.0 - epsilon / s.mi);
      } catch (const SizeError& e) {
        r.notes.push_back(std::string("L3 not applicable: ") + e.what());
      }
    } else {
      r.notes.push_back("L3 not applicable: I(X;Y) = 0");
    }
  }

  const auto reps = enumerate_representations(j, epsilon, opt.policy, cfg, opt.exhaustive_cap);
  r.policy_used = reps.used;
  if (reps.members.empty()) {
    r.notes.push_back(factor_pairs(j.x_size()).empty()
                          ? "L4/L5 not applicable: S_X is empty (no factor pair)"
                          : "L4/L5 not applicable: no representation with H(X2) >= epsilon");
  } else {
    std::size_t best4 = 0, best5 = 0;
    for (std::size_t i = 0; i < reps.members.size(); ++i) {
      const auto e = x2_entropies(j, reps.members[i], cfg);
      const auto t = detail::representation_terms(s, epsilon, e);
      r.table.push_back({reps.members[i], t.alpha2, e.h_x2, e.h_x2_given_y, t.l4_term, t.l5_term});
      if (t.l4_term > r.table[best4].l4_term) best4 = i;
      if (t.l5_term > r.table[best5].l5_term) best5 = i;
    }
    r.l4 = r.table[best4].l4_term;
    r.l5 = r.table[best5].l5_term;
    r.argmin_l4 = r.table[best4].rep;
    r.argmin_l5 = r.table[best5].rep;
  }
  if (reps.used != reps.requested) {
    r.notes.push_back("S_X enumerated with the canonical heuristic subset (|X| above exhaustive cap)");
  }
  for (const auto& [name, v] : r.lower_bounds())
    if (v && *v < 0.0) r.notes.push_back(name + " is vacuous (negative)");
  return r;
}

/// Bounds for 0 <= eps < I(X;Y).
inline BoundsReport compute_bounds(const JointPmf& j, double epsilon, const BoundsOptions& opt = {},
                                   const InfoConfig& cfg = {}) {
  const double mi = mutual_information(j, cfg);
  if (!(epsilon >= 0.0) || !(epsilon < mi)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon << " outside [0, I(X;Y) = " << mi
       << "); h_eps = H(Y) = " << entropy_y(j, cfg) << " there (U = Y)";
    throw OutOfRangeError(os.str());
  }
  return evaluate_bounds(j, epsilon, opt, cfg);
}

}  // namespace pmech
