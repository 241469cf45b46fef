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

/// Generators for the structured instances on which the lower bounds are
/// compared, and the orderings each instance must satisfy.
///
///   S1  X1 = f(Y)                               L1 >= L5 >= L4
///   S2  X2 = f(Y), H(X1|Y) >= H(Y) + 4          L4 >= max(L1, L5)
///   S3  Y independent of X, H(X) >= 4           L4 >= L1, L5 >= L1 (formula level)
///   S4  X1 = f(X2), H(X2|Y) >= C                L5 >= max(L4, L1), L5 - L4 = eps C / H(X2)
///   C1  H(X|Y) <= C                             L5 >= L2
///   C2  X2 = f(Y), H(X1|Y) >= C                 L4 >= max(L2, L5, L1)
/// where C = log(I(X;Y) + 1) + 4. Every hypothesis carries `margin` of slack.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmech/bounds.hpp"
#include "pmech/errors.hpp"
#include "pmech/probability.hpp"
#include "pmech/random.hpp"
#include "pmech/separation.hpp"

namespace pmech {

enum class ScenarioId { s1, s2, s3, s4, c1, c2 };

inline const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::s1: return "1";
    case ScenarioId::s2: return "2";
    case ScenarioId::s3: return "3";
    case ScenarioId::s4: return "4";
    case ScenarioId::c1: return "C1";
    case ScenarioId::c2: return "C2";
  }
  return "?";
}

inline ScenarioId parse_scenario_id(const std::string& s) {
  if (s == "1" || s == "S1" || s == "s1") return ScenarioId::s1;
  if (s == "2" || s == "S2" || s == "s2") return ScenarioId::s2;
  if (s == "3" || s == "S3" || s == "s3") return ScenarioId::s3;
  if (s == "4" || s == "S4" || s == "s4") return ScenarioId::s4;
  if (s == "C1" || s == "c1") return ScenarioId::c1;
  if (s == "C2" || s == "c2") return ScenarioId::c2;
  throw ValidationError("unknown scenario id '" + s + "' (expected 1-4, C1, C2)");
}

inline constexpr ScenarioId kAllScenarios[] = {ScenarioId::s1, ScenarioId::s2, ScenarioId::s3,
                                               ScenarioId::s4, ScenarioId::c1, ScenarioId::c2};

/// Zero sizes select the scenario defaults.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::s1;
  std::size_t x1_size = 0;
  std::size_t x2_size = 0;
  std::size_t y_size = 0;
  double margin = 2.0;
  std::uint64_t seed = 1;
};

struct HypothesisCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct ScenarioInstance {
  ScenarioSpec spec;  // sizes resolved
  JointPmf joint;
  Representation rep;
  /// True when I(X;Y) = 0, so no eps satisfies 0 <= eps < I(X;Y).
  bool degenerate = false;
  /// Largest eps at which the scenario's ordering is claimed.
  double epsilon_max = 0.0;
  std::vector<HypothesisCheck> hypothesis;
  std::size_t attempts = 0;
};

struct Relation {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct DominanceRecord {
  ScenarioId id = ScenarioId::s1;
  double epsilon = 0.0;
  bool formula_level = false;
  double l1 = 0.0, l2 = 0.0, l4 = 0.0, l5 = 0.0;
  double alpha = 0.0, alpha2 = 0.0;
  std::vector<Relation> relations;
  std::optional<double> identity_measured, identity_expected;

  bool holds() const {
    for (const auto& r : relations)
      if (!r.holds) return false;
    return true;
  }
};

namespace detail {

struct ScenarioDefaults {
  std::size_t x1, x2, y;
};

inline ScenarioDefaults scenario_defaults(ScenarioId id) {
  switch (id) {
    case ScenarioId::s1: return {2, 3, 4};
    case ScenarioId::s2: return {256, 2, 2};
    case ScenarioId::s3: return {16, 16, 2};
    case ScenarioId::s4: return {2, 256, 2};
    case ScenarioId::c1: return {2, 2, 3};
    case ScenarioId::c2: return {256, 2, 3};
  }
  return {2, 2, 2};
}

[[noreturn]] inline void infeasible(const std::string& inequality, double lhs, double rhs) {
  std::ostringstream os;
  os << "scenario parameters infeasible: " << inequality << " cannot hold (" << lhs << " vs "
     << rhs << ")";
  throw ParameterError(os.str());
}

/// Joint over X = (x1, x2) -> x1 * n2 + x2 from p(x1, x2, y).
inline JointPmf grid_joint(std::size_t n1, std::size_t n2, std::size_t ny,
                           const std::vector<double>& p) {
  return JointPmf(n1 * n2, ny, p);
}

struct ScenarioEntropies {
  double h_x, h_y, h_x_given_y, mi, c;
  double h_x1_given_y, h_x2, h_x2_given_y, mi_x2_y;
};

inline ScenarioEntropies scenario_entropies(const JointPmf& j, const Representation& rep,
                                            const InfoConfig& cfg) {
  ScenarioEntropies e{};
  e.h_x = entropy_x(j, cfg);
  e.h_y = entropy_y(j, cfg);
  e.h_x_given_y = entropy_x_given_y(j, cfg);
  e.mi = mutual_information(j, cfg);
  e.c = sfrl_constant(e.mi, cfg);
  const auto law = build_representation(j, rep).law;  // axes (X1, X2, Y)
  e.h_x1_given_y = conditional_entropy(law, kAxis0, kAxis2, cfg);
  e.h_x2 = marginal_entropy(law, kAxis1, cfg);
  e.h_x2_given_y = conditional_entropy(law, kAxis1, kAxis2, cfg);
  e.mi_x2_y = mutual_information(law, kAxis1, kAxis2, cfg);
  return e;
}

inline double log_b(double v, const InfoConfig& cfg) { return std::log(v) / std::log(cfg.log_base); }

/// Draws one candidate table for the scenario; the hypothesis is checked by the caller.
inline std::vector<double> draw_scenario(ScenarioId id, std::size_t n1, std::size_t n2,
                                         std::size_t ny, Rng& rng) {
  std::vector<double> p(n1 * n2 * ny, 0.0);
  auto at = [&](std::size_t x1, std::size_t x2, std::size_t y) -> double& {
    return p[(x1 * n2 + x2) * ny + y];
  };
  const auto py = sample_dirichlet(ny, 2.0, rng);
  switch (id) {
    case ScenarioId::s1:
      // X1 = Y mod n1, X2 | Y arbitrary.
      for (std::size_t y = 0; y < ny; ++y) {
        const auto px2 = sample_dirichlet(n2, 1.0, rng);
        for (std::size_t x2 = 0; x2 < n2; ++x2) at(y % n1, x2, y) = py[y] * px2[x2];
      }
      break;
    case ScenarioId::s2:
    case ScenarioId::c2:
      // X2 = Y mod n2, X1 | Y close to uniform.
      for (std::size_t y = 0; y < ny; ++y) {
        const auto px1 = sample_dirichlet(n1, 50.0, rng);
        for (std::size_t x1 = 0; x1 < n1; ++x1) at(x1, y % n2, y) = py[y] * px1[x1];
      }
      break;
    case ScenarioId::s3: {
      // Y independent of X, X uniform (H(X) = log |X|).
      const double px = 1.0 / static_cast<double>(n1 * n2);
      for (std::size_t x = 0; x < n1 * n2; ++x)
        for (std::size_t y = 0; y < ny; ++y) at(x / n2, x % n2, y) = px * py[y];
      break;
    }
    case ScenarioId::s4:
      // X1 = X2 mod n1, X2 | Y close to uniform with some Y dependence.
      for (std::size_t y = 0; y < ny; ++y) {
        const auto px2 = sample_dirichlet(n2, 3.0, rng);
        for (std::size_t x2 = 0; x2 < n2; ++x2) at(x2 % n1, x2, y) = py[y] * px2[x2];
      }
      break;
    case ScenarioId::c1: {
      const auto q = sample_dirichlet(n1 * n2 * ny, 1.0, rng);
      p = q;
      break;
    }
  }
  return p;
}

/// Size-level feasibility (necessary conditions), checked before drawing.
inline void check_sizes(ScenarioId id, std::size_t n1, std::size_t n2, std::size_t ny,
                        double margin, const InfoConfig& cfg) {
  if (n1 < 2 || n2 < 2) infeasible("|X1| >= 2 and |X2| >= 2", double(std::min(n1, n2)), 2.0);
  if (ny < 2) infeasible("|Y| >= 2", double(ny), 2.0);
  const double ly = log_b(double(ny), cfg);
  switch (id) {
    case ScenarioId::s1:
      if (n1 > ny) infeasible("|X1| <= |Y| (X1 = f(Y) onto)", double(n1), double(ny));
      if (log_b(double(n2), cfg) > 4.0 - margin)
        infeasible("H(X|Y) <= log(I(X;Y)+1) + 4 - margin", log_b(double(n2), cfg), 4.0 - margin);
      break;
    case ScenarioId::s2:
      if (n2 > ny) infeasible("|X2| <= |Y| (X2 = f(Y) onto)", double(n2), double(ny));
      if (log_b(double(n1), cfg) < ly + 4.0 + margin)
        infeasible("H(X1|Y) >= H(Y) + 4 + margin", log_b(double(n1), cfg), ly + 4.0 + margin);
      break;
    case ScenarioId::c2:
      if (n2 > ny) infeasible("|X2| <= |Y| (X2 = f(Y) onto)", double(n2), double(ny));
      if (log_b(double(n1), cfg) < 4.0 + margin)
        infeasible("H(X1|Y) >= log(I(X;Y)+1) + 4 + margin", log_b(double(n1), cfg), 4.0 + margin);
      break;
    case ScenarioId::s3:
      if (log_b(double(n1 * n2), cfg) < 4.0 + margin)
        infeasible("H(X1,X2) >= 4 + margin", log_b(double(n1 * n2), cfg), 4.0 + margin);
      break;
    case ScenarioId::s4:
      if (n1 > n2) infeasible("|X1| <= |X2| (X1 = f(X2) onto)", double(n1), double(n2));
      if (log_b(double(n2), cfg) < 4.0 + margin)
        infeasible("H(X2|Y) >= log(I(X2;Y)+1) + 4 + margin", log_b(double(n2), cfg), 4.0 + margin);
      break;
    case ScenarioId::c1:
      if (log_b(double(n1 * n2), cfg) > 4.0 - margin)
        infeasible("H(X|Y) <= log(I(X;Y)+1) + 4 - margin", log_b(double(n1 * n2), cfg),
                   4.0 - margin);
      break;
  }
}

inline std::vector<HypothesisCheck> check_hypothesis(ScenarioId id, const JointPmf& j,
                                                     const Representation& rep, double margin,
                                                     const InfoConfig& cfg) {
  const auto e = scenario_entropies(j, rep, cfg);
  const double tol = 1e-12;
  std::vector<HypothesisCheck> h;
  auto ge = [&](std::string name, double lhs, double rhs) {
    h.push_back({std::move(name), lhs, rhs, lhs >= rhs - tol});
  };
  auto le = [&](std::string name, double lhs, double rhs) {
    h.push_back({std::move(name), lhs, rhs, lhs <= rhs + tol});
  };
  // H(A|B) = 0 via the conditional entropies on the separated law.
  const auto law = build_representation(j, rep).law;
  switch (id) {
    case ScenarioId::s1:
      le("H(X1|Y) = 0", e.h_x1_given_y, 0.0);
      le("H(X|Y) <= C - margin", e.h_x_given_y, e.c - margin);
      break;
    case ScenarioId::s2:
      le("H(X2|Y) = 0", e.h_x2_given_y, 0.0);
      ge("H(X1|Y) >= H(Y) + 4 + margin", e.h_x1_given_y, e.h_y + 4.0 + margin);
      break;
    case ScenarioId::c2:
      le("H(X2|Y) = 0", e.h_x2_given_y, 0.0);
      ge("H(X1|Y) >= C + margin", e.h_x1_given_y, e.c + margin);
      break;
    case ScenarioId::s3:
      le("I(X;Y) = 0", e.mi, 0.0);
      ge("H(X) >= 4 + margin", e.h_x, 4.0 + margin);
      break;
    case ScenarioId::s4:
      le("H(X1|X2) = 0", conditional_entropy(law, kAxis0, kAxis1, cfg), 0.0);
      ge("H(X2|Y) >= log(I(X2;Y)+1) + 4 + margin", e.h_x2_given_y,
         sfrl_constant(e.mi_x2_y, cfg) + margin);
      break;
    case ScenarioId::c1:
      le("H(X|Y) <= C - margin", e.h_x_given_y, e.c - margin);
      break;
  }
  return h;
}

}  // namespace detail

/// Draws instances until the hypothesis holds numerically (up to 200 tries).
inline ScenarioInstance generate_scenario(const ScenarioSpec& spec, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  if (!(spec.margin >= 0.0)) throw ParameterError("scenario margin must be >= 0");
  const auto d = detail::scenario_defaults(spec.id);
  ScenarioSpec s = spec;
  if (s.x1_size == 0) s.x1_size = d.x1;
  if (s.x2_size == 0) s.x2_size = d.x2;
  if (s.y_size == 0) s.y_size = d.y;
  detail::check_sizes(s.id, s.x1_size, s.x2_size, s.y_size, s.margin, cfg);

  const FactorPair pair{s.x1_size, s.x2_size, false};
  const Representation rep = row_major(pair, s.x1_size * s.x2_size);
  auto rng = make_rng(s.seed, 0x5ce0 + static_cast<std::uint64_t>(s.id));
  std::vector<HypothesisCheck> last;
  for (std::size_t attempt = 1; attempt <= 200; ++attempt) {
    auto j = detail::grid_joint(s.x1_size, s.x2_size, s.y_size,
                                detail::draw_scenario(s.id, s.x1_size, s.x2_size, s.y_size, rng));
    last = detail::check_hypothesis(s.id, j, rep, s.margin, cfg);
    bool ok = true;
    for (const auto& h : last) ok = ok && h.holds;
    if (!ok) continue;

    ScenarioInstance inst{s, std::move(j), rep, false, 0.0, last, attempt};
    const auto e = detail::scenario_entropies(inst.joint, rep, cfg);
    inst.degenerate = s.id == ScenarioId::s3;
    inst.epsilon_max = inst.degenerate ? std::min(e.h_x2, e.h_x - 4.0) : std::min(e.mi, e.h_x2);
    return inst;
  }
  std::ostringstream os;
  os << "scenario " << to_string(s.id) << ": hypothesis not met after 200 draws";
  for (const auto& h : last)
    if (!h.holds) os << "; violated " << h.name << " (" << h.lhs << " vs " << h.rhs << ")";
  throw ParameterError(os.str());
}

/// Evaluates L1, L2 and the L4/L5 terms at the designated representation and
/// checks the scenario ordering within 1e-9; throws AssertionFailure otherwise.
inline DominanceRecord assert_dominance(ScenarioId id, const JointPmf& j, const Representation& rep,
                                        double epsilon, const InfoConfig& cfg = {},
                                        double tolerance = 1e-9) {
  DominanceRecord r;
  r.id = id;
  r.epsilon = epsilon;
  r.formula_level = id == ScenarioId::s3;
  const double mi = mutual_information(j, cfg);
  if (!r.formula_level && !(epsilon >= 0.0 && epsilon < mi)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon << " outside [0, I(X;Y) = " << mi << ")";
    throw OutOfRangeError(os.str());
  }
  const auto terms = bound_terms_for_representation(j, epsilon, rep, cfg);
  const double h_yx = entropy_y_given_x(j, cfg), h_xy = entropy_x_given_y(j, cfg);
  const double c = sfrl_constant(mi, cfg);
  r.alpha = epsilon / entropy_x(j, cfg);
  r.alpha2 = terms.alpha2;
  r.l1 = h_yx - h_xy + epsilon;
  r.l2 = h_yx - r.alpha * h_xy + epsilon - (1.0 - r.alpha) * c;
  r.l4 = terms.l4_term;
  r.l5 = terms.l5_term;

  auto ge = [&](std::string name, double lhs, double rhs) {
    r.relations.push_back({std::move(name), lhs, rhs, lhs >= rhs - tolerance});
  };
  switch (id) {
    case ScenarioId::s1:
      ge("L1 >= L5", r.l1, r.l5);
      ge("L5 >= L4", r.l5, r.l4);
      break;
    case ScenarioId::s2:
      ge("L4 >= L1", r.l4, r.l1);
      ge("L4 >= L5", r.l4, r.l5);
      break;
    case ScenarioId::s3:
      ge("L4 >= L1", r.l4, r.l1);
      ge("L5 >= L1", r.l5, r.l1);
      break;
    case ScenarioId::s4: {
      ge("L5 >= L4", r.l5, r.l4);
      ge("L5 >= L1", r.l5, r.l1);
      // Closed form from the X2 coordinate alone.
      const auto law = build_representation(j, rep).law;
      const double h_x2 = marginal_entropy(law, kAxis1, cfg);
      const double c2 = sfrl_constant(mutual_information(law, kAxis1, kAxis2, cfg), cfg);
      r.identity_measured = r.l5 - r.l4;
      r.identity_expected = epsilon * c2 / h_x2;
      r.relations.push_back({"L5 - L4 = eps C(X2) / H(X2)", *r.identity_measured,
                             *r.identity_expected,
                             std::abs(*r.identity_measured - *r.identity_expected) <= tolerance});
      break;
    }
    case ScenarioId::c1:
      ge("L5 >= L2", r.l5, r.l2);
      break;
    case ScenarioId::c2:
      ge("L4 >= L2", r.l4, r.l2);
      ge("L4 >= L5", r.l4, r.l5);
      ge("L4 >= L1", r.l4, r.l1);
      break;
  }
  if (!r.holds()) {
    std::ostringstream os;
    os << "scenario " << to_string(id) << " ordering violated at eps = " << epsilon << ":";
    for (const auto& rel : r.relations)
      if (!rel.holds) os << " [" << rel.name << ": " << rel.lhs << " vs " << rel.rhs << "]";
    os << " (L1 = " << r.l1 << ", L2 = " << r.l2 << ", L4 = " << r.l4 << ", L5 = " << r.l5 << ")";
    throw AssertionFailure(os.str());
  }
  return r;
}

inline DominanceRecord assert_dominance(const ScenarioInstance& inst, double epsilon,
                                        const InfoConfig& cfg = {}) {
  return assert_dominance(inst.spec.id, inst.joint, inst.rep, epsilon, cfg);
}

}  // namespace pmech
