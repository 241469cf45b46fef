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

// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every criterion is seeded and deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pmech/pmech.hpp"
#include "support/oracles.hpp"

namespace {

using namespace pmech;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Residuals of every audit run by criteria 1-4, for criterion 10.
struct IdentityLedger {
  std::size_t audits = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  // residual / tolerance

  void record(const AuditReport& a) {
    ++audits;
    if (!a.key_identity_ok()) ++failures;
    worst_ratio = std::max(worst_ratio, a.key_identity_residual / a.key_identity_tolerance);
  }
};

IdentityLedger g_identity;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

JointPmf joint_2_to_5(Rng& rng) {
  std::uniform_int_distribution<std::size_t> size(2, 5);
  const std::size_t nx = size(rng), ny = size(rng);
  return random_joint(nx, ny, rng);
}

// X = f(Y) with f onto: P_Y drawn at random, f(y) = y mod |X| after a shuffle.
JointPmf function_of_y(std::size_t nx, std::size_t ny, Rng& rng) {
  const auto py = sample_dirichlet(ny, 1.0, rng);
  std::vector<std::size_t> f(ny);
  for (std::size_t y = 0; y < ny; ++y) f[y] = y % nx;
  std::shuffle(f.begin(), f.end(), rng);
  std::vector<double> p(nx * ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) p[f[y] * ny + y] = py[y];
  return JointPmf(nx, ny, p);
}

Outcome frl_contract() {
  auto rng = make_rng(1001);
  Outcome o;
  double worst_ux = 0.0, worst_h = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto j = joint_2_to_5(rng);
    const auto m = synthesize_frl(j);
    const auto a = audit(m, j);
    g_identity.record(a);
    worst_ux = std::max(worst_ux, a.i_ux);
    worst_h = std::max(worst_h, a.h_y_given_ux);
    const std::size_t card = j.x_size() * (j.y_size() - 1) + 1;
    if (a.i_ux > 1e-10 || a.h_y_given_ux > 1e-10 || m.support_size() > card) o.pass = false;
  }
  o.detail = fmt("200 joints, max I(U;X) = %.2e, max H(Y|U,X) = %.2e", worst_ux, worst_h);
  return o;
}

Outcome efrl_exact_leakage() {
  auto rng = make_rng(1002);
  Outcome o;
  double worst_gap = 0.0, worst_l1 = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const auto j = joint_2_to_5(rng);
    const double mi = mutual_information(j);
    for (double f : {0.25, 0.5, 0.9}) {
      const double eps = f * mi;
      const auto ext = extend_efrl(j, eps);
      const auto a = audit(ext.composite, j);
      g_identity.record(a);
      const double l1 = entropy_y_given_x(j) - entropy_x_given_y(j) + eps;
      const std::size_t card = (j.x_size() * (j.y_size() - 1) + 1) * (j.x_size() + 1);
      worst_gap = std::max(worst_gap, std::abs(a.i_ux - eps));
      worst_l1 = std::min(worst_l1, a.i_yu - l1);
      if (std::abs(a.i_ux - eps) > 1e-9 || a.i_yu < l1 - 1e-9 || ext.composite.support_size() > card)
        o.pass = false;
    }
  }
  o.detail = fmt("300 cases, max |I(U;X)-eps| = %.2e, min I(Y;U)-L1 = %.3e", worst_gap, worst_l1);
  return o;
}

Outcome separated_construction() {
  auto rng = make_rng(1003);
  Outcome o;
  double worst = std::numeric_limits<double>::infinity();
  double max_delta = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t nx = t % 2 ? 6 : 4;
    const std::size_t ny = 2 + t % 3;
    const auto j = random_joint(nx, ny, rng);
    const double eps = 0.5 * mutual_information(j);
    BoundsOptions bo;
    bo.include_l3 = false;
    const auto b = compute_bounds(j, eps, bo);
    if (!b.argmin_l4) {
      o.pass = false;
      o.detail = "no representation admissible";
      return o;
    }
    const SfrlOptions so{.sample_budget = 1'000'000, .seed = 3000 + static_cast<std::uint64_t>(t), .shards = 4};
    const auto ext = extend_separated(j, eps, *b.argmin_l4, so);
    const auto a = audit(ext.composite, j, b);
    g_identity.record(a);
    const auto terms = bound_terms_for_representation(j, eps, *b.argmin_l4);
    const double d_ux = *a.delta_i_ux, d_yu = *a.delta_i_yu;
    max_delta = std::max(max_delta, d_ux);
    worst = std::min(worst, a.i_yu - std::max(terms.l4_term, terms.l5_term) + d_yu);
    if (std::abs(a.i_ux - eps) > d_ux) o.pass = false;
    if (a.i_yu < terms.l4_term - d_yu || a.i_yu < terms.l5_term - d_yu) o.pass = false;
    if (a.h_y_given_ux > 1e-10) o.pass = false;
    if (!a.pass()) o.pass = false;
  }
  o.detail = fmt("20 joints, max delta(I(U;X)) = %.2e, min slack vs L4/L5 = %.3e", max_delta, worst);
  return o;
}

Outcome sfrl_contract() {
  auto rng = make_rng(1004);
  Outcome o;
  double worst_cond = std::numeric_limits<double>::infinity(), worst_ux = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto j = joint_2_to_5(rng);
    const SfrlOptions so{.sample_budget = 1'000'000, .seed = 4000 + static_cast<std::uint64_t>(t), .shards = 4};
    const auto m = synthesize_sfrl(j, so);
    const auto a = audit(m, j);
    g_identity.record(a);
    const double c = sfrl_constant(mutual_information(j));
    worst_cond = std::min(worst_cond, c + *a.delta_i_xu_given_y - a.i_xu_given_y);
    worst_ux = std::max(worst_ux, a.i_ux - *a.delta_i_ux);
    if (a.i_xu_given_y > c + *a.delta_i_xu_given_y || a.i_ux > *a.delta_i_ux) o.pass = false;
  }
  o.detail = fmt("20 joints, min (C + delta - I(X;U|Y)) = %.3f, max (I(U;X) - delta) = %.2e",
                 worst_cond, worst_ux);
  return o;
}

Outcome zero_leakage_collapse() {
  auto rng = make_rng(1005);
  Outcome o;
  double worst = 0.0;
  BoundsOptions bo;
  bo.include_l3 = false;
  for (int t = 0; t < 500; ++t) {
    // |X| >= 3: a binary X has no factor pair, so L4 and L5 would not apply.
    std::uniform_int_distribution<std::size_t> sx(3, 5), sy(2, 5);
    const std::size_t nx = sx(rng), ny = sy(rng);
    const auto j = random_joint(nx, ny, rng);
    const auto r = compute_bounds(j, 0.0, bo);
    if (!r.l2 || !r.l4 || !r.l5) {
      o.pass = false;
      continue;
    }
    worst = std::max({worst, std::abs(*r.l4 - *r.l2), std::abs(*r.l5 - *r.l2)});
  }
  if (worst > 1e-12) o.pass = false;
  o.detail = fmt("500 joints, max |L4-L2|, |L5-L2| = %.2e", worst);
  return o;
}

Outcome tightness() {
  auto rng = make_rng(1006);
  Outcome o;
  double worst_exact = 0.0, worst_oracle = 0.0;
  for (int t = 0; t < 20; ++t) {
    // |X||Y| <= 12 keeps the oracle applicable.
    const std::size_t nx = t % 4 == 3 ? 3 : 2;
    const std::size_t ny = nx == 3 ? 4 : 3 + t % 3;
    const auto j = function_of_y(nx, ny, rng);
    const double eps = (0.2 + 0.6 * (t % 5) / 4.0) * mutual_information(j);
    const double target = entropy_y_given_x(j) + eps;
    const auto ext = extend_efrl(j, eps);
    const double iyu = mutual_information(ext.composite.induced, kY, kU);
    worst_exact = std::max(worst_exact, std::abs(iyu - target));
    const auto est = estimate_h_eps(j, eps, {.u_cap = 6, .seed = 60 + static_cast<std::uint64_t>(t)});
    worst_oracle = std::max(worst_oracle, std::abs(est.value - target));
  }
  if (worst_exact > 1e-9 || worst_oracle > 0.02) o.pass = false;
  o.detail = fmt("20 joints, max |I(Y;U)-(H(Y|X)+eps)| = %.2e, oracle gap = %.2e", worst_exact,
                 worst_oracle);
  return o;
}

Outcome sandwich() {
  auto rng = make_rng(1007);
  Outcome o;
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 500; ++t) {
    const auto j = joint_2_to_5(rng);
    const double mi = mutual_information(j);
    BoundsOptions bo;
    bo.g0 = g0(j).value;
    for (double f : {0.0, 0.25, 0.5, 0.9}) {
      const auto r = compute_bounds(j, f * mi, bo);
      worst = std::max(worst, r.max_lower_bound() - r.u1);
      if (r.max_lower_bound() > r.u1 + 1e-9) o.pass = false;
    }
  }
  double oracle_low = std::numeric_limits<double>::infinity(), oracle_high = -oracle_low;
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<std::size_t> sx(2, 3), sy(2, 4);
    const std::size_t nx = sx(rng), ny = sy(rng);
    const auto j = random_joint(nx, ny, rng);
    const double eps = (0.1 + 0.8 * (t % 4) / 3.0) * mutual_information(j);
    const auto r = compute_bounds(j, eps);
    const auto est = estimate_h_eps(j, eps, {.u_cap = 6, .seed = 70 + static_cast<std::uint64_t>(t)});
    // max_lower_bound() is -inf when no bound applies, so the comparison is safe.
    oracle_low = std::min(oracle_low, est.value - r.max_lower_bound());
    oracle_high = std::max(oracle_high, est.value - r.u1);
    if (est.value < r.max_lower_bound() - 1e-9 || est.value > r.u1 + 1e-9) o.pass = false;
  }
  o.detail = fmt("max(maxLB - U1) = %.3e over 2000; oracle - maxLB >= %.2e, oracle - U1 <= %.2e",
                 worst, oracle_low, oracle_high);
  return o;
}

Outcome g0_correctness() {
  auto rng = make_rng(1008);
  Outcome o;
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<std::size_t> sx(2, 3), sy(2, 4);
    const std::size_t nx = sx(rng), ny = sy(rng);
    const auto j = random_joint(nx, ny, rng);
    const double lp = g0(j).value;
    const double ref = testing::reference_g0(j).value;
    worst = std::max(worst, std::abs(lp - ref));
  }
  if (worst > 1e-3) o.pass = false;
  bool exact_zero = true, indep_ok = true;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + t % 2;
    if (g0(random_joint(n, n, rng)).value != 0.0) exact_zero = false;
    const auto px = sample_dirichlet(2 + t % 2, 1.0, rng), py = sample_dirichlet(2 + t % 3, 1.0, rng);
    const auto ind = JointPmf::product(px, py);
    if (std::abs(g0(ind).value - testing::h_bits(py)) > 1e-9) indep_ok = false;
  }
  o.pass = o.pass && exact_zero && indep_ok;
  o.detail = fmt("30 instances, max |LP - reference| = %.2e; invertible -> 0: %s; independent -> H(Y): %s",
                 worst, exact_zero ? "yes" : "no", indep_ok ? "yes" : "no");
  return o;
}

Outcome scenario_dominance() {
  Outcome o;
  std::size_t checks = 0;
  double worst_identity = 0.0;
  std::ostringstream failures;
  for (auto id : kAllScenarios) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      try {
        const auto inst = generate_scenario({.id = id, .seed = seed});
        for (double f : {0.0, 0.5, 0.99}) {
          const auto rec = assert_dominance(inst, f * inst.epsilon_max);
          ++checks;
          if (rec.identity_measured)
            worst_identity =
                std::max(worst_identity, std::abs(*rec.identity_measured - *rec.identity_expected));
        }
      } catch (const std::exception& e) {
        o.pass = false;
        failures << " [" << to_string(id) << "/" << seed << ": " << e.what() << "]";
      }
    }
  }
  if (worst_identity > 1e-9) o.pass = false;
  o.detail = fmt("%zu ordering checks over 6 scenarios x 20 seeds, identity error %.2e", checks,
                 worst_identity) +
             failures.str();
  return o;
}

Outcome key_identity() {
  Outcome o;
  o.pass = g_identity.audits > 0 && g_identity.failures == 0;
  o.detail = fmt("%zu audits, %zu outside tolerance, max residual/tolerance = %.3f",
                 g_identity.audits, g_identity.failures, g_identity.worst_ratio);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "FRL contract", 10, frl_contract},
      {2, "EFRL exact leakage", 20, efrl_exact_leakage},
      {3, "separated construction", 180, separated_construction},
      {4, "SFRL contract", 120, sfrl_contract},
      {5, "zero-leakage collapse", 5, zero_leakage_collapse},
      {6, "tightness", 0, tightness},
      {7, "sandwich", 0, sandwich},
      {8, "g0 correctness", 30, g0_correctness},
      {9, "scenario dominance", 30, scenario_dominance},
      {10, "key identity", 0, key_identity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2fs", secs);
    if (c.limit_s > 0) {
      timing += fmt(" / limit %.0fs", c.limit_s);
      if (secs > c.limit_s) o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-24s %s  (%s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                timing.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
