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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pmech/audit.hpp"
#include "pmech/errors.hpp"
#include "pmech/extension.hpp"
#include "pmech/random.hpp"
#include "pmech/synthesis.hpp"
#include "support/oracles.hpp"

namespace pmech {
namespace {

JointPmf bsc(double p) { return JointPmf::from_rows({{(1 - p) / 2, p / 2}, {p / 2, (1 - p) / 2}}); }

TEST(AuditTest, QuantitiesMatchNaiveLoops) {
  auto rng = make_rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t nx = 2 + t % 3, ny = 2 + t % 2, nu = 2 + t % 4;
    std::vector<double> d = sample_dirichlet(nx * ny * nu, t % 2 ? 0.3 : 1.0, rng);
    const TripletPmf tp({nx, ny, nu}, d);
    const auto q = information_quantities(tp);
    const auto n = testing::naive_quantities(tp);
    EXPECT_NEAR(q.i_ux, n.i_ux, 1e-12);
    EXPECT_NEAR(q.i_yu, n.i_yu, 1e-12);
    EXPECT_NEAR(q.h_y_given_ux, n.h_y_given_ux, 1e-12);
    EXPECT_NEAR(q.i_xu_given_y, n.i_xu_given_y, 1e-12);
    // The identity holds for any law, not only for mechanisms.
    EXPECT_LE(q.residual, 1e-12);
  }
}

TEST(AuditTest, FrlPassesWithTinyResidual) {
  auto rng = make_rng(22);
  for (int t = 0; t < 30; ++t) {
    const auto j = random_joint(2 + t % 4, 2 + t % 5, rng);
    const auto m = synthesize_frl(j);
    const auto a = audit(m, j);
    EXPECT_TRUE(a.pass());
    EXPECT_LE(a.key_identity_residual, 1e-12);
    EXPECT_LE(a.u_size, *a.cardinality_bound);
    EXPECT_EQ(a.comparisons.size(), 2u);
  }
}

TEST(AuditTest, EfrlOnBinarySymmetricChannel) {
  const auto j = bsc(0.1);
  const auto ext = extend_efrl(j, 0.2);
  const auto a = audit(ext.composite, j);
  EXPECT_TRUE(a.pass());
  EXPECT_NEAR(a.i_ux, 0.2, 1e-9);
  EXPECT_LE(a.h_y_given_ux, 1e-12);
  // Deterministic U given (X, Y): I(Y;U) = H(Y|X) + eps - I(X;U|Y), and at
  // least the L1 value.
  EXPECT_GE(a.i_yu, 0.2 - 1e-9);
  EXPECT_EQ(a.construction, Construction::efrl);
}

TEST(AuditTest, MismatchedJointIsProvenanceError) {
  const auto m = synthesize_frl(bsc(0.1));
  EXPECT_THROW(audit(m, bsc(0.2)), ProvenanceError);
  EXPECT_THROW(audit(m, JointPmf::from_rows({{0.5, 0.0, 0.0}, {0.0, 0.25, 0.25}})), ProvenanceError);
}

TEST(AuditTest, SfrlDeltasArePositiveAndIdentityHolds) {
  const auto j = JointPmf::from_rows({{0.3, 0.1, 0.05}, {0.05, 0.2, 0.3}});
  const auto m = synthesize_sfrl(j, {.sample_budget = 20000, .seed = 5, .shards = 1});
  const auto a = audit(m, j);
  ASSERT_TRUE(a.delta_i_ux.has_value());
  // U is independent of X in every resample, so only the floor remains.
  EXPECT_EQ(*a.delta_i_ux, 1e-9);
  EXPECT_GT(*a.delta_i_yu, 1e-9);
  EXPECT_TRUE(a.key_identity_ok());
  EXPECT_TRUE(a.pass());
  // Bootstrap is reproducible from its seed.
  const auto b = audit(m, j);
  EXPECT_EQ(*a.delta_i_yu, *b.delta_i_yu);
}

TEST(AuditTest, SeparatedAtZeroLeakageEqualsSfrl) {
  const auto j = JointPmf::from_rows({{0.2, 0.05}, {0.05, 0.2}, {0.1, 0.15}, {0.15, 0.1}});
  const SfrlOptions opt{.sample_budget = 20000, .seed = 9, .shards = 1};
  const auto rep = row_major({2, 2, false}, 4);
  const auto sep = extend_separated(j, 0.0, rep, opt);
  const auto base = synthesize_sfrl(j, opt);
  const auto qs = information_quantities(sep.composite.induced);
  const auto qb = information_quantities(base.induced);
  EXPECT_NEAR(qs.i_yu, qb.i_yu, 1e-12);
  EXPECT_NEAR(qs.i_ux, qb.i_ux, 1e-12);
  EXPECT_NEAR(qs.i_xu_given_y, qb.i_xu_given_y, 1e-12);
  EXPECT_TRUE(audit(sep.composite, j).pass());
}

TEST(AuditTest, MarkovMechanismHasNoConditionalLeak) {
  // U produced from Y only: kernel independent of x.
  const auto j = JointPmf::from_rows({{0.3, 0.2}, {0.1, 0.4}});
  const std::vector<std::vector<double>> chan{{0.9, 0.1}, {0.2, 0.8}};
  std::vector<double> p, k;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t u = 0; u < 2; ++u) {
        p.push_back(j(x, y) * chan[y][u]);
        k.push_back(chan[y][u]);
      }
  Mechanism m{2, 2, 2, k, TripletPmf({2, 2, 2}, p)};
  m.provenance.epsilon = information_quantities(m.induced).i_ux + 1e-6;
  const auto a = audit(m, j);
  EXPECT_LE(a.i_xu_given_y, 1e-9);
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(a.construction, Construction::custom);
}

TEST(AuditTest, CustomMechanismAboveEpsilonFails) {
  const auto j = bsc(0.1);
  // U = Y claimed as a custom mechanism with leakage 0.1.
  std::vector<double> p, k;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t u = 0; u < 2; ++u) {
        p.push_back(u == y ? j(x, y) : 0.0);
        k.push_back(u == y ? 1.0 : 0.0);
      }
  Mechanism leaky{2, 2, 2, k, TripletPmf({2, 2, 2}, p)};
  leaky.provenance.epsilon = 0.1;
  const auto a = audit(leaky, j);
  EXPECT_FALSE(a.pass());
  EXPECT_NEAR(a.i_ux, 1.0 - testing::h2(0.1), 1e-12);
}

}  // namespace
}  // namespace pmech
