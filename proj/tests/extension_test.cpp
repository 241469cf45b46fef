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

#include "pmech/errors.hpp"
#include "pmech/extension.hpp"
#include "pmech/random.hpp"
#include "support/oracles.hpp"

namespace pmech {
namespace {

using testing::h2;
using testing::naive_quantities;

const JointPmf kBinarySymmetric = JointPmf::from_rows({{0.45, 0.05}, {0.05, 0.45}});

TEST(EfrlTest, BinarySymmetricAtPointTwo) {
  const auto e = extend_efrl(kBinarySymmetric, 0.2);
  const auto q = naive_quantities(e.composite.induced);
  EXPECT_NEAR(q.i_ux, 0.2, 1e-9);
  EXPECT_NEAR(q.h_y_given_ux, 0.0, 1e-12);
  // L1 = h2(0.1) - h2(0.1) + 0.2
  EXPECT_GE(q.i_yu, 0.2 - 1e-9);
  EXPECT_NEAR(e.response.alpha, 0.2, 1e-15);  // H(X) = 1
  EXPECT_EQ(e.composite.provenance.construction, Construction::efrl);
}

TEST(EfrlTest, ZeroEpsilonIsPlainFrl) {
  const auto e = extend_efrl(kBinarySymmetric, 0.0);
  const auto q = naive_quantities(e.composite.induced);
  EXPECT_NEAR(q.i_ux, 0.0, 1e-12);
  EXPECT_EQ(e.composite.support_size(), e.base.support_size());
  EXPECT_NEAR(q.i_yu, naive_quantities(e.base.induced).i_yu, 1e-12);
}

TEST(EfrlTest, TightWhenXIsFunctionOfY) {
  // X = 0 for y in {0, 1}, X = 1 for y in {2, 3}.
  const auto j = JointPmf::from_rows({{0.3, 0.2, 0.0, 0.0}, {0.0, 0.0, 0.1, 0.4}});
  const auto e = extend_efrl(j, 0.1);
  const auto q = naive_quantities(e.composite.induced);
  EXPECT_NEAR(q.i_yu, entropy_y_given_x(j) + 0.1, 1e-9);
  EXPECT_NEAR(q.i_xu_given_y, 0.0, 1e-12);
}

TEST(EfrlTest, ExactLeakageAndCardinalityOnRandomJoints) {
  auto rng = make_rng(31);
  for (int t = 0; t < 60; ++t) {
    const std::size_t nx = 2 + t % 4, ny = 2 + (t / 4) % 4;
    const auto j = random_joint(nx, ny, rng);
    const double eps = (0.25 + 0.3 * (t % 3)) * mutual_information(j);
    const auto e = extend_efrl(j, eps);
    const auto q = naive_quantities(e.composite.induced);
    EXPECT_NEAR(q.i_ux, eps, 1e-9);
    EXPECT_GE(q.i_yu, entropy_y_given_x(j) - entropy_x_given_y(j) + eps - 1e-9);
    EXPECT_LE(e.composite.support_size(), (nx * (ny - 1) + 1) * (nx + 1));
  }
}

TEST(EfrlTest, EpsilonOutsideRangeThrows) {
  EXPECT_THROW(extend_efrl(kBinarySymmetric, 0.6), OutOfRangeError);
  EXPECT_THROW(extend_efrl(kBinarySymmetric, -0.1), OutOfRangeError);
  const std::vector<double> px{0.5, 0.5}, py{0.3, 0.7};
  EXPECT_THROW(extend_efrl(JointPmf::product(px, py), 0.0), OutOfRangeError);
}

TEST(EsfrlTest, BinarySymmetricLeakage) {
  const auto e = extend_esfrl(kBinarySymmetric, 0.1, {1'000'000, 1, 8});
  const auto q = naive_quantities(e.composite.induced);
  EXPECT_NEAR(q.i_ux, 0.1, 1e-9);  // W is composed in closed form
  EXPECT_NEAR(q.h_y_given_ux, 0.0, 1e-12);
  EXPECT_EQ(e.composite.flavor, Flavor::empirical);
}

TEST(EsfrlTest, ZeroEpsilonMatchesSfrl) {
  const auto e = extend_esfrl(kBinarySymmetric, 0.0, {100000, 2, 2});
  const auto a = naive_quantities(e.composite.induced), b = naive_quantities(e.base.induced);
  EXPECT_NEAR(a.i_ux, 0.0, 1e-12);
  EXPECT_NEAR(a.i_xu_given_y, b.i_xu_given_y, 1e-12);
  EXPECT_NEAR(a.i_yu, b.i_yu, 1e-12);
}

TEST(EsfrlTest, IndependentSourceRejected) {
  const std::vector<double> px{0.5, 0.5}, py{0.3, 0.7};
  EXPECT_THROW(extend_esfrl(JointPmf::product(px, py), 0.0, {10000, 1, 1}), OutOfRangeError);
}

TEST(SeparatedTest, UniformFourSymbolLeakage) {
  const auto j = JointPmf::from_rows({{0.2, 0.05}, {0.15, 0.1}, {0.05, 0.2}, {0.1, 0.15}});
  const auto rep = row_major({2, 2, false}, 4);
  const auto e = extend_separated(j, 0.1, rep, {1'000'000, 1, 8});
  const auto q = naive_quantities(e.composite.induced);
  EXPECT_NEAR(q.i_ux, 0.1, 1e-9);
  EXPECT_NEAR(q.h_y_given_ux, 0.0, 1e-12);
  EXPECT_NEAR(e.response.alpha, 0.1 / x2_entropies(j, rep).h_x2, 1e-15);
  EXPECT_EQ(e.response.source, RandomizedResponse::Source::x2);
  ASSERT_TRUE(e.composite.provenance.representation.has_value());
}

TEST(SeparatedTest, RejectsEpsilonAboveH2) {
  // X2 (the column index) is nearly deterministic.
  const auto j = JointPmf::from_rows({{0.4, 0.09}, {0.005, 0.005}, {0.09, 0.4}, {0.005, 0.005}});
  const auto rep = row_major({2, 2, false}, 4);
  const double h2x = x2_entropies(j, rep).h_x2;
  ASSERT_LT(h2x, mutual_information(j));
  EXPECT_THROW(extend_separated(j, 0.5 * (h2x + mutual_information(j)), rep, {10000, 1, 1}),
               ValidationError);
}

TEST(SeparatedTest, ZeroEpsilonMatchesSfrl) {
  auto rng = make_rng(8);
  const auto j = random_joint(4, 3, rng);
  const auto rep = column_major({2, 2, false}, 4);
  const auto e = extend_separated(j, 0.0, rep, {50000, 4, 2});
  const auto s = synthesize_sfrl(j, {50000, 4, 2});
  const auto a = naive_quantities(e.composite.induced), b = naive_quantities(s.induced);
  EXPECT_NEAR(a.i_yu, b.i_yu, 1e-12);
  EXPECT_NEAR(a.i_xu_given_y, b.i_xu_given_y, 1e-12);
}

TEST(RandomizedResponseTest, CoinIsIndependentOfXAndY) {
  auto rng = make_rng(13);
  const auto j = random_joint(3, 3, rng);
  const double eps = 0.5 * mutual_information(j);
  const auto e = extend_efrl(j, eps);
  const std::size_t nw = e.response.w_size(), n = 400000;
  const auto draws = sample_mechanism(e.composite, n, 99);
  std::vector<double> total(9, 0.0), constant(9, 0.0);
  for (const auto& d : draws) {
    total[d.x * 3 + d.y] += 1;
    if (d.u % nw == e.response.constant()) constant[d.x * 3 + d.y] += 1;
  }
  const double q = 1.0 - e.response.alpha;
  for (std::size_t c = 0; c < 9; ++c) {
    if (total[c] < 100) continue;
    const double sd = std::sqrt(q * (1 - q) / total[c]);
    EXPECT_NEAR(constant[c] / total[c], q, 5.0 * sd) << "cell " << c;
  }
}

}  // namespace
}  // namespace pmech
