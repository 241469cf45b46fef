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

// Leakage-epsilon mechanisms: a base variable with I(Ubar;X) = 0 plus a
// randomized response W, U = (Ubar, W). Since Ubar is independent of (X, W),
// I(U;X) = I(W;X) = alpha * H(source) = epsilon.

#include <sstream>

#include "pmech/errors.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/probability.hpp"
#include "pmech/separation.hpp"
#include "pmech/synthesis.hpp"

namespace pmech {

namespace detail {

inline void check_epsilon_range(const JointPmf& j, double epsilon, const InfoConfig& cfg) {
  const double mi = mutual_information(j, cfg);
  if (!(epsilon >= 0.0) || !(epsilon < mi)) {
    std::ostringstream os;
    os << "epsilon = " << epsilon << " outside [0, I(X;Y) = " << mi
       << "); for epsilon >= I(X;Y) the optimum is H(Y), attained by U = Y";
    throw OutOfRangeError(os.str());
  }
}

inline RandomizedResponse response_over_x(const JointPmf& j, double epsilon,
                                          const InfoConfig& cfg) {
  RandomizedResponse rr;
  rr.source = RandomizedResponse::Source::x;
  rr.alpha = epsilon / entropy_x(j, cfg);
  rr.source_size = j.x_size();
  rr.source_of_x.resize(j.x_size());
  std::iota(rr.source_of_x.begin(), rr.source_of_x.end(), std::size_t{0});
  return rr;
}

}  // namespace detail

/// Randomized response copying the X2 coordinate with alpha2 = eps / H(X2).
inline RandomizedResponse response_over_x2(const JointPmf& j, const Representation& rep,
                                           double epsilon, const InfoConfig& cfg = {}) {
  validate_representation(rep, j.x_size());
  const auto e = x2_entropies(j, rep, cfg);
  if (!(e.h_x2 > 0.0) || e.h_x2 < epsilon) {
    std::ostringstream os;
    os << "representation unusable at epsilon = " << epsilon << ": H(X2) = " << e.h_x2;
    throw ValidationError(os.str());
  }
  RandomizedResponse rr;
  rr.source = RandomizedResponse::Source::x2;
  rr.alpha = epsilon / e.h_x2;
  rr.source_size = rep.n2;
  rr.source_of_x.resize(j.x_size());
  for (std::size_t x = 0; x < j.x_size(); ++x) rr.source_of_x[x] = rep.x2(x);
  return rr;
}

/// FRL base plus randomized response over X (exact).
inline ExtendedMechanism extend_efrl(const JointPmf& j, double epsilon,
                                     Arithmetic arithmetic = Arithmetic::floating,
                                     const InfoConfig& cfg = {}) {
  detail::check_epsilon_range(j, epsilon, cfg);
  auto base = synthesize_frl(j, {}, arithmetic, cfg);
  auto rr = detail::response_over_x(j, epsilon, cfg);
  auto composite = compose_with_response(base, rr, Construction::efrl, epsilon);
  return {std::move(base), rr, std::move(composite), epsilon};
}

/// SFRL base plus randomized response over X (empirical).
inline ExtendedMechanism extend_esfrl(const JointPmf& j, double epsilon,
                                      const SfrlOptions& opt = {}, const InfoConfig& cfg = {}) {
  detail::check_epsilon_range(j, epsilon, cfg);
  auto rr = detail::response_over_x(j, epsilon, cfg);
  auto base = synthesize_sfrl(j, opt, cfg);
  Provenance prov = base.provenance;
  prov.construction = Construction::esfrl;
  prov.epsilon = epsilon;
  prov.response = rr;
  auto composite = codebook_mechanism(j, *base.sampling, std::move(prov), cfg);
  return {std::move(base), rr, std::move(composite), epsilon};
}

/// SFRL base over X = (X1, X2) plus randomized response over X2 only. One
/// mechanism; both utility guarantees are properties of the same U.
inline ExtendedMechanism extend_separated(const JointPmf& j, double epsilon,
                                          const Representation& rep,
                                          const SfrlOptions& opt = {},
                                          const InfoConfig& cfg = {}) {
  detail::check_epsilon_range(j, epsilon, cfg);
  auto rr = response_over_x2(j, rep, epsilon, cfg);
  auto base = synthesize_sfrl(j, opt, cfg);
  Provenance prov = base.provenance;
  prov.construction = Construction::separated;
  prov.epsilon = epsilon;
  prov.response = rr;
  prov.representation = rep;
  auto composite = codebook_mechanism(j, *base.sampling, std::move(prov), cfg);
  return {std::move(base), rr, std::move(composite), epsilon};
}

/// One draw of (x, y, u) from a mechanism applied to its induced law.
struct MechanismDraw {
  std::size_t x = 0, y = 0, u = 0;
};

/// i.i.d. draws from the induced law of `m`, by inversion of its table.
inline std::vector<MechanismDraw> sample_mechanism(const Mechanism& m, std::size_t n,
                                                   std::uint64_t seed) {
  auto rng = make_rng(seed, 0xd1a);
  const auto data = m.induced.data();
  std::vector<double> cum(data.size());
  std::partial_sum(data.begin(), data.end(), cum.begin());
  cum.back() = std::max(cum.back(), 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<MechanismDraw> out(n);
  for (auto& d : out) {
    const double v = unif(rng) * cum.back();
    const auto idx = static_cast<std::size_t>(
        std::distance(cum.begin(), std::upper_bound(cum.begin(), cum.end(), v)));
    const std::size_t i = std::min(idx, cum.size() - 1);
    d.u = i % m.u_size;
    d.y = (i / m.u_size) % m.y_size;
    d.x = i / (m.u_size * m.y_size);
  }
  return out;
}

}  // namespace pmech
