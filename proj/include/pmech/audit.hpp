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

/// Mechanism audit: the four information quantities of the induced (X, Y, U)
/// law, the key identity
///   I(Y;U) = I(X;U) + H(Y|X) - H(Y|U,X) - I(X;U|Y),
/// and the contract each construction claims. Empirical mechanisms carry a
/// bootstrap tolerance (sigma x standard deviation over codebook resamples).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmech/bounds.hpp"
#include "pmech/errors.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/probability.hpp"
#include "pmech/random.hpp"
#include "pmech/synthesis.hpp"

namespace pmech {

struct InfoQuantities {
  double i_ux = 0.0;
  double i_yu = 0.0;
  double h_y_given_ux = 0.0;
  double i_xu_given_y = 0.0;
  double h_y_given_x = 0.0;
  /// |I(Y;U) - (I(X;U) + H(Y|X) - H(Y|U,X) - I(X;U|Y))| from unclamped entropies.
  double residual = 0.0;
};

struct Comparison {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // "<=", ">=" or "=="
  double tolerance = 0.0;
  double slack = 0.0;  // positive when satisfied with room to spare
  bool pass = false;
};

struct AuditReport {
  Construction construction = Construction::custom;
  Flavor flavor = Flavor::exact;
  double epsilon = 0.0;
  double log_base = 2.0;
  double i_ux = 0.0;
  double i_yu = 0.0;
  double h_y_given_ux = 0.0;
  double i_xu_given_y = 0.0;
  std::optional<double> delta_i_ux, delta_i_yu, delta_h_y_given_ux, delta_i_xu_given_y;
  double key_identity_residual = 0.0;
  double key_identity_tolerance = 1e-9;
  std::size_t u_size = 0;
  std::optional<bool> cardinality_bound_ok;
  std::optional<std::size_t> cardinality_bound;
  std::vector<Comparison> comparisons;
  std::vector<std::string> notes;

  bool key_identity_ok() const { return key_identity_residual <= key_identity_tolerance; }
  bool pass() const {
    if (!key_identity_ok()) return false;
    if (cardinality_bound_ok && !*cardinality_bound_ok) return false;
    return std::all_of(comparisons.begin(), comparisons.end(),
                       [](const Comparison& c) { return c.pass; });
  }
};

struct AuditOptions {
  std::size_t resamples = 200;
  std::uint64_t bootstrap_seed = 7;
  double sigma = 3.0;
  double exact_tolerance = 1e-9;
};

namespace detail {

inline InfoQuantities quantities_from_entropies(double hx, double hy, double hu, double hxy,
                                                double hxu, double hyu, double hxyu) {
  InfoQuantities q;
  const double i_ux = hx + hu - hxu;
  const double i_yu = hy + hu - hyu;
  const double h_y_ux = hxyu - hxu;
  const double i_xu_y = hxy + hyu - hxyu - hy;
  q.h_y_given_x = hxy - hx;
  q.residual = std::abs(i_yu - (i_ux + q.h_y_given_x - h_y_ux - i_xu_y));
  q.i_ux = std::max(0.0, i_ux);
  q.i_yu = std::max(0.0, i_yu);
  q.h_y_given_ux = std::max(0.0, h_y_ux);
  q.i_xu_given_y = std::max(0.0, i_xu_y);
  return q;
}

/// Same quantities for a codebook law, touching only its nonzero entries.
inline InfoQuantities codebook_quantities(std::span<const double> px, std::size_t ny,
                                          const std::vector<std::vector<std::size_t>>& maps,
                                          std::span<const double> weights,
                                          const RandomizedResponse* rr) {
  const std::size_t nx = px.size(), nb = maps.size();
  const std::size_t nw = rr ? rr->w_size() : 1, nu = nb * nw;
  std::vector<double> pxy(nx * ny, 0.0), pu(nu, 0.0), pxu(nx * nu, 0.0), pyu(ny * nu, 0.0);
  double hxyu = 0.0;
  auto add = [&](std::size_t x, std::size_t y, std::size_t u, double p) {
    if (p <= 0.0) return;
    pxy[x * ny + y] += p;
    pu[u] += p;
    pxu[x * nu + u] += p;
    pyu[y * nu + u] += p;
    hxyu -= p * std::log(p);
  };
  for (std::size_t x = 0; x < nx; ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      const double base = px[x] * weights[b];
      const std::size_t y = maps[b][x];
      if (!rr) {
        add(x, y, b, base);
      } else {
        add(x, y, b * nw + rr->source_of_x[x], base * rr->alpha);
        add(x, y, b * nw + rr->constant(), base * (1.0 - rr->alpha));
      }
    }
  }
  std::vector<double> py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) py[y] += pxy[x * ny + y];
  const double hx = detail::entropy_nats(px), hy = detail::entropy_nats(py);
  return quantities_from_entropies(hx, hy, detail::entropy_nats(pu), detail::entropy_nats(pxy),
                                   detail::entropy_nats(pxu), detail::entropy_nats(pyu), hxyu);
}

inline InfoQuantities scale(InfoQuantities q, double factor) {
  q.i_ux *= factor;
  q.i_yu *= factor;
  q.h_y_given_ux *= factor;
  q.i_xu_given_y *= factor;
  q.h_y_given_x *= factor;
  q.residual *= factor;
  return q;
}

inline void check_provenance(const Mechanism& m, const JointPmf& j, const AuditOptions& opt) {
  if (m.x_size != j.x_size() || m.y_size != j.y_size())
    throw ProvenanceError("mechanism alphabet sizes differ from the joint");
  const auto px = m.induced.marginal(kX);
  for (std::size_t x = 0; x < j.x_size(); ++x)
    if (std::abs(px[x] - j.px()[x]) > opt.exact_tolerance)
      throw ProvenanceError("induced X-marginal differs from P_X");
  const auto pxy = m.induced.marginal(kX | kY);
  for (std::size_t x = 0; x < j.x_size(); ++x)
    for (std::size_t y = 0; y < j.y_size(); ++y) {
      const double diff = std::abs(pxy[x * j.y_size() + y] - j(x, y));
      double tol = opt.exact_tolerance;
      if (m.flavor == Flavor::empirical && m.sampling && j.px()[x] > 0.0) {
        // Each conditional P(y|x) is a mean of `budget` Bernoulli draws.
        const double p = j(x, y) / j.px()[x];
        const double n = static_cast<double>(m.sampling->budget);
        tol += 6.0 * j.px()[x] * std::sqrt(p * (1.0 - p) / n) + j.px()[x] / n;
      }
      if (diff > tol) {
        std::ostringstream os;
        os << "induced (X,Y)-marginal differs from P_XY at (" << x << "," << y
           << "): |diff| = " << diff << " > " << tol;
        throw ProvenanceError(os.str());
      }
    }
}

inline Comparison compare(std::string name, double measured, const char* relation, double bound,
                          double tolerance) {
  Comparison c{std::move(name), measured, bound, relation, tolerance, 0.0, false};
  const std::string rel = relation;
  if (rel == "<=") c.slack = bound - measured;
  else if (rel == ">=") c.slack = measured - bound;
  else c.slack = -std::abs(measured - bound);
  c.pass = c.slack >= -tolerance;
  return c;
}

}  // namespace detail

/// Information quantities of an induced law in the configured log base.
inline InfoQuantities information_quantities(const TripletPmf& t, const InfoConfig& cfg = {}) {
  check_log_base(cfg.log_base);
  const InfoConfig nats{std::exp(1.0), cfg.tau_norm};
  auto h = [&](unsigned mask) { return marginal_entropy(t, mask, nats); };
  const auto q = detail::quantities_from_entropies(h(kX), h(kY), h(kU), h(kX | kY), h(kX | kU),
                                                   h(kY | kU), h(kX | kY | kU));
  return detail::scale(q, 1.0 / std::log(cfg.log_base));
}

/// Audits `m` against the joint it was built from and the bounds `report`.
inline AuditReport audit(const Mechanism& m, const JointPmf& j, const BoundsReport& report,
                         const AuditOptions& opt = {}, const InfoConfig& cfg = {}) {
  detail::check_provenance(m, j, opt);
  const auto q = information_quantities(m.induced, cfg);
  AuditReport a;
  a.construction = m.provenance.construction;
  a.flavor = m.flavor;
  a.epsilon = m.provenance.epsilon;
  a.log_base = cfg.log_base;
  a.i_ux = q.i_ux;
  a.i_yu = q.i_yu;
  a.h_y_given_ux = q.h_y_given_ux;
  a.i_xu_given_y = q.i_xu_given_y;
  a.key_identity_residual = q.residual;
  a.key_identity_tolerance = opt.exact_tolerance;
  a.u_size = m.support_size();

  double d_ux = opt.exact_tolerance, d_yu = opt.exact_tolerance, d_h = opt.exact_tolerance,
         d_xu_y = opt.exact_tolerance;
  if (m.flavor == Flavor::empirical && m.sampling) {
    const auto& rec = *m.sampling;
    const RandomizedResponse* rr = m.provenance.response ? &*m.provenance.response : nullptr;
    const double to_base = 1.0 / std::log(cfg.log_base);
    auto rng = make_rng(opt.bootstrap_seed, 0);
    const auto weights = detail::codebook_weights(rec.counts);
    std::vector<std::array<double, 4>> draws;
    draws.reserve(opt.resamples);
    for (std::size_t r = 0; r < opt.resamples; ++r) {
      const auto counts = sample_multinomial(rec.budget, weights, rng);
      const auto w = detail::codebook_weights(counts);
      const auto b = detail::scale(detail::codebook_quantities(j.px(), j.y_size(), rec.maps, w, rr),
                                   to_base);
      draws.push_back({b.i_ux, b.i_yu, b.h_y_given_ux, b.i_xu_given_y});
    }
    auto delta = [&](int k) {
      if (draws.size() < 2) return opt.exact_tolerance;
      double mean = 0.0, var = 0.0;
      for (const auto& d : draws) mean += d[k];
      mean /= static_cast<double>(draws.size());
      for (const auto& d : draws) var += (d[k] - mean) * (d[k] - mean);
      var /= static_cast<double>(draws.size() - 1);
      return std::max(opt.sigma * std::sqrt(var), opt.exact_tolerance);
    };
    a.delta_i_ux = d_ux = delta(0);
    a.delta_i_yu = d_yu = delta(1);
    a.delta_h_y_given_ux = d_h = delta(2);
    a.delta_i_xu_given_y = d_xu_y = delta(3);
    a.key_identity_tolerance = std::max({d_ux, d_yu, d_h, d_xu_y});
  }

  const double eps = m.provenance.epsilon;
  const double c = report.sfrl_constant;
  const std::size_t nx = j.x_size(), ny = j.y_size();
  const std::size_t frl_card = nx * (ny - 1) + 1;
  auto push = [&](std::string name, double measured, const char* rel, double bound, double tol) {
    a.comparisons.push_back(detail::compare(std::move(name), measured, rel, bound, tol));
  };
  auto cardinality = [&](std::size_t bound) {
    a.cardinality_bound = bound;
    a.cardinality_bound_ok = a.u_size <= bound;
  };

  switch (m.provenance.construction) {
    case Construction::frl:
      push("I(U;X) = 0", a.i_ux, "<=", 0.0, 1e-10);
      push("H(Y|U,X) = 0", a.h_y_given_ux, "<=", 0.0, 1e-10);
      cardinality(frl_card);
      break;
    case Construction::sfrl:
      push("I(U;X) = 0", a.i_ux, "<=", 0.0, d_ux);
      push("H(Y|U,X) = 0", a.h_y_given_ux, "<=", 0.0, d_h);
      push("I(X;U|Y) <= C", a.i_xu_given_y, "<=", c, d_xu_y);
      a.notes.push_back("cardinality not checked: codebook support counts distinct maps");
      break;
    case Construction::efrl:
      push("I(U;X) = eps", a.i_ux, "==", eps, opt.exact_tolerance);
      push("H(Y|U,X) = 0", a.h_y_given_ux, "<=", 0.0, opt.exact_tolerance);
      if (report.l1) push("I(Y;U) >= L1", a.i_yu, ">=", *report.l1, opt.exact_tolerance);
      cardinality(frl_card * (nx + 1));
      break;
    case Construction::esfrl: {
      const double alpha = report.alpha.value_or(0.0);
      push("I(U;X) = eps", a.i_ux, "==", eps, d_ux);
      push("H(Y|U,X) = 0", a.h_y_given_ux, "<=", 0.0, d_h);
      push("I(X;U|Y) <= alpha H(X|Y) + (1-alpha) C", a.i_xu_given_y, "<=",
           alpha * report.h_x_given_y + (1.0 - alpha) * c, d_xu_y);
      if (report.l2) push("I(Y;U) >= L2", a.i_yu, ">=", *report.l2, d_yu);
      a.notes.push_back("cardinality not checked: codebook support counts distinct maps");
      break;
    }
    case Construction::separated: {
      push("I(U;X) = eps", a.i_ux, "==", eps, d_ux);
      push("H(Y|U,X) = 0", a.h_y_given_ux, "<=", 0.0, d_h);
      if (m.provenance.representation) {
        const auto t = bound_terms_for_representation(j, eps, *m.provenance.representation, cfg);
        push("I(Y;U) >= L4(rep)", a.i_yu, ">=", t.l4_term, d_yu);
        push("I(Y;U) >= L5(rep)", a.i_yu, ">=", t.l5_term, d_yu);
      } else {
        a.notes.push_back("separated mechanism without representation: L4/L5 terms skipped");
      }
      break;
    }
    case Construction::custom:
      push("I(U;X) <= eps", a.i_ux, "<=", eps, opt.exact_tolerance);
      push("I(Y;U) <= U1", a.i_yu, "<=", report.u1, opt.exact_tolerance);
      break;
  }
  return a;
}

/// Audit with bounds evaluated at the mechanism's own epsilon (formula level,
/// no g0 solve).
inline AuditReport audit(const Mechanism& m, const JointPmf& j, const AuditOptions& opt = {},
                         const InfoConfig& cfg = {}) {
  BoundsOptions bo;
  bo.include_l3 = false;
  return audit(m, j, evaluate_bounds(j, m.provenance.epsilon, bo, cfg), opt, cfg);
}

}  // namespace pmech
