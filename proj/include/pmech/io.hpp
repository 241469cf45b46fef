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

/// JSON and CSV exchange formats (nlohmann::json).

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pmech/audit.hpp"
#include "pmech/bounds.hpp"
#include "pmech/errors.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/oracle.hpp"
#include "pmech/perfect_privacy.hpp"
#include "pmech/probability.hpp"
#include "pmech/scenario.hpp"
#include "pmech/separation.hpp"
#include "pmech/synthesis.hpp"

namespace pmech::io {

using json = nlohmann::json;

inline json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Bounds that do not apply are spelled out rather than left null.
inline json bound(const std::optional<double>& v) { return v ? json(*v) : json("not applicable"); }

// ---- JointPmf: {"x_size": n, "y_size": m, "pmf": [[p(x=0,y=0), ...], ...]}

inline json to_json(const JointPmf& j) {
  json rows = json::array();
  for (std::size_t x = 0; x < j.x_size(); ++x) {
    const auto r = j.row(x);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"x_size", j.x_size()}, {"y_size", j.y_size()}, {"pmf", rows}};
}

inline JointPmf joint_from_json(const json& in, double tau_norm = 1e-9) {
  try {
    const auto& pmf = in.at("pmf");
    if (!pmf.is_array() || pmf.empty()) throw ValidationError("pmf must be a non-empty array");
    if (pmf.front().is_array()) {
      auto rows = pmf.get<std::vector<std::vector<double>>>();
      if (in.contains("x_size") && in["x_size"].get<std::size_t>() != rows.size())
        throw ValidationError("x_size does not match the number of pmf rows");
      auto j = JointPmf::from_rows(rows, tau_norm);
      if (in.contains("y_size") && in["y_size"].get<std::size_t>() != j.y_size())
        throw ValidationError("y_size does not match the pmf row length");
      return j;
    }
    return JointPmf(in.at("x_size").get<std::size_t>(), in.at("y_size").get<std::size_t>(),
                    pmf.get<std::vector<double>>(), tau_norm);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("joint pmf json: ") + e.what());
  }
}

// ---- Representation: {"n1", "n2", "padded", "assignment": [[x1, x2], ...]}

inline json to_json(const Representation& rep) {
  json a = json::array();
  for (std::size_t x = 0; x < rep.x_size(); ++x) a.push_back({rep.x1(x), rep.x2(x)});
  return {{"n1", rep.n1}, {"n2", rep.n2}, {"padded", rep.padded}, {"assignment", a}};
}

inline Representation representation_from_json(const json& in) {
  try {
    Representation rep;
    rep.n1 = in.at("n1").get<std::size_t>();
    rep.n2 = in.at("n2").get<std::size_t>();
    rep.padded = in.value("padded", false);
    for (const auto& p : in.at("assignment")) {
      const auto x1 = p.at(0).get<std::size_t>(), x2 = p.at(1).get<std::size_t>();
      if (x1 >= rep.n1 || x2 >= rep.n2) throw ValidationError("assignment entry out of range");
      rep.cell.push_back(x1 * rep.n2 + x2);
    }
    return rep;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("representation json: ") + e.what());
  }
}

// ---- Mechanism

inline json to_json(const RandomizedResponse& rr) {
  return {{"source", to_string(rr.source)},
          {"alpha", rr.alpha},
          {"source_size", rr.source_size},
          {"constant", rr.constant()},
          {"source_of_x", rr.source_of_x}};
}

inline RandomizedResponse response_from_json(const json& in) {
  RandomizedResponse rr;
  rr.source = in.at("source").get<std::string>() == "X2" ? RandomizedResponse::Source::x2
                                                         : RandomizedResponse::Source::x;
  rr.alpha = in.at("alpha").get<double>();
  rr.source_size = in.at("source_size").get<std::size_t>();
  rr.source_of_x = in.at("source_of_x").get<std::vector<std::size_t>>();
  return rr;
}

inline json to_json(const IndexDiagnostics& d) {
  return {{"k_max", d.k_max},
          {"k_p999", d.k_p999},
          {"tail_mass", d.tail_mass},
          {"mean_candidates", d.mean_candidates}};
}

inline Construction construction_from_string(const std::string& s) {
  for (auto c : {Construction::frl, Construction::sfrl, Construction::efrl, Construction::esfrl,
                 Construction::separated, Construction::custom})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown construction '" + s + "'");
}

inline json to_json(const Mechanism& m, const JointPmf& j) {
  json kernel = json::array();
  for (std::size_t x = 0; x < m.x_size; ++x) {
    json xs = json::array();
    for (std::size_t y = 0; y < m.y_size; ++y) {
      std::vector<double> row(m.u_size);
      for (std::size_t u = 0; u < m.u_size; ++u) row[u] = m.kernel_at(x, y, u);
      xs.push_back(row);
    }
    kernel.push_back(xs);
  }
  const auto& p = m.provenance;
  json prov = {{"construction", to_string(p.construction)},
               {"arithmetic", to_string(p.arithmetic)},
               {"y_order", p.y_order},
               {"epsilon", p.epsilon},
               {"log_base", p.log_base},
               {"response", p.response ? to_json(*p.response) : json(nullptr)},
               {"representation", p.representation ? to_json(*p.representation) : json(nullptr)}};
  json out = {{"x_size", m.x_size},    {"y_size", m.y_size}, {"u_size", m.u_size},
              {"support_size", m.support_size()},
              {"flavor", to_string(m.flavor)},
              {"provenance", prov},   {"kernel", kernel},   {"joint", to_json(j)}};
  if (m.sampling) {
    const auto& s = *m.sampling;
    out["sampling"] = {{"budget", s.budget}, {"seed", s.seed},   {"shards", s.shards},
                       {"maps", s.maps},     {"counts", s.counts},
                       {"diagnostics", to_json(s.diagnostics)}};
  } else {
    out["sampling"] = nullptr;
  }
  return out;
}

/// Rebuilds a mechanism against `j`. Codebook mechanisms are rebuilt from their
/// sampling record; others from the kernel.
inline Mechanism mechanism_from_json(const json& in, const JointPmf& j,
                                     const InfoConfig& cfg = {}) {
  try {
    Provenance prov;
    const auto& p = in.at("provenance");
    prov.construction = construction_from_string(p.at("construction").get<std::string>());
    prov.arithmetic = p.value("arithmetic", std::string("floating")) == "rational"
                          ? Arithmetic::rational
                          : Arithmetic::floating;
    prov.y_order = p.value("y_order", std::vector<std::size_t>{});
    prov.epsilon = p.value("epsilon", 0.0);
    prov.log_base = p.value("log_base", cfg.log_base);
    if (p.contains("response") && !p["response"].is_null())
      prov.response = response_from_json(p["response"]);
    if (p.contains("representation") && !p["representation"].is_null())
      prov.representation = representation_from_json(p["representation"]);

    if (in.contains("sampling") && !in["sampling"].is_null()) {
      const auto& s = in["sampling"];
      SamplingRecord rec;
      rec.budget = s.at("budget").get<std::uint64_t>();
      rec.seed = s.value("seed", std::uint64_t{0});
      rec.shards = s.value("shards", std::size_t{1});
      rec.maps = s.at("maps").get<std::vector<std::vector<std::size_t>>>();
      rec.counts = s.at("counts").get<std::vector<std::uint64_t>>();
      if (rec.maps.size() != rec.counts.size())
        throw ValidationError("sampling maps and counts differ in length");
      for (const auto& mp : rec.maps) {
        if (mp.size() != j.x_size()) throw ValidationError("sampling map length differs from |X|");
        for (auto y : mp)
          if (y >= j.y_size()) throw ValidationError("sampling map value out of range");
      }
      if (s.contains("diagnostics")) {
        const auto& d = s["diagnostics"];
        rec.diagnostics.k_max = d.value("k_max", std::uint64_t{0});
        rec.diagnostics.k_p999 = d.value("k_p999", std::uint64_t{0});
        rec.diagnostics.tail_mass = d.value("tail_mass", 0.0);
        rec.diagnostics.mean_candidates = d.value("mean_candidates", 0.0);
      }
      return codebook_mechanism(j, std::move(rec), std::move(prov), cfg);
    }

    const auto kernel = in.at("kernel").get<std::vector<std::vector<std::vector<double>>>>();
    if (kernel.size() != j.x_size()) throw ValidationError("kernel x dimension differs from |X|");
    const std::size_t nx = j.x_size(), ny = j.y_size();
    const std::size_t nu = kernel.empty() || kernel[0].empty() ? 0 : kernel[0][0].size();
    if (nu == 0) throw ValidationError("kernel has no U symbols");
    std::vector<double> k(nx * ny * nu), t(nx * ny * nu);
    for (std::size_t x = 0; x < nx; ++x) {
      if (kernel[x].size() != ny) throw ValidationError("kernel y dimension differs from |Y|");
      for (std::size_t y = 0; y < ny; ++y) {
        if (kernel[x][y].size() != nu) throw ValidationError("kernel rows differ in |U|");
        validate_pmf(kernel[x][y], cfg.tau_norm, "kernel row");
        for (std::size_t u = 0; u < nu; ++u) {
          k[(x * ny + y) * nu + u] = kernel[x][y][u];
          t[(x * ny + y) * nu + u] = j(x, y) * kernel[x][y][u];
        }
      }
    }
    const Flavor flavor = in.value("flavor", std::string("exact")) == "empirical"
                              ? Flavor::empirical
                              : Flavor::exact;
    return Mechanism{nx, ny, nu, std::move(k), TripletPmf({nx, ny, nu}, std::move(t), cfg.tau_norm),
                     flavor, std::move(prov), std::nullopt};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mechanism json: ") + e.what());
  }
}

// ---- Reports

inline json to_json(const BoundsReport& r) {
  json table = json::array();
  for (const auto& row : r.table)
    table.push_back({{"representation", to_json(row.rep)},
                     {"alpha2", row.alpha2},
                     {"h_x2", row.h_x2},
                     {"h_x2_given_y", row.h_x2_given_y},
                     {"L4_term", row.l4_term},
                     {"L5_term", row.l5_term}});
  return {{"epsilon", r.epsilon},
          {"log_base", r.log_base},
          {"mutual_information", r.mutual_information},
          {"H_X", r.h_x},
          {"H_Y", r.h_y},
          {"H_Y_given_X", r.h_y_given_x},
          {"H_X_given_Y", r.h_x_given_y},
          {"sfrl_constant", r.sfrl_constant},
          {"alpha", opt(r.alpha)},
          {"U1", r.u1},
          {"paper_literal_U1", r.u1_literal},
          {"L1", bound(r.l1)},
          {"L2", bound(r.l2)},
          {"L3", bound(r.l3)},
          {"L4", bound(r.l4)},
          {"L5", bound(r.l5)},
          {"g0", bound(r.g0)},
          {"max_lower_bound", r.max_lower_bound()},
          {"argmin_L4", r.argmin_l4 ? to_json(*r.argmin_l4) : json(nullptr)},
          {"argmin_L5", r.argmin_l5 ? to_json(*r.argmin_l5) : json(nullptr)},
          {"rep_policy_requested", to_string(r.policy_requested)},
          {"rep_policy_used", to_string(r.policy_used)},
          {"representations", table},
          {"notes", r.notes}};
}

inline json to_json(const AuditReport& a) {
  json cmp = json::array();
  for (const auto& c : a.comparisons)
    cmp.push_back({{"name", c.name},
                   {"measured", c.measured},
                   {"relation", c.relation},
                   {"bound", c.bound},
                   {"tolerance", c.tolerance},
                   {"slack", c.slack},
                   {"pass", c.pass}});
  return {{"construction", to_string(a.construction)},
          {"flavor", to_string(a.flavor)},
          {"epsilon", a.epsilon},
          {"log_base", a.log_base},
          {"I_UX", a.i_ux},
          {"I_YU", a.i_yu},
          {"H_Y_given_UX", a.h_y_given_ux},
          {"I_XU_given_Y", a.i_xu_given_y},
          {"delta_stat",
           {{"I_UX", opt(a.delta_i_ux)},
            {"I_YU", opt(a.delta_i_yu)},
            {"H_Y_given_UX", opt(a.delta_h_y_given_ux)},
            {"I_XU_given_Y", opt(a.delta_i_xu_given_y)}}},
          {"key_identity_residual", a.key_identity_residual},
          {"key_identity_tolerance", a.key_identity_tolerance},
          {"u_size", a.u_size},
          {"cardinality_bound", a.cardinality_bound ? json(*a.cardinality_bound) : json(nullptr)},
          {"cardinality_bound_ok",
           a.cardinality_bound_ok ? json(*a.cardinality_bound_ok) : json(nullptr)},
          {"bound_comparisons", cmp},
          {"pass", a.pass()},
          {"notes", a.notes}};
}

inline json to_json(const PerfectPrivacyPolytope& poly, const PerfectPrivacyResult& r) {
  json w = json::array();
  for (std::size_t i = 0; i < r.witness.weights.size(); ++i)
    w.push_back({{"weight", r.witness.weights[i]}, {"pmf", r.witness.pmfs[i]}});
  return {{"g0", r.value},
          {"rank", poly.rank},
          {"vertices", poly.vertices},
          {"witness", w},
          {"witness_utility", r.witness.utility},
          {"witness_residual", r.witness.residual}};
}

inline json to_json(const ScenarioInstance& s) {
  json h = json::array();
  for (const auto& c : s.hypothesis)
    h.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  return {{"id", to_string(s.spec.id)},
          {"x1_size", s.spec.x1_size},
          {"x2_size", s.spec.x2_size},
          {"y_size", s.spec.y_size},
          {"margin", s.spec.margin},
          {"seed", s.spec.seed},
          {"attempts", s.attempts},
          {"degenerate", s.degenerate},
          {"epsilon_max", s.epsilon_max},
          {"hypothesis", h},
          {"representation", to_json(s.rep)},
          {"joint", to_json(s.joint)}};
}

inline json to_json(const DominanceRecord& d) {
  json rel = json::array();
  for (const auto& r : d.relations)
    rel.push_back({{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
  return {{"id", to_string(d.id)},
          {"epsilon", d.epsilon},
          {"formula_level", d.formula_level},
          {"L1", d.l1},
          {"L2", d.l2},
          {"L4", d.l4},
          {"L5", d.l5},
          {"alpha", d.alpha},
          {"alpha2", d.alpha2},
          {"relations", rel},
          {"identity_measured", opt(d.identity_measured)},
          {"identity_expected", opt(d.identity_expected)},
          {"holds", d.holds()}};
}

// ---- Files and CSV

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

/// Writes to `path`, or stdout when `path` is empty or "-".
inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_sweep_csv(std::ostream& os, const std::vector<BoundsReport>& rows) {
  auto cell = [&](const std::optional<double>& v) {
    if (v) os << *v;
  };
  os << std::setprecision(17) << "epsilon,U1,L1,L2,L3,L4,L5,g0\n";
  for (const auto& r : rows) {
    os << r.epsilon << ',' << r.u1 << ',';
    cell(r.l1);
    os << ',';
    cell(r.l2);
    os << ',';
    cell(r.l3);
    os << ',';
    cell(r.l4);
    os << ',';
    cell(r.l5);
    os << ',';
    cell(r.g0);
    os << '\n';
  }
}

}  // namespace pmech::io
