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

// Command-line front end: bounds, sweeps, synthesis, audits, oracle, g0,
// scenarios and representation sets over JSON files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmech/io.hpp"
#include "pmech/pmech.hpp"

namespace {

using pmech::io::json;

constexpr int kExitValidation = 2;
constexpr int kExitAssertion = 3;

struct Common {
  double log_base = 2.0;
  std::uint64_t seed = 1;
  std::string output;
  pmech::InfoConfig cfg() const { return {log_base, 1e-9}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--log-base", c.log_base, "Logarithm base (2 = bits)")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--output,-o", c.output, "Output file (default stdout)");
}

pmech::AssignmentPolicy parse_policy(const std::string& s) {
  if (s == "exhaustive") return pmech::AssignmentPolicy::exhaustive;
  if (s == "canonical") return pmech::AssignmentPolicy::canonical;
  throw pmech::ValidationError("unknown --rep-policy '" + s + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw pmech::ValidationError("--epsilon-grid: bad number '" + item + "'");
    }
  }
  if (parts.size() != 3) throw pmech::ValidationError("--epsilon-grid must be a:b:step");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || b < a) throw pmech::ValidationError("--epsilon-grid needs a <= b, step > 0");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = a + static_cast<double>(i) * step;
    if (v > b + 1e-12 * std::max(1.0, std::abs(b))) break;
    grid.push_back(v);
  }
  return grid;
}

pmech::JointPmf load_joint(const std::string& path, const Common& c) {
  return pmech::io::joint_from_json(pmech::io::read_json_file(path), c.cfg().tau_norm);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmech: privacy-utility bounds and mechanisms on finite alphabets"};
  app.require_subcommand(1);

  Common common;
  std::string input, mechanism_path, rep_path, policy = "exhaustive", grid, csv, method = "frl",
                                               arithmetic = "floating", scenario_id = "1";
  double epsilon = 0.0, margin = 2.0, eps_fraction = 0.5;
  std::optional<double> scenario_epsilon;
  std::uint64_t budget = 1'000'000;
  std::size_t shards = 8, u_cap = 4, oracle_budget = 20000, resamples = 200, cap = 8;
  std::size_t x1_size = 0, x2_size = 0, y_size = 0;
  bool no_l3 = false, markov_only = false;

  auto* bounds = app.add_subcommand("bounds", "Evaluate U1 and L1..L5 at one epsilon");
  bounds->add_option("--input,-i", input, "Joint pmf JSON")->required();
  bounds->add_option("--epsilon,-e", epsilon, "Leakage budget")->required();
  bounds->add_option("--rep-policy", policy, "exhaustive|canonical")->capture_default_str();
  bounds->add_flag("--no-l3", no_l3, "Skip g0 and L3");
  add_common(bounds, common);

  auto* sweep = app.add_subcommand("sweep", "Bounds over an epsilon grid as CSV");
  sweep->add_option("--input,-i", input, "Joint pmf JSON")->required();
  sweep->add_option("--epsilon-grid", grid, "a:b:step")->required();
  sweep->add_option("--csv", csv, "CSV output file (default stdout)");
  sweep->add_option("--rep-policy", policy, "exhaustive|canonical")->capture_default_str();
  sweep->add_flag("--no-l3", no_l3, "Skip g0 and L3");
  add_common(sweep, common);

  auto* synth = app.add_subcommand("synth", "Synthesize a mechanism");
  synth->add_option("--input,-i", input, "Joint pmf JSON")->required();
  synth->add_option("--method,-m", method, "frl|sfrl|efrl|esfrl|separated")->capture_default_str();
  synth->add_option("--epsilon,-e", epsilon, "Leakage budget (extended methods)");
  synth->add_option("--budget", budget, "Codebook samples (sampling methods)")->capture_default_str();
  synth->add_option("--shards", shards, "Sampling shards")->capture_default_str();
  synth->add_option("--arithmetic", arithmetic, "floating|rational (frl, efrl)")
      ->capture_default_str();
  synth->add_option("--rep", rep_path, "Representation JSON (separated; default: L4 arg-min)");
  synth->add_option("--rep-policy", policy, "exhaustive|canonical")->capture_default_str();
  add_common(synth, common);

  auto* audit = app.add_subcommand("audit", "Audit a mechanism against its joint");
  audit->add_option("--mechanism", mechanism_path, "Mechanism JSON")->required();
  audit->add_option("--input,-i", input, "Joint pmf JSON (default: joint stored in mechanism)");
  audit->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  add_common(audit, common);

  auto* oracle = app.add_subcommand("oracle", "Randomized lower estimate of h_eps");
  oracle->add_option("--input,-i", input, "Joint pmf JSON")->required();
  oracle->add_option("--epsilon,-e", epsilon, "Leakage budget")->required();
  oracle->add_option("--u-cap", u_cap, "Size of U")->capture_default_str();
  oracle->add_option("--budget", oracle_budget, "Random kernels")->capture_default_str();
  oracle->add_flag("--markov-only", markov_only, "Search kernels P(u|y) only");
  add_common(oracle, common);

  auto* g0cmd = app.add_subcommand("g0", "Perfect-privacy utility g0");
  g0cmd->add_option("--input,-i", input, "Joint pmf JSON")->required();
  add_common(g0cmd, common);

  auto* scenario = app.add_subcommand("scenario", "Generate a scenario and check its ordering");
  scenario->add_option("--id", scenario_id, "1|2|3|4|C1|C2")->required();
  scenario->add_option("--margin", margin, "Hypothesis slack")->capture_default_str();
  scenario->add_option("--x1-size", x1_size, "|X1| (0 = scenario default)");
  scenario->add_option("--x2-size", x2_size, "|X2| (0 = scenario default)");
  scenario->add_option("--y-size", y_size, "|Y| (0 = scenario default)");
  scenario->add_option("--epsilon,-e", scenario_epsilon, "Epsilon (default: fraction of max)");
  scenario->add_option("--epsilon-fraction", eps_fraction, "Fraction of the admissible epsilon")
      ->capture_default_str();
  add_common(scenario, common);

  auto* repset = app.add_subcommand("repset", "List the representations of X");
  repset->add_option("--input,-i", input, "Joint pmf JSON")->required();
  repset->add_option("--epsilon,-e", epsilon, "Keep representations with H(X2) >= epsilon");
  repset->add_option("--rep-policy", policy, "exhaustive|canonical")->capture_default_str();
  repset->add_option("--cap", cap, "Largest |X| enumerated exhaustively")->capture_default_str();
  add_common(repset, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const auto cfg = common.cfg();
    pmech::check_log_base(cfg.log_base);
    using pmech::io::dump;
    using pmech::io::to_json;

    if (*bounds) {
      const auto j = load_joint(input, common);
      pmech::BoundsOptions bo;
      bo.policy = parse_policy(policy);
      bo.include_l3 = !no_l3;
      pmech::io::write_text(common.output,
                            dump(to_json(pmech::compute_bounds(j, epsilon, bo, cfg))));
    } else if (*sweep) {
      const auto j = load_joint(input, common);
      const double mi = pmech::mutual_information(j, cfg);
      pmech::BoundsOptions bo;
      bo.policy = parse_policy(policy);
      bo.include_l3 = !no_l3;
      if (bo.include_l3 && mi > 0.0) {
        try {
          bo.g0 = pmech::g0(j, cfg, bo.vertex_cap).value;
        } catch (const pmech::SizeError& e) {
          std::cerr << "note: " << e.what() << "; L3 omitted\n";
          bo.include_l3 = false;
        }
      }
      std::vector<pmech::BoundsReport> rows;
      for (double e : parse_grid(grid)) {
        if (!(e >= 0.0) || !(e < mi)) {
          std::cerr << "note: epsilon " << e << " outside [0, I(X;Y) = " << mi << "); skipped\n";
          continue;
        }
        rows.push_back(pmech::compute_bounds(j, e, bo, cfg));
      }
      std::ostringstream os;
      pmech::io::write_sweep_csv(os, rows);
      pmech::io::write_text(csv.empty() ? common.output : csv, os.str());
    } else if (*synth) {
      const auto j = load_joint(input, common);
      const auto arith =
          arithmetic == "rational" ? pmech::Arithmetic::rational : pmech::Arithmetic::floating;
      if (arithmetic != "rational" && arithmetic != "floating")
        throw pmech::ValidationError("unknown --arithmetic '" + arithmetic + "'");
      pmech::SfrlOptions so{budget, common.seed, shards};
      std::optional<pmech::Mechanism> m;
      if (method == "frl") {
        m = pmech::synthesize_frl(j, {}, arith, cfg);
      } else if (method == "sfrl") {
        m = pmech::synthesize_sfrl(j, so, cfg);
      } else if (method == "efrl") {
        m = pmech::extend_efrl(j, epsilon, arith, cfg).composite;
      } else if (method == "esfrl") {
        m = pmech::extend_esfrl(j, epsilon, so, cfg).composite;
      } else if (method == "separated") {
        pmech::Representation rep;
        if (!rep_path.empty()) {
          rep = pmech::io::representation_from_json(pmech::io::read_json_file(rep_path));
        } else {
          pmech::BoundsOptions bo;
          bo.policy = parse_policy(policy);
          bo.include_l3 = false;
          const auto r = pmech::compute_bounds(j, epsilon, bo, cfg);
          if (!r.argmin_l4) throw pmech::ValidationError("no usable representation of X");
          rep = *r.argmin_l4;
        }
        m = pmech::extend_separated(j, epsilon, rep, so, cfg).composite;
      } else {
        throw pmech::ValidationError("unknown --method '" + method + "'");
      }
      pmech::io::write_text(common.output, dump(pmech::io::to_json(*m, j)));
    } else if (*audit) {
      const auto mj = pmech::io::read_json_file(mechanism_path);
      const auto j = input.empty() ? pmech::io::joint_from_json(mj.at("joint"))
                                   : load_joint(input, common);
      const auto m = pmech::io::mechanism_from_json(mj, j, cfg);
      pmech::AuditOptions ao;
      ao.resamples = resamples;
      ao.bootstrap_seed = common.seed;
      const auto report = pmech::audit(m, j, ao, cfg);
      pmech::io::write_text(common.output, dump(to_json(report)));
      if (!report.pass()) return kExitAssertion;
    } else if (*oracle) {
      const auto j = load_joint(input, common);
      pmech::OracleOptions oo;
      oo.u_cap = u_cap;
      oo.budget = oracle_budget;
      oo.seed = common.seed;
      oo.markov_only = markov_only;
      const auto r = pmech::estimate_h_eps(j, epsilon, oo, cfg);
      json out = {{"epsilon", epsilon},        {"log_base", cfg.log_base},
                  {"estimate", r.value},       {"leakage", r.leakage},
                  {"u_cap", u_cap},            {"budget", oracle_budget},
                  {"seed", common.seed},       {"markov_only", markov_only},
                  {"mechanism", pmech::io::to_json(r.mechanism, j)}};
      pmech::io::write_text(common.output, dump(out));
    } else if (*g0cmd) {
      const auto j = load_joint(input, common);
      const auto poly = pmech::enumerate_vertices(j);
      const auto r = pmech::g0(poly, j.py(), cfg);
      auto out = to_json(poly, r);
      out["log_base"] = cfg.log_base;
      pmech::io::write_text(common.output, dump(out));
    } else if (*scenario) {
      pmech::ScenarioSpec spec;
      spec.id = pmech::parse_scenario_id(scenario_id);
      spec.margin = margin;
      spec.x1_size = x1_size;
      spec.x2_size = x2_size;
      spec.y_size = y_size;
      spec.seed = common.seed;
      const auto inst = pmech::generate_scenario(spec, cfg);
      const double e = scenario_epsilon ? *scenario_epsilon : eps_fraction * inst.epsilon_max;
      json out = {{"scenario", to_json(inst)}};
      try {
        out["dominance"] = to_json(pmech::assert_dominance(inst, e, cfg));
      } catch (const pmech::AssertionFailure& f) {
        out["dominance"] = {{"holds", false}, {"error", f.what()}};
        pmech::io::write_text(common.output, dump(out));
        std::cerr << "assertion failure: " << f.what() << "\n";
        return kExitAssertion;
      }
      pmech::io::write_text(common.output, dump(out));
    } else if (*repset) {
      const auto j = load_joint(input, common);
      const auto set = pmech::enumerate_representations(j, epsilon, parse_policy(policy), cfg, cap);
      json members = json::array();
      for (const auto& rep : set.members) {
        const auto e = pmech::x2_entropies(j, rep, cfg);
        members.push_back({{"representation", to_json(rep)},
                           {"H_X2", e.h_x2},
                           {"H_X2_given_Y", e.h_x2_given_y}});
      }
      json pairs = json::array();
      for (const auto& p : pmech::factor_pairs(j.x_size()))
        pairs.push_back({{"n1", p.n1}, {"n2", p.n2}, {"padded", p.padded}});
      json out = {{"x_size", j.x_size()},
                  {"epsilon", epsilon},
                  {"policy_requested", pmech::to_string(set.requested)},
                  {"policy_used", pmech::to_string(set.used)},
                  {"factor_pairs", pairs},
                  {"count", set.members.size()},
                  {"representations", members}};
      pmech::io::write_text(common.output, dump(out));
    }
  } catch (const pmech::AssertionFailure& e) {
    std::cerr << "assertion failure: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const std::invalid_argument& e) {  // validation, parameter
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::length_error& e) {  // size
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const pmech::ProvenanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const pmech::io::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
