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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pmech/io.hpp"
#include "pmech/pmech.hpp"

namespace pmech {
namespace {

namespace fs = std::filesystem;

const std::string kCli = PMECH_CLI_PATH;
const std::string kData = PMECH_DATA_DIR;

fs::path scratch() {
  auto dir = fs::temp_directory_path() / ("pmech_io_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& out = {}) {
  std::string cmd = kCli + " " + args;
  cmd += out.empty() ? " > /dev/null 2>&1" : " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(IoTest, JointRoundTrip) {
  const auto j = JointPmf::from_rows({{0.1, 0.2, 0.05}, {0.3, 0.15, 0.2}});
  EXPECT_EQ(io::joint_from_json(io::to_json(j)), j);
  const auto flat = io::json::parse(R"({"x_size": 2, "y_size": 2, "pmf": [0.4, 0.1, 0.1, 0.4]})");
  EXPECT_DOUBLE_EQ(io::joint_from_json(flat)(1, 1), 0.4);
  EXPECT_THROW(io::joint_from_json(io::json::parse(R"({"pmf": [[0.5, 0.6]]})")), ValidationError);
  EXPECT_THROW(io::joint_from_json(io::json::parse(R"({"x_size": 3, "pmf": [[0.5, 0.5]]})")),
               ValidationError);
}

TEST(IoTest, RepresentationRoundTrip) {
  const auto rep = column_major({3, 2, false}, 6);
  EXPECT_EQ(io::representation_from_json(io::to_json(rep)), rep);
}

TEST(IoTest, ExactMechanismRoundTrip) {
  const auto j = JointPmf::from_rows({{0.1, 0.2, 0.05}, {0.3, 0.15, 0.2}});
  const auto m = extend_efrl(j, 0.05).composite;
  const auto back = io::mechanism_from_json(io::to_json(m, j), j);
  EXPECT_EQ(back.u_size, m.u_size);
  EXPECT_EQ(back.provenance.construction, Construction::efrl);
  ASSERT_TRUE(back.provenance.response.has_value());
  EXPECT_DOUBLE_EQ(back.provenance.response->alpha, m.provenance.response->alpha);
  for (std::size_t i = 0; i < m.kernel.size(); ++i) EXPECT_DOUBLE_EQ(back.kernel[i], m.kernel[i]);
  EXPECT_TRUE(audit(back, j).pass());
}

TEST(IoTest, CodebookMechanismRoundTrip) {
  const auto j = JointPmf::from_rows({{0.2, 0.05}, {0.05, 0.2}, {0.1, 0.15}, {0.15, 0.1}});
  const auto rep = row_major({2, 2, false}, 4);
  const auto m = extend_separated(j, 0.01, rep, {.sample_budget = 10000, .seed = 2, .shards = 1}).composite;
  const auto back = io::mechanism_from_json(io::to_json(m, j), j);
  EXPECT_EQ(back.flavor, Flavor::empirical);
  ASSERT_TRUE(back.provenance.representation.has_value());
  EXPECT_EQ(*back.provenance.representation, rep);
  EXPECT_EQ(back.induced.data().size(), m.induced.data().size());
  for (std::size_t i = 0; i < m.induced.data().size(); ++i)
    EXPECT_NEAR(back.induced.data()[i], m.induced.data()[i], 1e-15);
}

TEST(IoTest, ReportsSerialize) {
  const auto j = JointPmf::from_rows({{0.1, 0.2, 0.05}, {0.3, 0.15, 0.2}});
  const auto b = compute_bounds(j, 0.05);
  const auto js = io::to_json(b);
  EXPECT_DOUBLE_EQ(js.at("U1").get<double>(), b.u1);
  EXPECT_TRUE(js.contains("paper_literal_U1"));
  const auto b2 = io::to_json(compute_bounds(JointPmf::from_rows({{0.45, 0.05}, {0.05, 0.45}}), 0.1));
  EXPECT_EQ(b2.at("L4").get<std::string>(), "not applicable");
  const auto a = io::to_json(audit(synthesize_frl(j), j));
  EXPECT_TRUE(a.contains("key_identity_residual"));
}

TEST(IoTest, SweepCsvHeaderAndBlankCells) {
  const auto j = JointPmf::from_rows({{0.45, 0.05}, {0.05, 0.45}});
  std::ostringstream os;
  io::write_sweep_csv(os, {compute_bounds(j, 0.1)});
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "epsilon,U1,L1,L2,L3,L4,L5,g0");
  // |X| = 2: L4 and L5 are blank.
  EXPECT_NE(text.find(",,"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  const auto dir = scratch();
  EXPECT_EQ(run("bounds -i " + kData + "/bsc.json -e 0.1"), 0);
  EXPECT_EQ(run("g0 -i " + kData + "/four_by_three.json"), 0);
  // Outside [0, I(X;Y)).
  EXPECT_EQ(run("bounds -i " + kData + "/bsc.json -e 0.9"), 2);
  EXPECT_EQ(run("bounds -i " + (dir / "missing.json").string() + " -e 0.1"), 2);
  EXPECT_EQ(run("scenario --id 2 --x1-size 8"), 2);
  EXPECT_EQ(run("frobnicate"), 2);

  // A mechanism that leaks more than it claims fails its audit.
  const auto j = JointPmf::from_rows({{0.45, 0.05}, {0.05, 0.45}});
  std::vector<double> p, k;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t u = 0; u < 2; ++u) {
        p.push_back(u == y ? j(x, y) : 0.0);
        k.push_back(u == y ? 1.0 : 0.0);
      }
  Mechanism leaky{2, 2, 2, k, TripletPmf({2, 2, 2}, p)};
  leaky.provenance.epsilon = 0.1;
  const auto mech_path = dir / "leaky.json";
  io::write_text(mech_path.string(), io::dump(io::to_json(leaky, j)));
  EXPECT_EQ(run("audit --mechanism " + mech_path.string()), 3);
  fs::remove_all(dir);
}

TEST(CliTest, SynthThenAudit) {
  const auto dir = scratch();
  const auto mech = (dir / "m.json").string();
  ASSERT_EQ(run("synth -i " + kData + "/four_by_three.json -m separated -e 0.05 --budget 20000 -o " + mech), 0);
  EXPECT_EQ(run("audit --mechanism " + mech), 0);
  ASSERT_EQ(run("synth -i " + kData + "/four_by_three.json -m efrl -e 0.05 -o " + mech), 0);
  EXPECT_EQ(run("audit --mechanism " + mech + " -i " + kData + "/four_by_three.json"), 0);
  // Audited against a different joint: provenance error.
  EXPECT_EQ(run("audit --mechanism " + mech + " -i " + kData + "/bsc.json"), 2);
  fs::remove_all(dir);
}

TEST(CliTest, SweepWritesCsv) {
  const auto dir = scratch();
  const auto csv = dir / "s.csv";
  ASSERT_EQ(run("sweep -i " + kData + "/four_by_three.json --epsilon-grid 0:0.2:0.05 --csv " + csv.string()), 0);
  const auto text = slurp(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "epsilon,U1,L1,L2,L3,L4,L5,g0");
  EXPECT_GE(std::count(text.begin(), text.end(), '\n'), 2);
  fs::remove_all(dir);
}

TEST(CliTest, ScenarioJson) {
  const auto dir = scratch();
  const auto out = dir / "sc.json";
  ASSERT_EQ(run("scenario --id 4 --seed 3", out), 0);
  const auto js = io::json::parse(slurp(out));
  EXPECT_TRUE(js.dump().find("L5 - L4") != std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace pmech
