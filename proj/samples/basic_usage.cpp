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

// Bounds, an extended mechanism and its audit for the binary symmetric joint.

#include <iomanip>
#include <iostream>

#include "pmech/pmech.hpp"

int main() {
  using namespace pmech;
  const auto j = JointPmf::from_rows({{0.45, 0.05}, {0.05, 0.45}});
  const double eps = 0.1;

  const auto b = compute_bounds(j, eps);
  std::cout << std::setprecision(6) << "I(X;Y) = " << b.mutual_information << "\n"
            << "U1 = " << b.u1 << ", L1 = " << *b.l1 << ", L2 = " << *b.l2
            << ", L3 = " << *b.l3 << " (g0 = " << *b.g0 << ")\n";

  const auto e = extend_efrl(j, eps);
  const auto a = audit(e.composite, j, b);
  std::cout << "EFRL: |U| = " << a.u_size << ", I(U;X) = " << a.i_ux << ", I(Y;U) = " << a.i_yu
            << ", residual = " << a.key_identity_residual << ", pass = " << a.pass() << "\n";

  OracleOptions oo;
  oo.budget = 2000;
  const auto o = estimate_h_eps(j, eps, oo);
  std::cout << "oracle estimate = " << o.value << " in [" << b.max_lower_bound() << ", " << b.u1
            << "]\n";
}
