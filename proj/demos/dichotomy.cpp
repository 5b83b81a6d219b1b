/*
   Copyright 2026 The rittlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Power and discrete-derivative bounds for a rotation, a diagonal operator
// with spectrum in a Stolz domain, and a Jordan block.

#include <cstdio>

#include "ritt/ritt.hpp"

int main() {
  using namespace ritt;
  const std::vector<std::pair<const char*, ZooSpec>> cases{
      {"rotation(pi/2)", ZooSpec::rotation(1.5707963267948966)},
      {"diag_in_stolz(2,16,7)", ZooSpec::diag_in_stolz(2.0, 16, 7)},
      {"jordan(0.9,6,0.05)", ZooSpec::jordan(0.9, 6, 0.05)},
  };
  std::printf("%-24s %10s %10s %10s %8s  %s\n", "operator", "stolz", "max|T^n|", "dd(400)", "trend", "class");
  for (const auto& [name, spec] : cases) {
    const Operator t = generate(spec);
    const PowerBound pb = power_bound(t, 400);
    const DdBound dd = dd_bound(t, 400);
    const StolzType st = stolz_type_of_spectrum(t);
    std::printf("%-24s %10.4g %10.4g %10.4g %8.3f  %s\n", name, st.infinite ? INFINITY : st.value, pb.value, dd.value,
                dd.trend, classification_name(classify(pb, dd)).c_str());
  }
  return 0;
}
