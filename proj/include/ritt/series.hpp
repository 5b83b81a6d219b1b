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

#pragma once

#include <cmath>
#include <limits>

namespace ritt {

/// Bound on sum_{k>K} scale k^e x^{k-1}; infinity while the term ratio is >= 1.
inline double power_geometric_tail(long long K, double e, double x, double scale) {
  if (x <= 0.0) return 0.0;
  const double k1 = static_cast<double>(K + 1);
  const double rho = std::pow((k1 + 1.0) / k1, e) * x;
  if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
  return scale * std::pow(k1, e) * std::pow(x, static_cast<double>(K)) / (1.0 - rho);
}

/// Tail after a term t_{K+1} when all later term ratios are at most rho.
template <class T>
T ratio_tail(const T& next_term, const T& rho) {
  if (!(rho < T(1))) return T(std::numeric_limits<double>::infinity());
  return next_term / (T(1) - rho);
}

}  // namespace ritt
