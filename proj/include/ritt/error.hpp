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

#include <stdexcept>
#include <string>
#include <string_view>

namespace ritt {

/// Failure categories raised by the library. The CLI maps each category onto
/// an exit code (see exit_code_for).
enum class Errc {
  bad_parameters,
  singular_resolvent,
  non_convergence,
  dimension_cap,
  ill_conditioned,
  out_of_range,
  pole_on_domain,
  not_admissible,
  spectrum_outside_contour,
  not_regularizable,
  no_decay,
  non_semisimple,
  empty_family,
  tail_bound_failure,
  io_failure,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::bad_parameters: return "BadParameters";
    case Errc::singular_resolvent: return "SingularResolvent";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::dimension_cap: return "DimensionCap";
    case Errc::ill_conditioned: return "IllConditioned";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::pole_on_domain: return "PoleOnDomain";
    case Errc::not_admissible: return "NotAdmissible";
    case Errc::spectrum_outside_contour: return "SpectrumOutsideContour";
    case Errc::not_regularizable: return "NotRegularizable";
    case Errc::no_decay: return "NoDecay";
    case Errc::non_semisimple: return "NonSemisimple";
    case Errc::empty_family: return "EmptyFamily";
    case Errc::tail_bound_failure: return "TailBoundFailure";
    case Errc::io_failure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// 1: invalid input, 2: numerical failure, 3: I/O failure.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::bad_parameters:
    case Errc::empty_family:
    case Errc::out_of_range:
      return 1;
    case Errc::io_failure:
      return 3;
    default:
      return 2;
  }
}

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace ritt
