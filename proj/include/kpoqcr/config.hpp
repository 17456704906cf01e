// Copyright 2026 The kpoqcr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "kpoqcr/dynamics.hpp"
#include "kpoqcr/params.hpp"

namespace kpoqcr {

struct SweepSpec {
  std::string axis = "none";  ///< none | voltage | alpha | time
  double from = 0.0;
  double to = 0.0;
  int points = 1;

  [[nodiscard]] std::vector<double> values() const;
};

struct DynamicsSpec {
  std::string initial = "phi0";  ///< phi0 | phi1 | phi_alpha | phi_minus_alpha | mixed | state:<i>
  double t_start = 0.0;          ///< [s]
  double t_end = 0.0;            ///< [s]
  int t_points = 0;
  double t_qcr_on = 0.0;         ///< [s]
  bool qcr = true;
  double step = 0.0;             ///< RK4 step [s]; 0 = automatic
  std::string method = "powered";
};

struct HusimiSpec {
  std::string state = "steady";  ///< steady | evolve | coherent
  double time = 0.0;             ///< [s], for state = evolve
  double coherent_re = 0.0;
  double coherent_im = 0.0;
  HusimiGrid grid;
};

/// Fully resolved run configuration. Frequencies are in Hz throughout.
struct RunConfig {
  SystemParams params;
  SweepSpec sweep;
  DynamicsSpec dynamics;
  HusimiSpec husimi;
  std::vector<std::string> transitions;
  bool interference = true;
  bool qcr = true;  ///< steady/husimi: include the QCR
  int threads = 0;
  bool json = false;
  std::string out;  ///< empty writes to stdout
  double tolerance_scale = 1.0;
};

/// Default Gamma1 columns for the rates command.
[[nodiscard]] std::vector<std::string> default_transitions();

/// Parses a JSON document; unknown keys and bad values throw ConfigError.
[[nodiscard]] RunConfig config_from_json_text(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Applies one "section.key=value" override (value parsed as JSON, or as a
/// string if that fails).
void apply_override(RunConfig& config, const std::string& assignment);

/// Canonical JSON dump (Hz keys only); round-trips through config_from_json_text.
[[nodiscard]] std::string config_to_json_text(const RunConfig& config, int indent = 2);

}  // namespace kpoqcr
