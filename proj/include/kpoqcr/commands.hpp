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

#include <ostream>
#include <string>
#include <vector>

#include "kpoqcr/config.hpp"
#include "kpoqcr/oracles.hpp"

namespace kpoqcr {

/// Tabular command output: comment lines, a header and numeric rows.
struct Table {
  std::string command;
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g rendering used for every emitted number.
[[nodiscard]] std::string format_double(double v);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

[[nodiscard]] Table cmd_rates(const RunConfig& config);
[[nodiscard]] Table cmd_dynamics(const RunConfig& config);
[[nodiscard]] Table cmd_steady(const RunConfig& config);
[[nodiscard]] Table cmd_bitflip(const RunConfig& config);
[[nodiscard]] Table cmd_husimi(const RunConfig& config);
[[nodiscard]] Table cmd_pq(const RunConfig& config);

struct ValidationOutcome {
  std::vector<OracleReport> reports;
  bool all_pass = false;
};

[[nodiscard]] ValidationOutcome cmd_validate(const RunConfig& config);
void write_validation(const ValidationOutcome& outcome, const RunConfig& config, bool as_json, std::ostream& out);

/// Parses "g1_a_b_c_d" into its four state indices; throws ConfigError.
[[nodiscard]] std::vector<int> parse_transition_label(const std::string& label, int n_keep);

}  // namespace kpoqcr
