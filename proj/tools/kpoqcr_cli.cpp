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

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpoqcr/commands.hpp"
#include "kpoqcr/config.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

struct Flags {
  std::string config_path;
  std::string out;
  std::string sweep_axis;
  double from = 0.0;
  double to = 0.0;
  int points = -1;
  std::string interference;
  int threads = -1;
  bool json = false;
  std::vector<std::string> sets;
};

kpoqcr::RunConfig resolve(const Flags& f, CLI::App& app) {
  kpoqcr::RunConfig c = f.config_path.empty() ? kpoqcr::config_from_json_text("{}") : kpoqcr::load_config(f.config_path);
  for (const auto& s : f.sets) kpoqcr::apply_override(c, s);
  if (!f.sweep_axis.empty()) {
    c.sweep.axis = f.sweep_axis;
    if (c.sweep.axis != "none" && c.sweep.axis != "voltage" && c.sweep.axis != "alpha" && c.sweep.axis != "time") {
      throw kpoqcr::ConfigError("--sweep must be none, voltage, alpha or time");
    }
  }
  if (app.count("--from") > 0) c.sweep.from = f.from;
  if (app.count("--to") > 0) c.sweep.to = f.to;
  if (f.points >= 0) c.sweep.points = f.points;
  if (!f.interference.empty()) c.interference = f.interference == "on";
  if (f.threads >= 0) c.threads = f.threads;
  if (f.json) c.json = true;
  if (!f.out.empty()) c.out = f.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpoqcr: QCR transition rates and dynamics of a Kerr parametric oscillator"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON configuration file");
  app.add_option("--out", f.out, "output path (default stdout)");
  app.add_option("--sweep", f.sweep_axis, "sweep axis: none, voltage, alpha, time");
  app.add_option("--from", f.from, "sweep start (Hz for voltage, s for time)");
  app.add_option("--to", f.to, "sweep end");
  app.add_option("--points", f.points, "sweep points");
  app.add_option("--interference", f.interference, "interference term on|off")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--threads", f.threads, "worker threads (0 = all cores)");
  app.add_flag("--json", f.json, "JSON output instead of CSV");
  app.add_option("--set", f.sets, "override, e.g. system.bias_v_ghz=45 (repeatable)");

  const std::vector<std::string> names{"rates", "dynamics", "steady", "bitflip", "husimi", "pq", "validate"};
  // Common flags may appear before or after the subcommand.
  for (const auto& n : names) app.add_subcommand(n, "run the " + n + " command")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const kpoqcr::RunConfig config = resolve(f, app);
    kpoqcr::set_default_threads(config.threads);

    std::unique_ptr<std::ofstream> file;
    std::ostream* out = &std::cout;
    if (!config.out.empty()) {
      file = std::make_unique<std::ofstream>(config.out);
      if (!*file) throw kpoqcr::ConfigError("cannot write " + config.out);
      out = file.get();
    }

    if (command == "validate") {
      const auto outcome = kpoqcr::cmd_validate(config);
      kpoqcr::write_validation(outcome, config, config.json, *out);
      return outcome.all_pass ? 0 : kExitValidation;
    }

    kpoqcr::Table table;
    if (command == "rates") table = kpoqcr::cmd_rates(config);
    else if (command == "dynamics") table = kpoqcr::cmd_dynamics(config);
    else if (command == "steady") table = kpoqcr::cmd_steady(config);
    else if (command == "bitflip") table = kpoqcr::cmd_bitflip(config);
    else if (command == "husimi") table = kpoqcr::cmd_husimi(config);
    else table = kpoqcr::cmd_pq(config);

    if (config.json) kpoqcr::write_json(table, *out);
    else kpoqcr::write_csv(table, *out);
    out->flush();
    if (!*out) throw kpoqcr::ConfigError("write failed");
    return 0;
  } catch (const kpoqcr::ConfigError& e) {
    std::cerr << "kpoqcr: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const kpoqcr::ValidationError& e) {
    std::cerr << "kpoqcr: validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const kpoqcr::NumericalError& e) {
    std::cerr << "kpoqcr: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
