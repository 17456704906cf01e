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

#include "kpoqcr/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kpoqcr/errors.hpp"

namespace kpoqcr {

using nlohmann::json;

std::vector<double> SweepSpec::values() const {
  if (axis == "none") return {0.0};
  if (points < 1) return {};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = points == 1 ? from : from + (to - from) * i / (points - 1.0);
  return v;
}

std::vector<std::string> default_transitions() {
  return {"g1_1_1_2_2", "g1_0_0_3_3", "g1_2_2_1_1", "g1_3_3_0_0",
          "g1_2_2_0_0", "g1_3_3_1_1", "g1_1_1_0_0", "g1_0_0_1_1"};
}

namespace {

constexpr double kGHz = 1e9;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "on" || s == "true") return true;
    if (s == "off" || s == "false") return false;
  }
  bad(where, "expected a boolean or on/off");
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

// Hz-valued field that also accepts a <name>_ghz spelling.
bool take_hz(const std::string& key, const json& v, const std::string& name, double& target, const std::string& where) {
  if (key == name) {
    target = as_number(v, where);
    return true;
  }
  if (key == name + "_ghz") {
    target = as_number(v, where) * kGHz;
    return true;
  }
  return false;
}

void parse_system(const json& j, SystemParams& p) {
  if (!j.is_object()) bad("system", "expected an object");
  double alpha = -1.0;
  for (const auto& [key, v] : j.items()) {
    const std::string w = "system." + key;
    if (take_hz(key, v, "chi", p.chi, w) || take_hz(key, v, "beta", p.beta, w) ||
        take_hz(key, v, "delta_kpo", p.delta_kpo, w) || take_hz(key, v, "omega_c", p.omega_c, w) ||
        take_hz(key, v, "e_island", p.e_island, w) || take_hz(key, v, "kappa", p.kappa, w) ||
        take_hz(key, v, "gamma_p", p.gamma_p, w) || take_hz(key, v, "bias_v", p.bias_v, w) ||
        take_hz(key, v, "match_tol", p.match_tol, w)) {
      continue;
    }
    if (key == "alpha") alpha = as_number(v, w);
    else if (key == "gap_delta") p.gap_delta = as_number(v, w);
    else if (key == "gamma_dynes") p.gamma_dynes = as_number(v, w);
    else if (key == "rho_c") p.rho_c = as_number(v, w);
    else if (key == "r_tunnel") p.r_tunnel = as_number(v, w);
    else if (key == "temp_n") p.temp_n = as_number(v, w);
    else if (key == "temp_s") p.temp_s = as_number(v, w);
    else if (key == "temp") p.temp_n = p.temp_s = as_number(v, w);
    else if (key == "n_fock") p.n_fock = as_int(v, w);
    else if (key == "n_keep") p.n_keep = as_int(v, w);
    else if (key == "dm_max") p.dm_max = as_int(v, w);
    else if (key == "q_max") p.q_max = as_int(v, w);
    else if (key == "quad_rel_tol") p.quad_rel_tol = as_number(v, w);
    else bad(w, "unknown key");
  }
  if (alpha >= 0.0) {
    if (j.contains("beta") || j.contains("beta_ghz")) bad("system", "give either alpha or beta, not both");
    p.set_alpha(alpha);
  }
}

void parse_sweep(const json& j, SweepSpec& s) {
  if (!j.is_object()) bad("sweep", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string w = "sweep." + key;
    if (key == "axis") s.axis = as_string(v, w);
    else if (take_hz(key, v, "from", s.from, w) || take_hz(key, v, "to", s.to, w)) continue;
    else if (key == "points") s.points = as_int(v, w);
    else bad(w, "unknown key");
  }
  if (s.axis != "none" && s.axis != "voltage" && s.axis != "alpha" && s.axis != "time") {
    bad("sweep.axis", "must be none, voltage, alpha or time");
  }
  if (s.points < 0) bad("sweep.points", "must be >= 0");
}

void parse_dynamics(const json& j, DynamicsSpec& d) {
  if (!j.is_object()) bad("dynamics", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string w = "dynamics." + key;
    if (key == "initial") d.initial = as_string(v, w);
    else if (key == "t_start") d.t_start = as_number(v, w);
    else if (key == "t_end") d.t_end = as_number(v, w);
    else if (key == "t_start_us") d.t_start = 1e-6 * as_number(v, w);
    else if (key == "t_end_us") d.t_end = 1e-6 * as_number(v, w);
    else if (key == "t_points") d.t_points = as_int(v, w);
    else if (key == "t_qcr_on") d.t_qcr_on = as_number(v, w);
    else if (key == "t_qcr_on_us") d.t_qcr_on = 1e-6 * as_number(v, w);
    else if (key == "qcr") d.qcr = as_bool(v, w);
    else if (key == "step") d.step = as_number(v, w);
    else if (key == "method") d.method = as_string(v, w);
    else bad(w, "unknown key");
  }
  if (d.method != "powered" && d.method != "stepwise") bad("dynamics.method", "must be powered or stepwise");
  if (d.t_points < 0) bad("dynamics.t_points", "must be >= 0");
}

void parse_husimi(const json& j, HusimiSpec& h) {
  if (!j.is_object()) bad("husimi", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string w = "husimi." + key;
    if (key == "state") h.state = as_string(v, w);
    else if (key == "time") h.time = as_number(v, w);
    else if (key == "time_us") h.time = 1e-6 * as_number(v, w);
    else if (key == "coherent_re") h.coherent_re = as_number(v, w);
    else if (key == "coherent_im") h.coherent_im = as_number(v, w);
    else if (key == "re_min") h.grid.re_min = as_number(v, w);
    else if (key == "re_max") h.grid.re_max = as_number(v, w);
    else if (key == "im_min") h.grid.im_min = as_number(v, w);
    else if (key == "im_max") h.grid.im_max = as_number(v, w);
    else if (key == "n_re") h.grid.n_re = as_int(v, w);
    else if (key == "n_im") h.grid.n_im = as_int(v, w);
    else bad(w, "unknown key");
  }
  if (h.state != "steady" && h.state != "evolve" && h.state != "coherent") {
    bad("husimi.state", "must be steady, evolve or coherent");
  }
}

void parse_root(const json& j, RunConfig& c) {
  if (!j.is_object()) bad("root", "expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "system") parse_system(v, c.params);
    else if (key == "sweep") parse_sweep(v, c.sweep);
    else if (key == "dynamics") parse_dynamics(v, c.dynamics);
    else if (key == "husimi") parse_husimi(v, c.husimi);
    else if (key == "transitions") {
      if (!v.is_array()) bad("transitions", "expected an array of labels");
      c.transitions.clear();
      for (const auto& t : v) c.transitions.push_back(as_string(t, "transitions"));
    } else if (key == "interference") c.interference = as_bool(v, key);
    else if (key == "qcr") c.qcr = as_bool(v, key);
    else if (key == "threads") c.threads = as_int(v, key);
    else if (key == "json") c.json = as_bool(v, key);
    else if (key == "out") c.out = as_string(v, key);
    else if (key == "tolerance_scale") c.tolerance_scale = as_number(v, key);
    else bad(key, "unknown key");
  }
}

json to_json(const RunConfig& c) {
  const SystemParams& p = c.params;
  json j;
  j["system"] = {{"chi", p.chi},
                 {"beta", p.beta},
                 {"delta_kpo", p.delta_kpo},
                 {"omega_c", p.omega_c},
                 {"gap_delta", p.gap_delta},
                 {"gamma_dynes", p.gamma_dynes},
                 {"rho_c", p.rho_c},
                 {"r_tunnel", p.r_tunnel},
                 {"e_island", p.e_island},
                 {"temp_n", p.temp_n},
                 {"temp_s", p.temp_s},
                 {"kappa", p.kappa},
                 {"gamma_p", p.gamma_p},
                 {"bias_v", p.bias_v},
                 {"n_fock", p.n_fock},
                 {"n_keep", p.n_keep},
                 {"dm_max", p.dm_max},
                 {"q_max", p.q_max},
                 {"match_tol", p.match_tol},
                 {"quad_rel_tol", p.quad_rel_tol}};
  j["sweep"] = {{"axis", c.sweep.axis}, {"from", c.sweep.from}, {"to", c.sweep.to}, {"points", c.sweep.points}};
  const DynamicsSpec& d = c.dynamics;
  j["dynamics"] = {{"initial", d.initial}, {"t_start", d.t_start}, {"t_end", d.t_end},   {"t_points", d.t_points},
                   {"t_qcr_on", d.t_qcr_on}, {"qcr", d.qcr},         {"step", d.step},     {"method", d.method}};
  const HusimiSpec& h = c.husimi;
  j["husimi"] = {{"state", h.state},           {"time", h.time},         {"coherent_re", h.coherent_re},
                 {"coherent_im", h.coherent_im}, {"re_min", h.grid.re_min}, {"re_max", h.grid.re_max},
                 {"im_min", h.grid.im_min},     {"im_max", h.grid.im_max}, {"n_re", h.grid.n_re},
                 {"n_im", h.grid.n_im}};
  j["transitions"] = c.transitions;
  j["interference"] = c.interference;
  j["qcr"] = c.qcr;
  j["threads"] = c.threads;
  j["json"] = c.json;
  j["out"] = c.out;
  j["tolerance_scale"] = c.tolerance_scale;
  return j;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  c.transitions = default_transitions();
  parse_root(j, c);
  c.params.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json patch = json::object();
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    patch[path] = value;
  } else {
    patch[path.substr(0, dot)] = json::object({{path.substr(dot + 1), value}});
  }
  parse_root(patch, config);
  config.params.validate();
}

std::string config_to_json_text(const RunConfig& config, int indent) { return to_json(config).dump(indent); }

}  // namespace kpoqcr
