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

#include "kpoqcr/commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "kpoqcr/errors.hpp"
#include "kpoqcr/fock.hpp"
#include "kpoqcr/junction.hpp"
#include "kpoqcr/parallel.hpp"
#include "kpoqcr/rates.hpp"
#include "kpoqcr/spectrum.hpp"

namespace kpoqcr {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  json j;
  j["command"] = table.command;
  j["comments"] = table.comments;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  out << j.dump(1) << '\n';
}

std::vector<int> parse_transition_label(const std::string& label, int n_keep) {
  std::vector<int> idx;
  if (label.rfind("g1_", 0) != 0) throw ConfigError("transition '" + label + "': expected g1_a_b_c_d");
  std::stringstream ss(label.substr(3));
  std::string part;
  while (std::getline(ss, part, '_')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("transition '" + label + "': indices must be non-negative integers");
    }
    idx.push_back(std::stoi(part));
  }
  if (idx.size() != 4) throw ConfigError("transition '" + label + "': expected four indices");
  for (int i : idx) {
    if (i >= n_keep) throw ConfigError("transition '" + label + "': index exceeds n_keep");
  }
  return idx;
}

namespace {

std::vector<std::string> echo(const std::string& command, const RunConfig& config) {
  std::vector<std::string> lines{"kpoqcr " + command};
  const json j = json::parse(config_to_json_text(config, -1));
  for (const auto& [section, value] : j.items()) {
    if (value.is_object()) {
      for (const auto& [key, v] : value.items()) lines.push_back(section + "." + key + " = " + v.dump());
    } else {
      lines.push_back(section + " = " + value.dump());
    }
  }
  return lines;
}

std::string axis_column(const SweepSpec& s) {
  if (s.axis == "alpha") return "alpha";
  if (s.axis == "time") return "t_s";
  return "bias_v_hz";
}

SystemParams params_at(const RunConfig& config, double x) {
  SystemParams p = config.params;
  if (config.sweep.axis == "voltage") p.bias_v = x;
  if (config.sweep.axis == "alpha") p.set_alpha(x);
  p.validate();
  return p;
}

double axis_value(const RunConfig& config, const SystemParams& p) {
  return config.sweep.axis == "alpha" ? p.alpha() : p.bias_v;
}

std::vector<double> sweep_points(const RunConfig& config) {
  if (config.sweep.axis == "time") throw ConfigError("this command does not sweep time");
  return config.sweep.values();
}

/// Spectrum and eta shared by every point of a voltage sweep.
struct Model {
  Spectrum spectrum;
  EtaTable eta;
};

Model build_model(const SystemParams& p) {
  Model m;
  m.spectrum = solve_spectrum(p);
  m.eta = eta_table(m.spectrum, p.rho_c, p.dm_max);
  return m;
}

RateTable rates_for(const SystemParams& p, const Model& m, bool interference, int threads) {
  RateOptions opt;
  opt.interference = interference;
  opt.threads = threads;
  return rate_table(p, m.spectrum, m.eta, charge_distribution(p), opt);
}

/// Evaluates fn at every sweep point in parallel; rows stay in sweep order.
template <typename Fn>
std::vector<std::vector<double>> sweep_rows(const RunConfig& config, Fn fn) {
  const std::vector<double> xs = sweep_points(config);
  std::vector<std::vector<double>> rows(xs.size());
  const int outer = xs.size() > 1 ? config.threads : 1;
  const int inner = xs.size() > 1 ? 1 : config.threads;
  std::optional<Model> shared;
  if (config.sweep.axis != "alpha") shared = build_model(params_at(config, xs.empty() ? 0.0 : xs.front()));
  parallel_for(
      xs.size(),
      [&](std::size_t i) {
        const SystemParams p = params_at(config, xs[i]);
        if (shared) {
          rows[i] = fn(p, *shared, inner);
        } else {
          const Model m = build_model(p);
          rows[i] = fn(p, m, inner);
        }
      },
      outer);
  return rows;
}

DensityMatrix initial_state(const std::string& name, int n) {
  if (name == "phi0") return DensityMatrix::basis(n, 0);
  if (name == "phi1") return DensityMatrix::basis(n, 1);
  if (name == "phi_alpha") return DensityMatrix::cat_plus_alpha(n);
  if (name == "phi_minus_alpha") {
    DensityMatrix d = DensityMatrix::cat_plus_alpha(n);
    d.rho(0, 1) = d.rho(1, 0) = -0.5;
    return d;
  }
  if (name == "mixed") {
    DensityMatrix d;
    d.rho = Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);
    return d;
  }
  if (name.rfind("state:", 0) == 0) {
    try {
      return DensityMatrix::basis(n, std::stoi(name.substr(6)));
    } catch (const std::logic_error&) {
    }
  }
  throw ConfigError("dynamics.initial '" + name + "' is not phi0, phi1, phi_alpha, phi_minus_alpha, mixed or state:<i>");
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(std::max(0, n)));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return v;
}

EvolveOptions evolve_options(const DynamicsSpec& d) {
  EvolveOptions o;
  o.method = d.method == "stepwise" ? EvolveOptions::Method::stepwise : EvolveOptions::Method::powered;
  o.step = d.step;
  return o;
}

}  // namespace

Table cmd_rates(const RunConfig& config) {
  Table t;
  t.command = "rates";
  t.comments = echo("rates", config);
  t.comments.push_back("units: rates in 1/s; bias_v_hz is eV/h per junction in Hz");
  t.columns.push_back(axis_column(config.sweep));
  struct Col {
    std::vector<int> idx;
    bool complex;
  };
  std::vector<Col> cols;
  for (const auto& label : config.transitions) {
    Col c{parse_transition_label(label, config.params.n_keep), false};
    c.complex = !(c.idx[0] == c.idx[1] && c.idx[2] == c.idx[3]);
    cols.push_back(c);
    if (c.complex) {
      t.columns.push_back(label + "_re");
      t.columns.push_back(label + "_im");
    } else {
      t.columns.push_back(label);
    }
  }
  t.rows = sweep_rows(config, [&](const SystemParams& p, const Model& m, int threads) {
    const RateTable r = rates_for(p, m, config.interference, threads);
    std::vector<double> row{axis_value(config, p)};
    for (const Col& c : cols) {
      const auto g = r.gamma1(c.idx[0], c.idx[1], c.idx[2], c.idx[3]);
      row.push_back(g.real());
      if (c.complex) row.push_back(g.imag());
    }
    return row;
  });
  return t;
}

Table cmd_steady(const RunConfig& config) {
  Table t;
  t.command = "steady";
  t.comments = echo("steady", config);
  t.comments.push_back("units: populations dimensionless; residual = max|L rho| / max|L|");
  t.columns = {axis_column(config.sweep), "p0_plus_p1", "p0", "p1", "residual"};
  t.rows = sweep_rows(config, [&](const SystemParams& p, const Model& m, int threads) {
    std::optional<RateTable> r;
    if (config.qcr) r = rates_for(p, m, config.interference, threads);
    const Generator g = assemble_generator(r ? &*r : nullptr, m.spectrum, p, config.qcr);
    const SteadyState s = steady_state(g.total());
    const double p0 = s.rho.population(0);
    const double p1 = s.rho.population(1);
    return std::vector<double>{axis_value(config, p), p0 + p1, p0, p1, s.residual};
  });
  return t;
}

Table cmd_bitflip(const RunConfig& config) {
  if (config.sweep.axis == "voltage") throw ConfigError("bitflip sweeps alpha, not voltage");
  Table t;
  t.command = "bitflip";
  t.comments = echo("bitflip", config);
  t.comments.push_back("units: rates in 1/s; ratio = rate_on / rate_off");
  t.columns = {"alpha", "rate_on", "rate_off", "ratio"};
  t.rows = sweep_rows(config, [&](const SystemParams& p, const Model& m, int threads) {
    RateTable r = rates_for(p, m, true, threads);
    const double on = qcr_bitflip_rate(r);
    r.g1_ref(0, 1, 1, 0) = 0.0;
    r.g1_ref(1, 0, 0, 1) = 0.0;
    const double off = qcr_bitflip_rate(r);
    return std::vector<double>{p.alpha(), on, off, off != 0.0 ? on / off : 0.0};
  });
  return t;
}

Table cmd_pq(const RunConfig& config) {
  if (config.sweep.axis == "alpha") throw ConfigError("pq sweeps voltage only");
  Table t;
  t.command = "pq";
  t.comments = echo("pq", config);
  t.columns = {"bias_v_hz", "q", "p_q"};
  const std::vector<double> xs = sweep_points(config);
  std::vector<ChargeDistribution> ds(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { ds[i] = charge_distribution(params_at(config, xs[i])); },
               config.threads);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = params_at(config, xs[i]).bias_v;
    double total = 0.0;
    for (int q = -ds[i].q_max; q <= ds[i].q_max; ++q) {
      t.rows.push_back({v, static_cast<double>(q), ds[i].p(q)});
      total += ds[i].p(q);
    }
    t.comments.push_back("bias_v_hz " + format_double(v) + ": sum p_q = " + format_double(total) +
                         ", max |p_q - p_-q| = " + format_double([&] {
                           double w = 0.0;
                           for (int q = 1; q <= ds[i].q_max; ++q) w = std::max(w, std::abs(ds[i].p(q) - ds[i].p(-q)));
                           return w;
                         }()));
  }
  return t;
}

namespace {

struct DynamicsSetup {
  Model model;
  Generator before;
  Generator after;
  std::optional<RateTable> rates;
};

DynamicsSetup dynamics_setup(const RunConfig& config) {
  DynamicsSetup s;
  const SystemParams& p = config.params;
  s.model = build_model(p);
  s.before = assemble_generator(nullptr, s.model.spectrum, p, false);
  if (config.dynamics.qcr) {
    s.rates = rates_for(p, s.model, config.interference, config.threads);
    s.after = assemble_generator(&*s.rates, s.model.spectrum, p, true);
  } else {
    s.after = s.before;
  }
  return s;
}

}  // namespace

Table cmd_dynamics(const RunConfig& config) {
  Table t;
  t.command = "dynamics";
  t.comments = echo("dynamics", config);
  t.comments.push_back("units: t in s; populations in the retained eigenbasis");
  const int n = config.params.n_keep;
  t.columns = {"t_s", "qcr_active"};
  for (int i = 0; i < n; ++i) t.columns.push_back("p" + std::to_string(i));
  t.columns.push_back("p0_plus_p1");
  t.columns.push_back("p_alpha");

  std::vector<double> grid;
  if (config.sweep.axis == "time") {
    grid = config.sweep.values();
  } else if (config.sweep.axis == "none") {
    grid = linspace(config.dynamics.t_start, config.dynamics.t_end, config.dynamics.t_points);
  } else {
    throw ConfigError("dynamics sweeps time only");
  }
  if (grid.empty()) return t;

  const DynamicsSetup s = dynamics_setup(config);
  DensityMatrix rho0 = initial_state(config.dynamics.initial, n);
  rho0.time = grid.front();
  const Trajectory traj = evolve(rho0, s.before.total(), s.after.total(), config.dynamics.t_qcr_on, grid,
                                 evolve_options(config.dynamics));
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const DensityMatrix& d = traj.states[k];
    std::vector<double> row{d.time, static_cast<double>(traj.qcr_active[k])};
    for (int i = 0; i < n; ++i) row.push_back(d.population(i));
    row.push_back(d.population(0) + d.population(1));
    row.push_back(d.p_alpha());
    t.rows.push_back(std::move(row));
  }
  t.comments.push_back("max trace drift = " + format_double(traj.max_trace_drift));
  t.comments.push_back("min eigenvalue = " + format_double(traj.min_eigenvalue) +
                       ", positivity warnings = " + std::to_string(traj.positivity_warnings));
  return t;
}

Table cmd_husimi(const RunConfig& config) {
  Table t;
  t.command = "husimi";
  t.comments = echo("husimi", config);
  t.columns = {"re", "im", "q"};
  const HusimiSpec& h = config.husimi;
  HusimiMap map;
  if (h.state == "coherent") {
    const Eigen::VectorXcd c = coherent_state({h.coherent_re, h.coherent_im}, config.params.n_fock);
    map = husimi_q_fock(c * c.adjoint(), h.grid);
  } else if (h.state == "steady") {
    const SystemParams& p = config.params;
    const Model m = build_model(p);
    std::optional<RateTable> r;
    if (config.qcr) r = rates_for(p, m, config.interference, config.threads);
    const Generator g = assemble_generator(r ? &*r : nullptr, m.spectrum, p, config.qcr);
    const SteadyState s = steady_state(g.total());
    map = husimi_q(s.rho, m.spectrum, h.grid);
  } else {
    const DynamicsSetup s = dynamics_setup(config);
    DensityMatrix rho0 = initial_state(config.dynamics.initial, config.params.n_keep);
    const std::vector<double> grid{h.time};
    const Trajectory traj = evolve(rho0, s.before.total(), s.after.total(), config.dynamics.t_qcr_on, grid,
                                   evolve_options(config.dynamics));
    map = husimi_q(traj.states.back(), s.model.spectrum, h.grid);
  }
  for (std::size_t j = 0; j < map.im.size(); ++j)
    for (std::size_t i = 0; i < map.re.size(); ++i)
      t.rows.push_back({map.re[i], map.im[j], map.at(static_cast<int>(j), static_cast<int>(i))});
  t.comments.push_back("normalization sum Q dA / pi = " + format_double(map.normalization()));
  return t;
}

ValidationOutcome cmd_validate(const RunConfig& config) {
  ValidationOutcome out;
  out.reports = validation_suite(config.params, config.tolerance_scale);
  out.all_pass = true;
  for (const auto& r : out.reports) out.all_pass = out.all_pass && r.pass;
  return out;
}

void write_validation(const ValidationOutcome& outcome, const RunConfig& config, bool as_json, std::ostream& out) {
  if (as_json) {
    json j;
    j["all_pass"] = outcome.all_pass;
    j["reports"] = json::array();
    for (const auto& r : outcome.reports) {
      j["reports"].push_back({{"name", r.name},
                              {"analytic", r.analytic},
                              {"numeric", r.numeric},
                              {"rel_error", r.rel_error},
                              {"tolerance", r.tolerance},
                              {"pass", r.pass}});
    }
    out << j.dump(1) << '\n';
    return;
  }
  for (const auto& c : echo("validate", config)) out << "# " << c << '\n';
  out << "name,analytic,numeric,rel_error,tolerance,pass\n";
  for (const auto& r : outcome.reports) {
    out << '"' << r.name << "\"," << format_double(r.analytic) << ',' << format_double(r.numeric) << ','
        << format_double(r.rel_error) << ',' << format_double(r.tolerance) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace kpoqcr
