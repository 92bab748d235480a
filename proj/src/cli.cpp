// SPDX-License-Identifier: Apache-2.0
//
// irs-slp: robust symbol-level precoding and IRS passive beamforming
// Copyright (C) 2026 The irs-slp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irs/cli.hpp"

#include "irs/config.hpp"
#include "irs/harness.hpp"
#include "irs/multiuser.hpp"
#include "irs/robust.hpp"
#include "irs/single_user.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace irs {
namespace {

// Raised for runs that complete but produce no usable design.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  int n = 0, m = 0, k = 0, trials = 0, ser_symbols = 0, threads = 0;
  double gamma_db = 0.0, delta = 0.0;
  std::string bits, constellation, method, direct_links, config, out, preset, param, values, scatter;
  std::uint64_t seed = 0;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App* app, Flags& f) {
  f.opts["n"] = app->add_option("--n", f.n, "IRS elements");
  f.opts["m"] = app->add_option("--m", f.m, "BS antennas");
  f.opts["k"] = app->add_option("--k", f.k, "users");
  f.opts["gamma-db"] = app->add_option("--gamma-db", f.gamma_db, "SNR target [dB]");
  f.opts["delta"] = app->add_option("--delta", f.delta, "channel error radius");
  f.opts["bits"] = app->add_option("--bits", f.bits, "phase resolution: inf or bits");
  f.opts["constellation"] = app->add_option("--constellation", f.constellation, "bpsk | qpsk | 8psk | 16qam");
  f.opts["method"] = app->add_option("--method", f.method, "method, or comma-separated methods for sweeps");
  f.opts["direct-links"] = app->add_option("--direct-links", f.direct_links, "on | off");
  f.opts["trials"] = app->add_option("--trials", f.trials, "Monte Carlo trials per grid point");
  f.opts["seed"] = app->add_option("--seed", f.seed, "seed");
  f.opts["config"] = app->add_option("--config", f.config, "JSON config file");
  f.opts["out"] = app->add_option("--out", f.out, "output CSV (default stdout)");
  f.opts["preset"] = app->add_option("--preset", f.preset, "figure preset");
  f.opts["param"] = app->add_option("--param", f.param, "swept parameter");
  f.opts["values"] = app->add_option("--values", f.values, "comma-separated grid");
  f.opts["ser-symbols"] = app->add_option("--ser-symbols", f.ser_symbols, "symbol tuples per SER trial");
  f.opts["scatter"] = app->add_option("--scatter", f.scatter, "received-sample dump prefix");
  f.opts["threads"] = app->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size()) throw ConfigError("values", "--values: '" + p + "' is not a number");
    out.push_back(v);
  }
  return out;
}

// Flags on top of file and defaults.
void apply_flags(const Flags& f, RunConfig& c) {
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, "--" + key + ": " + e.what());
    }
  };
  if (f.given("n")) c.scenario.n = f.n;
  if (f.given("m")) c.scenario.m = f.m;
  if (f.given("k")) c.scenario.k = f.k;
  if (f.given("gamma-db")) c.scenario.gamma_db = {f.gamma_db};
  if (f.given("delta")) c.scenario.delta = {f.delta};
  if (f.given("bits")) wrap("bits", [&] { c.scenario.bits = parse_bits(f.bits); });
  if (f.given("constellation")) c.scenario.constellation = f.constellation;
  if (f.given("direct-links")) wrap("direct-links", [&] { c.scenario.direct_links = parse_switch(f.direct_links); });
  if (f.given("method")) c.methods = split(f.method, ',');
  if (f.given("trials")) c.trials = f.trials;
  if (f.given("seed")) c.scenario.seed = f.seed;
  if (f.given("out")) c.out = f.out;
  if (f.given("preset")) c.preset = f.preset;
  if (f.given("param")) c.param = f.param;
  if (f.given("values")) c.values = parse_values(f.values);
  if (f.given("ser-symbols")) c.ser_symbols = f.ser_symbols;
  if (f.given("scatter")) c.scatter = f.scatter;
  if (f.given("threads")) c.threads = f.threads;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// defaults -> file -> flags; the preset (flag first, then file) picks the defaults
RunConfig resolve(const Flags& f, const std::function<RunConfig(const std::optional<std::string>&)>& defaults) {
  std::string file_text;
  std::optional<std::string> preset_name;
  if (f.given("config")) {
    file_text = read_file(f.config);
    RunConfig probe;
    apply_config_json(file_text, probe);
    preset_name = probe.preset;
  }
  if (f.given("preset")) preset_name = f.preset;
  RunConfig c = defaults(preset_name);
  if (!file_text.empty()) apply_config_json(file_text, c);
  apply_flags(f, c);
  if (preset_name) c.preset = preset_name;
  try {
    c.scenario.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(':')), msg);
  }
  return c;
}

SdrOptions sdr_options(const RunConfig& c) {
  SdrOptions o;
  if (c.draws) o.draws = *c.draws;
  return o;
}

AoOptions ao_options(const RunConfig& c) {
  AoOptions o;
  if (c.ao_eps) o.eps = *c.ao_eps;
  if (c.ao_max_iter) o.max_iter = *c.ao_max_iter;
  return o;
}

MultiuserOptions multiuser_options(const RunConfig& c) {
  MultiuserOptions o;
  if (c.lambda) o.lambda = *c.lambda;
  if (c.beta) o.beta = *c.beta;
  if (c.eps_inner) o.eps_inner = *c.eps_inner;
  if (c.eps_outer) o.eps_outer = *c.eps_outer;
  if (c.max_outer) o.max_outer = *c.max_outer;
  if (c.max_inner) o.max_inner = *c.max_inner;
  if (!(o.beta > o.lambda)) throw ConfigError("beta", "beta must exceed lambda");
  return o;
}

// Writes to --out or the given stream.
template <typename Fn>
void emit(const RunConfig& c, std::ostream& fallback, Fn&& fn) {
  if (c.out) {
    std::ofstream file(*c.out);
    if (!file) throw std::runtime_error("cannot write '" + *c.out + "'");
    fn(file);
  } else {
    fn(fallback);
  }
}

struct Instance {
  ChannelSet channels;
  RobustInstance robust;
  std::vector<int> symbols;
};

Instance make_instance(const ScenarioConfig& s) {
  Instance in;
  std::mt19937_64 rng(s.seed);
  in.channels = generate_channels(s, rng);
  const Constellation con = Constellation::from_name(s.constellation);
  in.symbols = con.random_symbols(s.k, rng);
  in.robust = build_instance(in.channels, s, con, in.symbols, s.direct_links);
  return in;
}

void write_design(std::ostream& os, const RVector& theta, const RVector& x, const std::vector<double>& margins) {
  const CVector t = multipliers_from_lifted(theta);
  for (Eigen::Index i = 0; i < t.size(); ++i) os << "theta," << i << ',' << t(i).real() << ',' << t(i).imag() << ",,\n";
  const CVector xc = unlift_vector(x);
  for (Eigen::Index i = 0; i < xc.size(); ++i) os << "x," << i << ',' << xc(i).real() << ',' << xc(i).imag() << ",,\n";
  for (std::size_t i = 0; i < margins.size(); ++i) os << "margin," << i << ',' << margins[i] << ",,,\n";
}

[[noreturn]] void report_infeasible(const RVector& theta, const RobustInstance& inst) {
  const double cap = robust_margin_capacity(theta, inst);
  std::ostringstream msg;
  msg << "infeasible: worst-case robust margin per unit transmit amplitude is " << std::setprecision(6) << cap
      << " at the best phase start (must be > 0); reduce --delta or the SNR target";
  throw RunFailure(msg.str());
}

const char* kRecordHeader = "record,index,re,im,power_dbm,time_ms\n";

int run_single_user(const Flags& f, std::ostream& out) {
  const RunConfig c = resolve(f, [](const std::optional<std::string>&) {
    RunConfig d;
    d.scenario.k = 1;
    d.scenario.constellation = "bpsk";
    d.methods = {"ao"};
    return d;
  });
  if (c.methods.size() != 1 || (c.methods[0] != "ao" && c.methods[0] != "sdr"))
    throw ConfigError("method", "single-user --method must be 'sdr' or 'ao'");
  const Instance in = make_instance(c.scenario);
  try {
    require_single_user_bpsk(in.robust);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("k", std::string(e.what()) + " (use --k 1 --constellation bpsk --direct-links off)");
  }
  std::mt19937_64 rng(derive_seed(c.scenario.seed, 2));

  std::ostringstream body;
  body << std::setprecision(12);
  double time_ms = 0.0;
  double power = 0.0;
  RVector theta, x;
  if (c.methods[0] == "sdr") {
    const SdrSolution s = sdr_solve(in.robust, rng, sdr_options(c));
    if (!(s.status == cone::SolveStatus::kOptimal || s.status == cone::SolveStatus::kInaccurate))
      throw RunFailure("relaxation solve failed: " + cone::to_string(s.status));
    if (!s.feasible) report_infeasible(s.theta, in.robust);
    body << "bound,0,,," << power_dbm(s.amplitude_lower_bound * s.amplitude_lower_bound) << ",\n";
    body << "rank,0," << s.rank_relaxed << ',' << s.rank_reduced << ",,\n";
    body << "trace,0,,," << power_dbm(s.power) << ",\n";
    time_ms = s.wall_time_ms;
    power = s.power;
    theta = s.theta;
    x = s.x;
  } else {
    RVector theta0 = random_phases(c.scenario.n, rng);
    for (int attempt = 0; attempt < 10 && !std::isfinite(closed_form_amplitude(in.robust, theta0)); ++attempt)
      theta0 = random_phases(c.scenario.n, rng);
    if (!std::isfinite(closed_form_amplitude(in.robust, theta0))) report_infeasible(theta0, in.robust);
    const AoTrace t = ao_solve(in.robust, theta0, ao_options(c));
    for (std::size_t i = 0; i < t.power.size(); ++i) body << "trace," << i << ",,," << power_dbm(t.power[i]) << ",\n";
    time_ms = t.wall_time_ms;
    power = t.final_power();
    theta = t.theta;
    x = t.x;
  }
  write_design(body, theta, x, worst_case_margins(theta, x, in.robust));
  body << "summary,0,,," << power_dbm(power) << ',' << time_ms << '\n';

  emit(c, out, [&](std::ostream& os) {
    os << "# irs-slp single-user method=" << c.methods[0] << '\n';
    os << "# config " << describe_config(c) << '\n';
    os << kRecordHeader << body.str();
  });
  return 0;
}

int run_multiuser(const Flags& f, std::ostream& out) {
  const RunConfig c = resolve(f, [](const std::optional<std::string>&) {
    RunConfig d;
    d.scenario.k = 3;
    d.scenario.constellation = "qpsk";
    d.methods = {"pgd"};
    return d;
  });
  if (c.methods.size() != 1 || (c.methods[0] != "pgd" && c.methods[0] != "random"))
    throw ConfigError("method", "multiuser --method must be 'pgd' or 'random'");
  const Instance in = make_instance(c.scenario);
  MultiuserOptions opts = multiuser_options(c);
  opts.bits = c.scenario.bits;
  std::mt19937_64 rng(derive_seed(c.scenario.seed, 2));

  MultiuserSolution s;
  if (c.methods[0] == "random") s = random_phase_design(in.robust, rng, opts);
  else if (opts.bits > 0) s = ao_multiuser_discrete(in.robust, opts.bits, rng, opts);
  else s = ao_multiuser(in.robust, rng, opts);

  if (s.status == MultiuserStatus::kNoFeasibleStart) report_infeasible(s.theta_start, in.robust);
  if (!s.ok()) throw RunFailure("multiuser design failed: " + to_string(s.status));

  emit(c, out, [&](std::ostream& os) {
    os << std::setprecision(12);
    os << "# irs-slp multiuser method=" << c.methods[0] << '\n';
    os << "# config " << describe_config(c) << '\n';
    os << "# status=" << to_string(s.status) << " outer_iterations=" << s.outer_iterations
       << " redraws=" << s.redraws << " modulus_deviation=" << s.modulus_deviation
       << " fallback=" << (s.used_fallback ? 1 : 0) << '\n';
    os << kRecordHeader;
    for (std::size_t i = 0; i < s.power_trace.size(); ++i)
      os << "trace," << i << ",,," << power_dbm(s.power_trace[i]) << ",\n";
    write_design(os, s.theta, s.x, s.margins);
    os << "summary,0,,," << power_dbm(s.power) << ',' << s.wall_time_ms << '\n';
  });
  return 0;
}

SweepSpec sweep_spec(const RunConfig& c, const SweepSpec& base) {
  SweepSpec spec = base;
  spec.base = c.scenario;
  spec.seed = c.scenario.seed;
  if (!c.methods.empty()) spec.methods = c.methods;
  if (c.trials) spec.trials = *c.trials;
  if (c.param) spec.param = *c.param;
  if (!c.values.empty()) spec.values = c.values;
  if (c.ser_symbols) spec.ser_symbols = *c.ser_symbols;
  if (c.scatter) spec.scatter_path = *c.scatter;
  if (c.threads) spec.threads = *c.threads;
  spec.sdr = sdr_options(c);
  spec.ao = ao_options(c);
  spec.multiuser = multiuser_options(c);
  return spec;
}

int run_sweep_command(const Flags& f, std::ostream& out, std::optional<SweepKind> forced,
                      const std::string& default_preset) {
  SweepSpec base;
  const RunConfig c = resolve(f, [&](const std::optional<std::string>& name) {
    RunConfig d;
    const std::string use = name.value_or(default_preset);
    if (!use.empty()) {
      try {
        base = preset(use);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("preset", e.what());
      }
    } else {
      base.base.k = 3;
      base.base.constellation = "qpsk";
      base.param = "n";
      base.values = {16, 32, 64};
      base.methods = {"pgd"};
    }
    d.scenario = base.base;
    return d;
  });
  SweepSpec spec = sweep_spec(c, base);
  if (forced) spec.kind = *forced;
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("method", e.what());
  }
  ResultTable table = run_sweep(spec);
  table.comments.insert(table.comments.begin(), "config " + describe_config(c));
  emit(c, out, [&](std::ostream& os) { write_csv(os, table); });
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust symbol-level precoding with IRS phase design", "irs-slp"};
  app.require_subcommand(1);
  Flags su, mu, sw, se, ti;
  CLI::App* cmd_su = app.add_subcommand("single-user", "single-user BPSK design (sdr | ao)");
  CLI::App* cmd_mu = app.add_subcommand("multiuser", "multiuser alternating design (pgd | random)");
  CLI::App* cmd_sw = app.add_subcommand("sweep", "Monte Carlo sweep (preset or custom)");
  CLI::App* cmd_se = app.add_subcommand("ser", "symbol error rate sweep");
  CLI::App* cmd_ti = app.add_subcommand("timing", "single-user wall-time comparison");
  add_flags(cmd_su, su);
  add_flags(cmd_mu, mu);
  add_flags(cmd_sw, sw);
  add_flags(cmd_se, se);
  add_flags(cmd_ti, ti);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_su->parsed()) return run_single_user(su, out);
    if (cmd_mu->parsed()) return run_multiuser(mu, out);
    if (cmd_sw->parsed()) return run_sweep_command(sw, out, std::nullopt, "");
    if (cmd_se->parsed()) return run_sweep_command(se, out, SweepKind::kSer, "fig9");
    if (cmd_ti->parsed()) return run_sweep_command(ti, out, SweepKind::kTiming, "fig3b");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << " [key: " << e.key() << "]\n";
    return 2;
  } catch (const RunFailure& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace irs
