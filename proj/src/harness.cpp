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

#include "irs/harness.hpp"

#include "irs/robust.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace irs {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kStartRedraws = 10;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(format_number(v));
  return join(parts, ",");
}

std::string kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPower: return "power";
    case SweepKind::kSer: return "ser";
    case SweepKind::kTiming: return "timing";
  }
  return "power";
}

struct Outcome {
  bool ok = false;
  double power_dbm = 0.0;
  double ser = kNaN;
  double time_ms = 0.0;
};

struct Design {
  bool ok = false;
  double power = 0.0;  // W
  RVector theta;
  double time_ms = 0.0;
};

struct MethodContext {
  MethodSpec spec;
  ScenarioConfig config;
  bool use_direct = false;
};

// Per-trial memo so methods that share the expensive part reuse it.
struct TrialCache {
  std::map<std::string, SdrSolution> sdr;
  std::map<std::string, MultiuserSolution> continuous;
};

std::string cache_key(const MethodContext& m) {
  return m.config.constellation + "|" + (m.use_direct ? "d" : "-") + "|" + join_numbers(m.config.delta) + "|" +
         join_numbers(m.config.gamma_db);
}

Design run_design(const MethodContext& m, const RobustInstance& inst, std::uint64_t seed, TrialCache& cache,
                  const SweepSpec& spec) {
  Design d;
  std::mt19937_64 rng(derive_seed(seed, 2));
  switch (m.spec.kind) {
    case MethodKind::kSdr:
    case MethodKind::kSdrBound: {
      const std::string key = cache_key(m);
      auto it = cache.sdr.find(key);
      if (it == cache.sdr.end()) it = cache.sdr.emplace(key, sdr_solve(inst, rng, spec.sdr)).first;
      const SdrSolution& s = it->second;
      d.time_ms = s.wall_time_ms;
      d.theta = s.theta;
      if (m.spec.kind == MethodKind::kSdr) {
        d.ok = s.feasible;
        d.power = s.power;
      } else {
        d.ok = std::isfinite(s.amplitude_lower_bound) && s.amplitude_lower_bound > 0.0;
        d.power = s.amplitude_lower_bound * s.amplitude_lower_bound;
      }
      return d;
    }
    case MethodKind::kAo: {
      RVector theta0;
      for (int attempt = 0; attempt <= kStartRedraws; ++attempt) {
        theta0 = random_phases(inst.n, rng);
        if (std::isfinite(closed_form_amplitude(inst, theta0))) break;
      }
      const AoTrace t = ao_solve(inst, theta0, spec.ao);
      d.ok = t.feasible;
      d.power = t.final_power();
      d.theta = t.theta;
      d.time_ms = t.wall_time_ms;
      return d;
    }
    case MethodKind::kPgd: {
      const std::string key = cache_key(m);
      MultiuserOptions opts = spec.multiuser;
      auto it = cache.continuous.find(key);
      double cont_time = 0.0;
      if (it == cache.continuous.end()) {
        opts.bits = 0;
        std::mt19937_64 crng(derive_seed(seed, 5));
        it = cache.continuous.emplace(key, ao_multiuser(inst, crng, opts)).first;
      }
      const MultiuserSolution& cont = it->second;
      cont_time = cont.wall_time_ms;
      const int bits = m.config.bits;
      if (bits <= 0) {
        d.ok = cont.ok();
        d.power = cont.power;
        d.theta = cont.theta;
        d.time_ms = cont_time;
        return d;
      }
      const MultiuserSolution s =
          ao_multiuser_discrete(inst, bits, cont.ok() ? cont.theta : RVector(), rng, spec.multiuser);
      d.ok = s.ok();
      d.power = s.power;
      d.theta = s.theta;
      d.time_ms = cont_time + s.wall_time_ms;
      return d;
    }
    case MethodKind::kRandom: {
      MultiuserOptions opts = spec.multiuser;
      opts.bits = m.config.bits;
      const MultiuserSolution s = random_phase_design(inst, rng, opts);
      d.ok = s.ok();
      d.power = s.power;
      d.theta = s.theta;
      d.time_ms = s.wall_time_ms;
      return d;
    }
  }
  return d;
}

void write_scatter(const std::string& prefix, double value, const std::string& method,
                   const std::vector<ScatterPoint>& pts) {
  std::string tag = method;
  std::replace_if(tag.begin(), tag.end(), [](char c) { return c == ':' || c == '=' || c == '/'; }, '_');
  const std::string path = prefix + "_" + format_number(value) + "_" + tag + ".csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scatter file " + path);
  out << "re_y,im_y,user,symbol\n" << std::setprecision(10);
  for (const auto& p : pts) out << p.re << ',' << p.im << ',' << p.user << ',' << p.symbol << '\n';
}

std::vector<Outcome> run_trial(const SweepSpec& spec, const std::vector<MethodSpec>& methods, double value,
                               int trial, bool ser, std::mutex& io) {
  ScenarioConfig cfg = spec.base;
  apply_param(cfg, spec.param, value);
  // Common random numbers: every grid point reuses the trial's draws.
  const std::uint64_t seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));

  ScenarioConfig gen = cfg;
  for (const auto& m : methods)
    if (m.direct.value_or(false)) gen.direct_links = true;
  std::mt19937_64 rng(seed);
  const ChannelSet channels = generate_channels(gen, rng);

  TrialCache cache;
  std::vector<Outcome> out;
  for (const auto& ms : methods) {
    MethodContext m{ms, ms.apply(cfg), false};
    m.use_direct = m.config.direct_links;
    const Constellation con = Constellation::from_name(m.config.constellation);
    std::mt19937_64 srng(derive_seed(seed, 1));
    const std::vector<int> symbols = con.random_symbols(m.config.k, srng);
    const RobustInstance inst = build_instance(channels, m.config, con, symbols, m.use_direct);

    const Design d = run_design(m, inst, seed, cache, spec);
    Outcome o;
    o.ok = d.ok && std::isfinite(d.power) && d.power > 0.0;
    o.time_ms = d.time_ms;
    if (o.ok) o.power_dbm = power_dbm(d.power);
    if (ser && o.ok) {
      ChannelSet actual = channels;
      std::mt19937_64 erng(derive_seed(seed, 3));
      redraw_errors(m.config, actual, erng);
      std::mt19937_64 nrng(derive_seed(seed, 4));
      std::vector<ScatterPoint> pts;
      const bool dump = !spec.scatter_path.empty() && trial == 0;
      o.ser = symbol_error_rate(actual, m.config, d.theta, m.use_direct, spec.ser_symbols, nrng, 1.0,
                                dump ? &pts : nullptr);
      if (dump) {
        std::lock_guard<std::mutex> lock(io);
        write_scatter(spec.scatter_path, value, ms.label, pts);
      }
    }
    out.push_back(o);
  }
  return out;
}

ResultTable run_grid(const SweepSpec& spec, bool ser) {
  validate(spec);
  std::vector<MethodSpec> methods;
  for (const auto& text : spec.methods) methods.push_back(parse_method(text));

  const std::size_t points = spec.values.size();
  const auto trials = static_cast<std::size_t>(spec.trials);
  const std::size_t items = points * trials;
  std::vector<std::vector<Outcome>> results(items);

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(items)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::mutex io;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items) return;
      {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (failure) return;
      }
      const std::size_t p = i / trials;
      const int t = static_cast<int>(i % trials);
      try {
        results[i] = run_trial(spec, methods, spec.values[p], t, ser, io);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  table.comments.push_back("experiment=" + spec.id + " kind=" + kind_name(spec.kind));
  table.comments.push_back("param=" + spec.param + " values=" + join_numbers(spec.values));
  table.comments.push_back("trials=" + std::to_string(spec.trials) + " seed=" + std::to_string(spec.seed) +
                           (ser ? " ser_symbols=" + std::to_string(spec.ser_symbols) : std::string()));
  table.comments.push_back("methods=" + join(spec.methods, " "));

  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      ResultRow row;
      row.param = spec.param;
      row.value = spec.values[p];
      row.method = methods[mi].label;
      double sum = 0.0, sum_ser = 0.0, sum_time = 0.0;
      std::vector<double> dbm;
      for (std::size_t t = 0; t < trials; ++t) {
        const Outcome& o = results[p * trials + t][mi];
        if (!o.ok) {
          ++row.failures;
          continue;
        }
        dbm.push_back(o.power_dbm);
        sum += o.power_dbm;
        sum_ser += o.ser;
        sum_time += o.time_ms;
      }
      row.trials = static_cast<int>(dbm.size());
      if (row.trials > 0) {
        const double n = static_cast<double>(row.trials);
        row.mean_power_dbm = sum / n;
        double var = 0.0;
        for (double v : dbm) var += (v - row.mean_power_dbm) * (v - row.mean_power_dbm);
        row.std_power_dbm = row.trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        row.mean_ser = ser ? sum_ser / n : kNaN;
        row.mean_time_ms = sum_time / n;
      } else {
        row.mean_power_dbm = kNaN;
        row.std_power_dbm = kNaN;
        row.mean_ser = kNaN;
        row.mean_time_ms = kNaN;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

bool known_param(const std::string& p) {
  static const char* names[] = {"n", "m", "k", "gamma_db", "delta", "bits", "d_iu", "d_bi", "rician_db"};
  return std::find(std::begin(names), std::end(names), p) != std::end(names);
}

}  // namespace

ScenarioConfig MethodSpec::apply(const ScenarioConfig& base) const {
  ScenarioConfig c = base;
  if (bits) c.bits = *bits;
  if (direct) c.direct_links = *direct;
  if (constellation) c.constellation = *constellation;
  if (delta) c.delta = {*delta};
  return c;
}

MethodSpec parse_method(const std::string& text) {
  MethodSpec m;
  m.label = text;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(lower(part));
  if (parts.empty() || parts.front().empty()) throw std::invalid_argument("empty method");
  const std::string& kind = parts.front();
  if (kind == "sdr") m.kind = MethodKind::kSdr;
  else if (kind == "bound") m.kind = MethodKind::kSdrBound;
  else if (kind == "ao") m.kind = MethodKind::kAo;
  else if (kind == "pgd") m.kind = MethodKind::kPgd;
  else if (kind == "random") m.kind = MethodKind::kRandom;
  else throw std::invalid_argument("unknown method '" + text + "'");

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& mod = parts[i];
    if (mod == "inf") {
      m.bits = 0;
    } else if (mod.size() > 1 && mod[0] == 'b' && std::all_of(mod.begin() + 1, mod.end(), ::isdigit)) {
      m.bits = std::stoi(mod.substr(1));
      if (*m.bits < 1) throw std::invalid_argument("bits must be >= 1 in method '" + text + "'");
    } else if (mod == "direct") {
      m.direct = true;
    } else if (mod == "nodirect") {
      m.direct = false;
    } else if (mod == "bpsk" || mod == "qpsk" || mod == "8psk" || mod == "16qam") {
      m.constellation = mod;
    } else if (mod.rfind("delta=", 0) == 0) {
      try {
        std::size_t used = 0;
        const double v = std::stod(mod.substr(6), &used);
        if (used != mod.size() - 6 || v < 0.0) throw std::invalid_argument("");
        m.delta = v;
      } catch (const std::exception&) {
        throw std::invalid_argument("bad delta in method '" + text + "'");
      }
    } else {
      throw std::invalid_argument("unknown modifier '" + mod + "' in method '" + text + "'");
    }
  }
  return m;
}

void apply_param(ScenarioConfig& c, const std::string& param, double v) {
  auto as_int = [&](const char* name) {
    if (v != std::floor(v)) throw std::invalid_argument(std::string(name) + " must be an integer");
    return static_cast<int>(v);
  };
  if (param == "n") c.n = as_int("n");
  else if (param == "m") c.m = as_int("m");
  else if (param == "k") c.k = as_int("k");
  else if (param == "gamma_db") c.gamma_db = {v};
  else if (param == "delta") c.delta = {v};
  else if (param == "bits") c.bits = as_int("bits");
  else if (param == "d_iu") c.d_iu = v;
  else if (param == "d_bi") c.d_bi = v;
  else if (param == "rician_db") c.rician_db = v;
  else throw std::invalid_argument("unknown sweep parameter '" + param + "'");
}

void validate(const SweepSpec& spec) {
  if (!known_param(spec.param)) throw std::invalid_argument("unknown sweep parameter '" + spec.param + "'");
  if (spec.values.empty()) throw std::invalid_argument("sweep grid is empty");
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.methods.empty()) throw std::invalid_argument("no methods given");
  if (spec.kind == SweepKind::kSer && spec.ser_symbols < 1) throw std::invalid_argument("ser symbols must be >= 1");
  for (const auto& text : spec.methods) {
    const MethodSpec m = parse_method(text);
    for (double v : spec.values) {
      ScenarioConfig c = spec.base;
      apply_param(c, spec.param, v);
      c = m.apply(c);
      c.validate();
      (void)Constellation::from_name(c.constellation);
      if (m.single_user() && (c.k != 1 || lower(c.constellation) != "bpsk" || c.direct_links))
        throw std::invalid_argument("method '" + text + "' needs k=1, bpsk and no direct links");
      if (m.single_user() && c.bits != 0)
        throw std::invalid_argument("method '" + text + "' supports continuous phases only");
    }
  }
}

const ResultRow* ResultTable::find(double value, const std::string& method) const {
  for (const auto& r : rows)
    if (r.value == value && r.method == method) return &r;
  return nullptr;
}

ResultTable run_power_sweep(const SweepSpec& spec) { return run_grid(spec, false); }

ResultTable run_ser(const SweepSpec& spec) { return run_grid(spec, true); }

ResultTable run_timing(SweepSpec spec) {
  std::vector<std::string> kept;
  for (const auto& text : spec.methods)
    if (parse_method(text).single_user()) kept.push_back(text);
  if (kept.empty()) kept = {"sdr", "ao"};
  spec.methods = kept;
  spec.threads = 1;
  return run_grid(spec, false);
}

ResultTable run_sweep(const SweepSpec& spec) {
  switch (spec.kind) {
    case SweepKind::kPower: return run_power_sweep(spec);
    case SweepKind::kSer: return run_ser(spec);
    case SweepKind::kTiming: return run_timing(spec);
  }
  return run_power_sweep(spec);
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  out << "sweep_param,value,method,mean_power_dbm,std_power_dbm,mean_ser,mean_time_ms,trials,failures\n";
  for (const auto& r : table.rows) {
    out << r.param << ',' << format_number(r.value) << ',' << r.method << ',' << format_number(r.mean_power_dbm)
        << ',' << format_number(r.std_power_dbm) << ',' << format_number(r.mean_ser) << ','
        << format_number(r.mean_time_ms) << ',' << r.trials << ',' << r.failures << '\n';
  }
}

double symbol_error_rate(const ChannelSet& channels, const ScenarioConfig& config, const RVector& theta,
                         bool use_direct, int symbols, std::mt19937_64& rng, double noise_scale,
                         std::vector<ScatterPoint>* scatter) {
  const Constellation con = Constellation::from_name(config.constellation);
  const int k = config.k;
  const bool direct = use_direct && channels.has_direct();
  RobustInstance inst = build_instance(channels, config, con, std::vector<int>(static_cast<std::size_t>(k), 0),
                                       use_direct);
  std::vector<RMatrix> h(static_cast<std::size_t>(k)), hd(static_cast<std::size_t>(k));
  for (int u = 0; u < k; ++u) {
    h[static_cast<std::size_t>(u)] = lift(channels.actual[static_cast<std::size_t>(u)]);
    if (direct) hd[static_cast<std::size_t>(u)] = lift(channels.direct_actual[static_cast<std::size_t>(u)].transpose());
  }

  std::unordered_map<std::uint64_t, std::optional<RVector>> designs;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5) * noise_scale);
  long errors = 0;
  for (int s = 0; s < symbols; ++s) {
    const std::vector<int> tuple = con.random_symbols(k, rng);
    std::uint64_t code = 0;
    for (int v : tuple) code = code * static_cast<std::uint64_t>(con.order()) + static_cast<std::uint64_t>(v);
    auto it = designs.find(code);
    if (it == designs.end()) {
      set_symbols(inst, config, con, tuple);
      const TransmitSolution ts = solve_transmit(theta, inst);
      it = designs.emplace(code, ts.feasible ? std::optional<RVector>(ts.x) : std::nullopt).first;
    }
    if (!it->second) {
      errors += k;
      continue;
    }
    const RVector& x = *it->second;
    for (int u = 0; u < k; ++u) {
      const auto uu = static_cast<std::size_t>(u);
      const Eigen::Vector2d y2 = lifted_received(theta, x, h[uu], hd[uu]);
      const double scale = std::sqrt(config.gamma_linear(u));
      const cdouble y = (cdouble(y2(0), y2(1)) + cdouble(normal(rng), normal(rng))) / scale;
      if (con.detect(y) != tuple[uu]) ++errors;
      if (scatter) scatter->push_back({y.real(), y.imag(), u, tuple[uu]});
    }
  }
  return static_cast<double>(errors) / (static_cast<double>(symbols) * k);
}

std::vector<std::string> preset_names() {
  return {"fig3a", "fig3b", "fig5", "fig7", "fig8a", "fig8b", "fig9", "fig10"};
}

SweepSpec preset(const std::string& name) {
  SweepSpec s;
  s.id = name;
  s.trials = 50;
  s.base.gamma_db = {10.0};
  s.base.delta = {0.02};
  const auto single_user = [&] {
    s.base.k = 1;
    s.base.constellation = "bpsk";
  };
  const auto multiuser = [&] {
    s.base.k = 3;
    s.base.constellation = "qpsk";
  };
  const std::vector<double> gamma_grid{10, 12, 14, 16, 18, 20};
  if (name == "fig3a") {
    single_user();
    s.param = "n";
    s.values = {8, 16, 32, 48, 64};
    s.methods = {"sdr", "bound", "ao"};
  } else if (name == "fig3b") {
    single_user();
    s.kind = SweepKind::kTiming;
    s.param = "n";
    s.values = {16, 32, 48, 64};
    s.methods = {"sdr", "ao"};
  } else if (name == "fig5") {
    single_user();
    s.param = "n";
    s.values = {8, 16, 32, 48, 64};
    s.methods = {"ao:delta=0", "ao:delta=0.02"};
  } else if (name == "fig7") {
    multiuser();
    s.param = "n";
    s.values = {16, 32, 48, 64};
    s.methods = {"pgd:qpsk:b1", "pgd:qpsk:b2", "pgd:qpsk:b3", "pgd:qpsk",
                 "pgd:8psk:b1", "pgd:8psk:b2", "pgd:8psk:b3", "pgd:8psk"};
  } else if (name == "fig8a") {
    multiuser();
    s.base.n = 64;
    s.param = "gamma_db";
    s.values = gamma_grid;
    s.methods = {"pgd:b1", "pgd:b2", "pgd"};
  } else if (name == "fig8b") {
    multiuser();
    s.base.n = 64;
    s.param = "gamma_db";
    s.values = gamma_grid;
    s.methods = {"pgd:delta=0", "pgd:delta=0.01", "pgd:delta=0.02", "pgd:delta=0.03"};
  } else if (name == "fig9") {
    multiuser();
    s.base.n = 64;
    s.kind = SweepKind::kSer;
    s.param = "gamma_db";
    s.values = {0, 2, 4, 6, 8, 10};
    s.methods = {"pgd:b1", "pgd:b2", "pgd", "pgd:8psk", "pgd:16qam"};
  } else if (name == "fig10") {
    multiuser();
    s.param = "n";
    s.values = {16, 32, 48, 64};
    s.methods = {"pgd:nodirect", "pgd:direct", "pgd:nodirect:delta=0", "pgd:direct:delta=0"};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return s;
}

}  // namespace irs
