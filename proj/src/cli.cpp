// SPDX-License-Identifier: Apache-2.0

#include "fakepath/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fakepath/bounds.hpp"
#include "fakepath/crb.hpp"
#include "fakepath/estimation.hpp"
#include "fakepath/sim.hpp"
#include "fakepath/steering.hpp"

namespace fakepath::cli {

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct KeySpec {
  std::string name;
  std::string fallback;  // empty string means required-if-used (no default)
  bool required = false;
};

const std::vector<KeySpec>& subcommand_keys(const std::string& subcommand) {
  static const std::map<std::string, std::vector<KeySpec>> specs = {
      {"kernel",
       {{"n_antennas", "", true}, {"t", "", true}, {"derivative_order", "0", false}}},
      {"crb",
       {{"n_antennas", "31", false},
        {"n_paths", "5", false},
        {"delta", "", false},
        {"delta_ratio", "0.1", false},
        {"snr_db", "0", false}}},
      {"bounds",
       {{"n_antennas", "31", false},
        {"n_paths", "5", false},
        {"delta", "", false},
        {"delta_ratio", "0.1", false},
        {"snr_db", "0", false},
        {"c_min", "1", false},
        {"c_max", "1", false}}},
      {"sweep-crb",
       {{"n_antennas", "31", false},
        {"n_paths", "5", false},
        {"delta", "", false},
        {"snr_db", "0", false},
        {"n_trials", "200", false},
        {"n_ratios", "20", false},
        {"ratio_min", "0.001", false},
        {"ratio_max", "0.45", false},
        {"delta_ratios", "", false},
        {"seed", "", true},
        {"threads", "0", false}}},
      {"sweep-margin",
       {{"n_antennas", "31", false},
        {"n_paths", "5", false},
        {"delta", "", false},
        {"snr_db", "0", false},
        {"n_trials", "200", false},
        {"gamma_targets", "", true},
        {"seed", "", true},
        {"threads", "0", false}}},
      {"ber",
       {{"n_antennas", "15", false},
        {"n_paths", "3", false},
        {"n_pilots", "15", false},
        {"n_data_symbols", "50", false},
        {"n_trials", "40", false},
        {"snr_db_list", "0,5,10,15,20", false},
        {"delta_ratio", "0.1", false},
        {"fake_data_phase", "0", false},
        {"music_grid", "4096", false},
        {"seed", "", true},
        {"threads", "0", false}}},
  };
  const auto it = specs.find(subcommand);
  if (it == specs.end()) throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  return it->second;
}

double default_min_separation(const RunConfig& cfg) {
  const auto L = cfg.get_int("n_paths");
  return 1.0 / static_cast<double>(L);
}

parallel::ExecPolicy policy_from(const RunConfig& cfg) {
  parallel::ExecPolicy policy;
  if (cfg.has("threads")) policy.threads = static_cast<int>(cfg.get_int("threads"));
  return policy;
}

void echo_config(table::ExperimentTable& out, const std::string& subcommand,
                 const RunConfig& cfg) {
  table::ExperimentTable echoed;
  echoed.add_metadata("command", subcommand);
  echoed.add_metadata("version", kVersion);
  for (const auto& [k, v] : cfg.values()) echoed.add_metadata("cfg:" + k, v);
  for (const auto& [k, v] : out.metadata()) echoed.add_metadata(k, v);
  table::ExperimentTable merged(out.columns());
  for (const auto& [k, v] : echoed.metadata()) merged.add_metadata(k, v);
  for (const auto& row : out.rows()) merged.add_row(row);
  out = merged;
}

table::ExperimentTable run_kernel(const RunConfig& cfg) {
  const steering::KernelOrder order(static_cast<int>(cfg.get_int("n_antennas")));
  const double t = cfg.get_double("t");
  const int p = static_cast<int>(cfg.get_int("derivative_order"));
  table::ExperimentTable out({"n_antennas", "t", "derivative_order", "value"});
  table::ExperimentTable::RowBuilder row(4);
  row.num(order.n_antennas()).num(t).num(p).num(steering::dirichlet(order, t, p));
  out.add_row(row.take());
  return out;
}

struct SceneSpec {
  steering::KernelOrder order;
  torus::PathSet taus;
  torus::PathSet fakes;
  double Delta;
  double delta;
  double eta;
};

SceneSpec scene_from(const RunConfig& cfg) {
  const int N = static_cast<int>(cfg.get_int("n_antennas"));
  const int L = static_cast<int>(cfg.get_int("n_paths"));
  const double Delta = cfg.has("delta") ? cfg.get_double("delta") : 1.0 / L;
  const double ratio = cfg.get_double("delta_ratio");
  const double delta = ratio * Delta;
  const steering::KernelOrder order(N);
  torus::PathSet taus = sim::equispaced_paths(L, Delta);
  std::vector<torus::TorusPoint> fake_pts;
  for (int l = 0; l < L; ++l) fake_pts.emplace_back(taus[static_cast<std::size_t>(l)].value() + delta);
  const double eta = sim::noise_std_for_snr_db(L, N, cfg.get_double("snr_db"));
  return SceneSpec{order, taus, torus::PathSet(fake_pts), Delta, delta, eta};
}

table::ExperimentTable run_crb(const RunConfig& cfg) {
  const SceneSpec spec = scene_from(cfg);
  const auto L = static_cast<Eigen::Index>(spec.taus.size());
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(L);
  crb::ChannelScene bob_scene(spec.taus, std::nullopt, ones, Eigen::VectorXcd(), spec.eta,
                              spec.order);
  crb::ChannelScene eve_scene(spec.taus, spec.fakes, ones, ones, spec.eta, spec.order);

  table::ExperimentTable out({"scenario", "n_parameters", "lambda_min", "lambda_max"});
  const auto add = [&](const char* name, const crb::CrbReport& report) {
    table::ExperimentTable::RowBuilder row(4);
    row.text(name)
        .num(static_cast<double>(report.labels.size()))
        .num(report.lambda_min)
        .num(report.lambda_max);
    out.add_row(row.take());
    return report;
  };

  const auto bob_fim_aoa = crb::fim_aoa_known_coeffs(bob_scene, crb::Receiver::Bob);
  const auto bob_aoa = add("bob_aoa", crb::crb_block(bob_fim_aoa, bob_fim_aoa.labels));
  const auto eve_fim_aoa = crb::fim_aoa_known_coeffs(eve_scene, crb::Receiver::Eve);
  const auto eve_aoa =
      add("eve_aoa", crb::crb_block(eve_fim_aoa, crb::aoa_labels(spec.taus.size(), false)));
  const auto bob_fim_full = crb::fim_full(bob_scene, crb::Receiver::Bob);
  const auto bob_full = add("bob_full", crb::crb_block(bob_fim_full, bob_fim_full.labels));
  const auto eve_fim_full = crb::fim_full(eve_scene, crb::Receiver::Eve);
  const auto eve_full =
      add("eve_full", crb::crb_block(eve_fim_full, crb::full_labels(spec.taus.size(), false)));

  out.add_metadata("margin_aoa", crb::privacy_margin(eve_aoa, bob_aoa));
  out.add_metadata("margin_full", crb::privacy_margin(eve_full, bob_full));
  return out;
}

table::ExperimentTable run_bounds(const RunConfig& cfg) {
  const SceneSpec spec = scene_from(cfg);
  const int L = static_cast<int>(spec.taus.size());
  const double c_min = cfg.get_double("c_min");
  const double c_max = cfg.get_double("c_max");

  table::ExperimentTable out({"bound", "variant", "value"});
  const auto add = [&](const char* name, const char* variant, double value) {
    table::ExperimentTable::RowBuilder row(3);
    row.text(name).text(variant).num(value);
    out.add_row(row.take());
  };
  const auto guarded = [&](auto&& fn) -> double {
    try {
      return fn();
    } catch (const std::invalid_argument&) {
      return std::nan("");
    }
  };

  using bounds::BoundVariant;
  for (const auto& [variant, tag] :
       {std::pair{BoundVariant::Closed, "paper"}, std::pair{BoundVariant::Rigorous, "rigorous"}}) {
    const auto v = variant;
    add("bob_crb_aoa", tag, guarded([&] {
          return bounds::bob_crb_bound_aoa(spec.order, spec.Delta, spec.eta, c_min, v).value;
        }));
    add("eve_crb_aoa", tag, guarded([&] {
          return bounds::eve_crb_bound_aoa(spec.order, L, spec.Delta, spec.delta, spec.eta, c_max, v)
              .value;
        }));
    add("bob_crb_full", tag, guarded([&] {
          return bounds::bob_crb_bound_full(spec.order, spec.Delta, spec.eta, c_min, v).value;
        }));
    add("eve_crb_full", tag, guarded([&] {
          return bounds::eve_crb_bound_full(spec.order, L, spec.Delta, spec.delta, spec.eta, c_max, v)
              .value;
        }));
    bounds::MarginParams params;
    params.order_bob = spec.order;
    params.order_eve = spec.order;
    params.n_paths = L;
    params.min_sep_bob = spec.Delta;
    params.min_sep_eve = spec.Delta;
    params.inter_sep_eve = spec.delta;
    params.noise_bob = spec.eta;
    params.noise_eve = spec.eta;
    params.coeff_min_bob = c_min;
    params.coeff_max_eve = c_max;
    add("margin_aoa", tag, guarded([&] {
          return bounds::margin_bound(bounds::MarginScenario::AoAOnly, params, v);
        }));
    add("margin_full", tag, guarded([&] {
          return bounds::margin_bound(bounds::MarginScenario::Full, params, v);
        }));
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double la = std::log10(lo);
  const double lb = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::pow(10.0, la + (lb - la) * i / (n - 1)));
  }
  return out;
}

sim::SweepConfig sweep_config_from(const RunConfig& cfg) {
  sim::SweepConfig sweep;
  sweep.n_antennas = static_cast<int>(cfg.get_int("n_antennas"));
  sweep.n_paths = static_cast<int>(cfg.get_int("n_paths"));
  sweep.Delta = cfg.has("delta") ? cfg.get_double("delta") : default_min_separation(cfg);
  sweep.snr_db = cfg.get_double("snr_db");
  sweep.n_trials = static_cast<int>(cfg.get_int("n_trials"));
  sweep.seed = cfg.get_u64("seed");
  return sweep;
}

table::ExperimentTable run_sweep_crb(const RunConfig& cfg) {
  sim::SweepConfig sweep = sweep_config_from(cfg);
  if (cfg.has("delta_ratios") && !cfg.get_string("delta_ratios").empty()) {
    sweep.delta_ratios = cfg.get_double_list("delta_ratios");
  } else {
    sweep.delta_ratios = log_spaced(cfg.get_double("ratio_min"), cfg.get_double("ratio_max"),
                                    static_cast<int>(cfg.get_int("n_ratios")));
  }
  return sim::mc_crb_realizations(sweep, policy_from(cfg));
}

table::ExperimentTable run_sweep_margin(const RunConfig& cfg) {
  const sim::SweepConfig sweep = sweep_config_from(cfg);
  return sim::margin_sweep(sweep, cfg.get_double_list("gamma_targets"), policy_from(cfg));
}

table::ExperimentTable run_ber(const RunConfig& cfg) {
  estimation::BerConfig ber;
  ber.n_antennas = static_cast<int>(cfg.get_int("n_antennas"));
  ber.n_paths = static_cast<int>(cfg.get_int("n_paths"));
  ber.n_pilots = static_cast<int>(cfg.get_int("n_pilots"));
  ber.n_data_symbols = static_cast<int>(cfg.get_int("n_data_symbols"));
  ber.n_trials = static_cast<int>(cfg.get_int("n_trials"));
  ber.snr_db_list = cfg.get_double_list("snr_db_list");
  ber.delta_ratio = cfg.get_double("delta_ratio");
  ber.seed = cfg.get_u64("seed");
  ber.fake_in_data_phase = cfg.get_bool("fake_data_phase");
  ber.music_grid = static_cast<int>(cfg.get_int("music_grid"));
  return estimation::ber_experiment(ber, policy_from(cfg));
}

}  // namespace

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) bad_key(key, "missing");
  return it->second;
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string raw = get_string(key);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(raw, &pos);
  } catch (const std::exception&) {
    bad_key(key, "expected an integer, got '" + raw + "'");
  }
  if (pos != raw.size()) bad_key(key, "expected an integer, got '" + raw + "'");
  return v;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string raw = get_string(key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    bad_key(key, "expected a number, got '" + raw + "'");
  }
  if (pos != raw.size()) bad_key(key, "expected a number, got '" + raw + "'");
  return v;
}

unsigned long long RunConfig::get_u64(const std::string& key) const {
  const std::string raw = get_string(key);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(raw, &pos);
  } catch (const std::exception&) {
    bad_key(key, "expected an unsigned integer, got '" + raw + "'");
  }
  if (pos != raw.size() || raw.find('-') != std::string::npos) {
    bad_key(key, "expected an unsigned integer, got '" + raw + "'");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string raw = get_string(key);
  if (raw == "0" || raw == "false") return false;
  if (raw == "1" || raw == "true") return true;
  bad_key(key, "expected 0/1/true/false, got '" + raw + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad_key(key, "empty element in list '" + raw + "'");
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      bad_key(key, "expected a number list, got '" + raw + "'");
    }
    if (pos != item.size()) bad_key(key, "expected a number list, got '" + raw + "'");
    out.push_back(v);
  }
  if (out.empty()) bad_key(key, "empty list");
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> values;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    }
    values[key] = value;
  }
  return RunConfig(std::move(values));
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig config_from_csv_metadata(const std::string& csv) {
  std::map<std::string, std::string> values;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("# cfg:", 0) != 0) {
      if (line.rfind("#", 0) != 0) break;  // metadata block ends at the header
      continue;
    }
    const std::string body = line.substr(6);
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    values[body.substr(0, eq)] = body.substr(eq + 1);
  }
  return RunConfig(std::move(values));
}

RunConfig resolve_config(const std::string& subcommand, const RunConfig& config) {
  const auto& keys = subcommand_keys(subcommand);
  std::set<std::string> known;
  for (const auto& spec : keys) known.insert(spec.name);
  for (const auto& [k, v] : config.values()) {
    if (known.count(k) == 0) {
      throw std::invalid_argument("unknown config key '" + k + "' for subcommand '" + subcommand +
                                  "'");
    }
  }
  RunConfig resolved = config;
  for (const auto& spec : keys) {
    if (resolved.has(spec.name)) continue;
    if (spec.required) {
      throw std::invalid_argument("missing required config key '" + spec.name +
                                  "' for subcommand '" + subcommand + "'");
    }
    if (!spec.fallback.empty()) resolved.set(spec.name, spec.fallback);
  }

  // range validation
  const auto check = [&](const char* key, auto&& pred, const char* why) {
    if (resolved.has(key) && !pred()) bad_key(key, why);
  };
  check("n_antennas", [&] {
    const auto n = resolved.get_int("n_antennas");
    return n >= 1 && n % 2 == 1;
  }, "must be an odd integer >= 1");
  check("n_paths", [&] { return resolved.get_int("n_paths") >= 1; }, "must be >= 1");
  check("n_trials", [&] { return resolved.get_int("n_trials") >= 1; }, "must be >= 1");
  check("n_pilots", [&] { return resolved.get_int("n_pilots") >= 1; }, "must be >= 1");
  check("n_data_symbols", [&] { return resolved.get_int("n_data_symbols") >= 1; }, "must be >= 1");
  check("music_grid", [&] { return resolved.get_int("music_grid") >= 16; }, "must be >= 16");
  check("threads", [&] { return resolved.get_int("threads") >= 0; }, "must be >= 0");
  check("n_ratios", [&] { return resolved.get_int("n_ratios") >= 1; }, "must be >= 1");
  check("derivative_order", [&] {
    const auto p = resolved.get_int("derivative_order");
    return p >= 0 && p <= 4;
  }, "must be in 0..4");
  check("delta_ratio", [&] {
    const double r = resolved.get_double("delta_ratio");
    return r > 0.0 && r < 0.5;
  }, "must lie in (0, 0.5)");
  check("ratio_min", [&] {
    const double r = resolved.get_double("ratio_min");
    return r > 0.0 && r < 0.5;
  }, "must lie in (0, 0.5)");
  check("ratio_max", [&] {
    const double r = resolved.get_double("ratio_max");
    return r > 0.0 && r < 0.5 && r >= resolved.get_double("ratio_min");
  }, "must lie in (0, 0.5) and be >= ratio_min");
  check("delta", [&] {
    const double d = resolved.get_double("delta");
    return d > 0.0 && d <= 0.5;
  }, "must lie in (0, 0.5]");
  check("delta_ratios", [&] {
    if (resolved.get_string("delta_ratios").empty()) return true;
    for (double r : resolved.get_double_list("delta_ratios")) {
      if (!(r > 0.0 && r < 0.5)) return false;
    }
    return true;
  }, "every ratio must lie in (0, 0.5)");
  check("gamma_targets", [&] {
    for (double g : resolved.get_double_list("gamma_targets")) {
      if (!(g >= 1.0)) return false;
    }
    return true;
  }, "every target must be >= 1");
  check("fake_data_phase", [&] {
    resolved.get_bool("fake_data_phase");
    return true;
  }, "must be 0/1/true/false");
  if (resolved.has("seed")) resolved.get_u64("seed");

  return resolved;
}

table::ExperimentTable run_subcommand(const std::string& subcommand, const RunConfig& config) {
  const RunConfig resolved = resolve_config(subcommand, config);
  table::ExperimentTable out;
  if (subcommand == "kernel") {
    out = run_kernel(resolved);
  } else if (subcommand == "crb") {
    out = run_crb(resolved);
  } else if (subcommand == "bounds") {
    out = run_bounds(resolved);
  } else if (subcommand == "sweep-crb") {
    out = run_sweep_crb(resolved);
  } else if (subcommand == "sweep-margin") {
    out = run_sweep_margin(resolved);
  } else if (subcommand == "ber") {
    out = run_ber(resolved);
  } else {
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  }
  echo_config(out, subcommand, resolved);
  return out;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Location-privacy analysis for SIMO arrays with fake-path injection"};
  app.require_subcommand(1);

  struct SubState {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    std::string n, t, order, seed, threads;
  };
  std::map<std::string, SubState> state;

  for (const std::string name : {"kernel", "crb", "bounds", "sweep-crb", "sweep-margin", "ber"}) {
    auto* sub = app.add_subcommand(name, "");
    auto& st = state[name];
    sub->add_option("--config", st.config_path, "flat key=value config file");
    sub->add_option("--out", st.out_path, "output CSV path (default: stdout)");
    sub->add_option("--set", st.overrides, "key=value override (repeatable)");
    sub->add_option("--seed", st.seed, "root seed for stochastic commands");
    sub->add_option("--threads", st.threads, "0 = default parallel, 1 = serial");
    if (name == "kernel") {
      sub->add_option("--n", st.n, "antenna count");
      sub->add_option("--t", st.t, "evaluation point");
      sub->add_option("--order", st.order, "derivative order (0..4)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const SubState& st = state[name];
    RunConfig cfg;
    if (!st.config_path.empty()) cfg = parse_config_file(st.config_path);
    for (const auto& kv : st.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      }
      cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (!st.seed.empty()) cfg.set("seed", st.seed);
    if (!st.threads.empty()) cfg.set("threads", st.threads);
    if (!st.n.empty()) cfg.set("n_antennas", st.n);
    if (!st.t.empty()) cfg.set("t", st.t);
    if (!st.order.empty()) cfg.set("derivative_order", st.order);

    const table::ExperimentTable out = run_subcommand(name, cfg);
    if (st.out_path.empty()) {
      std::cout << out.to_csv();
    } else {
      std::ofstream f(st.out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file '" + st.out_path + "'");
      f << out.to_csv();
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fakepath::cli
