// vanetsim: command-line front end for the simulator and the analytics engine.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vanet/analytics.hpp"
#include "vanet/config.hpp"
#include "vanet/engine.hpp"
#include "vanet/harness.hpp"
#include "vanet/mobility.hpp"

namespace fs = std::filesystem;
using namespace vanet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoull(item));
        continue;
      }
      std::uint64_t step = 1;
      std::string hi = item.substr(dots + 2);
      if (const auto colon = hi.find(':'); colon != std::string::npos) {
        step = std::stoull(hi.substr(colon + 1));
        hi.resize(colon);
      }
      const auto a = std::stoull(item.substr(0, dots));
      const auto b = std::stoull(hi);
      if (step == 0 || b < a) throw std::invalid_argument("bad range");
      for (auto v = a; v <= b; v += step) out.push_back(v);
    }
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": expected N, A..B or A..B:STEP lists, got '" + text +
                      "'");
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": not a number: '" + item + "'");
    }
  }
  return out;
}

ScenarioConfig load_config(const Common& c) {
  ScenarioConfig cfg = c.config.empty() ? ScenarioConfig{} : ScenarioConfig::load(c.config);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Scenario config file (key = value)");
  app->add_option("--set", c.sets, "Override a config key, e.g. --set protocol=dsr");
  app->add_option("--out", c.out, "Output directory");
}

// --- run ---

struct RunOpts {
  Common common;
  std::optional<std::uint64_t> seed;
  std::string log;
  bool summary = false;
};

int cmd_run(const RunOpts& o) {
  ScenarioConfig cfg = load_config(o.common);
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();

  std::ostringstream events;
  const bool want_log = !o.log.empty() || !o.common.out.empty();
  Simulator sim(cfg);
  if (want_log) sim.set_event_log(&events);
  const RunResult r = sim.run();

  const std::string csv = csv_header() + "\n" + csv_row(label_for(cfg), r.metrics) + "\n";
  std::cout << csv;
  if (o.summary) std::cerr << summary(r.metrics);
  if (!o.log.empty()) write_text(o.log, events.str());
  if (!o.common.out.empty()) {
    fs::create_directories(o.common.out);
    write_text(fs::path(o.common.out) / "metrics.csv", csv);
    write_text(fs::path(o.common.out) / "events.log", events.str());
    write_text(fs::path(o.common.out) / "config.txt", cfg.serialize());
    write_text(fs::path(o.common.out) / "summary.txt", summary(r.metrics));
  }
  return kExitOk;
}

// --- sweep ---

struct SweepOpts {
  Common common;
  std::string axis = "flows";
  std::string values;
  std::string seeds = "1..5";
  std::string protocols = "aodv,dsr,fsr";
  unsigned jobs = 1;
  bool unsafe_axis = false;
};

int cmd_sweep(const SweepOpts& o) {
  harness::SweepSpec spec;
  spec.base = load_config(o.common);
  spec.axis = harness::parse_axis(o.axis);
  if (o.values.empty()) {
    spec.values = harness::standard_values(spec.axis);
  } else {
    for (auto v : parse_list(o.values, "--values")) spec.values.push_back(v);
  }
  spec.seeds = parse_list(o.seeds, "--seeds");
  spec.variants = harness::parse_variants(o.protocols);
  spec.jobs = o.jobs;
  spec.unsafe_axis = o.unsafe_axis;
  spec.validate();

  const auto result = harness::run_sweep(spec);
  const std::string aggregate = harness::aggregate_csv(result);
  std::size_t failed = 0;
  std::string errors = "protocol,profile,nodes,flows,seed,error\n";
  for (const auto& row : result.runs) {
    if (row.error.empty()) continue;
    ++failed;
    const auto& l = row.label;
    errors += l.protocol + "," + l.profile + "," + std::to_string(l.nodes) + "," +
              std::to_string(l.flows) + "," + std::to_string(l.seed) + ",\"" + row.error + "\"\n";
    std::cerr << "run failed: " << l.protocol << "/" << l.profile << " nodes=" << l.nodes
              << " flows=" << l.flows << " seed=" << l.seed << ": " << row.error << "\n";
  }
  if (!o.common.out.empty()) {
    fs::create_directories(o.common.out);
    write_text(fs::path(o.common.out) / "runs.csv", harness::runs_csv(result));
    write_text(fs::path(o.common.out) / "aggregate.csv", aggregate);
    write_text(fs::path(o.common.out) / "errors.csv", errors);
    write_text(fs::path(o.common.out) / "base_config.txt", spec.base.serialize());
  }
  std::cout << aggregate;
  return failed ? kExitRun : kExitOk;
}

// --- analytics ---

struct AnalyticsOpts {
  int case_index = 1;
  double a = 2.0;
  double vmin = 0.0;
  double vmax = 20.0;
  double d = 150.0;
  double r = 300.0;
  std::array<double, 4> t{60.0, 20.0, 10.0, 5.0};
  std::size_t grid = 101;
  double emax = 0.0;
  std::string mode = "consistent";
  std::string oracle;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

int cmd_analytics(const AnalyticsOpts& o) {
  using namespace analytics;
  if (o.case_index < 1 || o.case_index > 4) throw ConfigError("--case must be 1..4");
  if (o.grid < 1) throw ConfigError("--grid must be at least 1");
  if (!o.oracle.empty() && o.oracle != "mc") throw ConfigError("--oracle only supports 'mc'");
  if (!o.oracle.empty() && o.samples < 1000) throw ConfigError("--samples must be >= 1000");

  EncounterCase c = EncounterCase::case1();
  try {
    switch (o.case_index) {
      case 2: c = EncounterCase::case2(o.a); break;
      case 3: c = EncounterCase::case3(); break;
      case 4: c = EncounterCase::case4(o.a); break;
      default: break;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const CaseMode mode = parse_case_mode(o.mode);
  const auto sd = SpeedDistribution::uniform(o.vmin, o.vmax);
  AvailabilityParams params{o.d, o.r, o.t};
  params.validate();
  const double tn = params.lifetime(o.case_index);
  const double scale = o.d * tn;
  const double emax = o.emax > 0 ? o.emax : 5.0 * scale;

  const double e_case = expected_relative_speed_case(c, sd, mode);
  std::printf("# case=%d mode=%s a=%g vmin=%g vmax=%g d=%g t=%g\n", o.case_index,
              o.mode.c_str(), c.ratio(), o.vmin, o.vmax, o.d, tn);
  std::printf("# expected_relative_speed=%.9g density_at_expected=%.9g availability=%.9g\n",
              e_case, availability_pdf(e_case, params, o.case_index),
              availability_probability(e_case, params, o.case_index));

  std::vector<double> grid(o.grid);
  for (std::size_t i = 0; i < o.grid; ++i) {
    grid[i] = o.grid == 1 ? 0.0 : emax * static_cast<double>(i) / static_cast<double>(o.grid - 1);
  }
  const auto curve = availability_curve(grid, params, o.case_index);

  // Monte Carlo oracle: histogram density of exponential samples with mean
  // d*t_n, one bin centred on every grid point.
  std::vector<double> oracle;
  if (!o.oracle.empty()) {
    const double h = o.grid > 1 ? grid[1] - grid[0] : scale;
    std::vector<std::uint64_t> counts(o.grid, 0);
    RandomStream rng(o.seed, StreamId::Analytics);
    for (std::uint64_t i = 0; i < o.samples; ++i) {
      const double x = -scale * std::log1p(-rng.uniform());
      const auto bin = static_cast<std::uint64_t>(std::floor(x / h + 0.5));
      if (bin < o.grid) ++counts[bin];
    }
    for (std::size_t i = 0; i < o.grid; ++i) {
      const double width = i == 0 ? h / 2 : h;
      oracle.push_back(static_cast<double>(counts[i]) / (static_cast<double>(o.samples) * width));
    }
  }

  std::printf(o.oracle.empty() ? "e_vr,density\n" : "e_vr,density,oracle\n");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (oracle.empty()) {
      std::printf("%.9g,%.9g\n", curve[i].e_vr, curve[i].density);
    } else {
      std::printf("%.9g,%.9g,%.9g\n", curve[i].e_vr, curve[i].density, oracle[i]);
    }
  }
  return kExitOk;
}

// --- mobility ---

int cmd_mobility(const Common& c, std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = load_config(c);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  auto [grid, states] = mobility::build_grid(cfg.grid_spec(), cfg.seed);
  RandomStream rng(cfg.seed, StreamId::Mobility);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    file.open(fs::path(c.out) / "trace.txt");
    if (!file) throw std::runtime_error("cannot write trace");
    out = &file;
  }
  for (std::uint64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.mobility_step;
    if (t >= cfg.duration) break;
    if (k > 0) mobility::step(states, grid, cfg.mobility_step, rng);
    for (const auto& v : states) mobility::write_trace_line(*out, t, v);
  }
  return kExitOk;
}

// --- figure ---

struct FigureOpts {
  std::string kind;
  std::string input;
  std::string out = "figures";
  std::string d = "150,300";
  double t = 10.0;
  double emax = 0.0;
  std::size_t points = 200;
};

int cmd_figure(const FigureOpts& o) {
  const auto kind = harness::parse_figure(o.kind);
  std::vector<fs::path> files;
  if (kind == harness::FigureKind::Fig2) {
    harness::Fig2Spec spec;
    spec.distances = parse_doubles(o.d, "--d");
    spec.t = o.t;
    spec.e_max = o.emax;
    spec.points = o.points;
    for (double d : spec.distances) {
      if (!(d > 0)) throw ConfigError("--d values must be positive");
    }
    if (!(spec.t > 0)) throw ConfigError("--t must be positive");
    files = harness::write_fig2(spec, o.out);
  } else {
    if (o.input.empty()) throw ConfigError("--input aggregate.csv is required for sweep figures");
    files = harness::write_metric_figure(kind, o.input, o.out);
  }
  for (const auto& f : files) std::cout << f.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VANET discrete-event simulator and link-availability analytics"};
  app.require_subcommand(1);

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and print its metrics CSV row");
  add_common(run_cmd, run.common);
  run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--log", run.log, "Write the event log to this file");
  run_cmd->add_flag("--summary", run.summary, "Print a breakdown to stderr");

  SweepOpts sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Seed-replicated sweep over flows or nodes");
  add_common(sweep_cmd, sweep.common);
  sweep_cmd->add_option("--axis", sweep.axis, "flows or nodes")->capture_default_str();
  sweep_cmd->add_option("--values", sweep.values, "Axis values, e.g. 6..42:6 (default: standard set)");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds, e.g. 1..10 or 1,4,7")->capture_default_str();
  sweep_cmd->add_option("--protocols", sweep.protocols, "e.g. aodv,mod-dsr,fsr or all")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent runs")->capture_default_str();
  sweep_cmd->add_flag("--unsafe-axis", sweep.unsafe_axis, "Allow non-standard axis values");

  AnalyticsOpts an;
  auto* an_cmd = app.add_subcommand("analytics", "Link availability curve for one case");
  an_cmd->add_option("--case", an.case_index, "Encounter case 1..4")->capture_default_str();
  an_cmd->add_option("--a", an.a, "Speed ratio for cases 2 and 4")->capture_default_str();
  an_cmd->add_option("--vmin", an.vmin, "Minimum speed (m/s)")->capture_default_str();
  an_cmd->add_option("--vmax", an.vmax, "Maximum speed (m/s)")->capture_default_str();
  an_cmd->add_option("--d", an.d, "Separation (m)")->capture_default_str();
  an_cmd->add_option("--r", an.r, "Range (m)")->capture_default_str();
  an_cmd->add_option("--t1", an.t[0], "Case 1 lifetime (s)")->capture_default_str();
  an_cmd->add_option("--t2", an.t[1], "Case 2 lifetime (s)")->capture_default_str();
  an_cmd->add_option("--t3", an.t[2], "Case 3 lifetime (s)")->capture_default_str();
  an_cmd->add_option("--t4", an.t[3], "Case 4 lifetime (s)")->capture_default_str();
  an_cmd->add_option("--grid", an.grid, "Number of grid points")->capture_default_str();
  an_cmd->add_option("--emax", an.emax, "Grid upper end (default 5*d*t)");
  an_cmd->add_option("--mode", an.mode, "literal or consistent")->capture_default_str();
  an_cmd->add_option("--oracle", an.oracle, "Append a Monte Carlo column (mc)");
  an_cmd->add_option("--samples", an.samples, "Monte Carlo samples")->capture_default_str();
  an_cmd->add_option("--seed", an.seed, "Monte Carlo seed")->capture_default_str();

  Common mob;
  std::optional<std::uint64_t> mob_seed;
  auto* mob_cmd = app.add_subcommand("mobility", "Emit a grid mobility trace");
  add_common(mob_cmd, mob);
  mob_cmd->add_option("--seed", mob_seed, "Override the config seed");

  FigureOpts fig;
  auto* fig_cmd = app.add_subcommand("figure", "Write plot data and a gnuplot script");
  fig_cmd->add_option("kind", fig.kind,
                      "fig2, pdr_flows, pdr_nodes, ae2ed_flows, ae2ed_nodes, nro_flows, nro_nodes")
      ->required();
  fig_cmd->add_option("--input", fig.input, "Aggregate CSV from a sweep");
  fig_cmd->add_option("--out", fig.out, "Output directory")->capture_default_str();
  fig_cmd->add_option("--d", fig.d, "fig2 separations, comma separated")->capture_default_str();
  fig_cmd->add_option("--t", fig.t, "fig2 lifetime t_n (s)")->capture_default_str();
  fig_cmd->add_option("--emax", fig.emax, "fig2 grid upper end");
  fig_cmd->add_option("--points", fig.points, "fig2 grid points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*an_cmd) return cmd_analytics(an);
    if (*mob_cmd) return cmd_mobility(mob, mob_seed);
    if (*fig_cmd) return cmd_figure(fig);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRun;
  }
  return kExitOk;
}
