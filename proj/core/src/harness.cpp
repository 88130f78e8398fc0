#include "vanet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vanet/analytics.hpp"
#include "vanet/engine.hpp"

namespace vanet::harness {
namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string variant_label(const std::string& protocol, const std::string& profile) {
  return (profile == "modified" ? "MOD-" : "") + protocol;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

Axis parse_axis(const std::string& text) {
  if (text == "flows") return Axis::Flows;
  if (text == "nodes") return Axis::Nodes;
  throw ConfigError("axis must be 'flows' or 'nodes'");
}

std::string to_string(Axis a) { return a == Axis::Flows ? "flows" : "nodes"; }

const std::vector<std::size_t>& standard_values(Axis a) {
  static const std::vector<std::size_t> flows{6, 12, 18, 24, 30, 36, 42};
  static const std::vector<std::size_t> nodes{20, 40, 60, 80, 100};
  return a == Axis::Flows ? flows : nodes;
}

std::vector<Variant> parse_variants(const std::string& csv) {
  std::vector<Variant> out;
  for (std::string item : split(csv, ',')) {
    item = lower(item);
    if (item.empty()) continue;
    if (item == "all") {
      for (auto p : {routing::Protocol::Aodv, routing::Protocol::Dsr, routing::Protocol::Fsr}) {
        out.push_back({p, routing::Profile::Default});
        out.push_back({p, routing::Profile::Modified});
      }
      continue;
    }
    Variant v;
    if (item.rfind("mod-", 0) == 0) {
      v.profile = routing::Profile::Modified;
      item = item.substr(4);
    }
    try {
      v.protocol = routing::parse_protocol(item);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("no protocols given");
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  if (variants.empty()) throw ConfigError("sweep needs at least one protocol");
  if (jobs == 0) throw ConfigError("jobs must be at least 1");
  const auto& allowed = standard_values(axis);
  for (std::size_t v : values) {
    if (v == 0) throw ConfigError("axis values must be positive");
    if (!unsafe_axis && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      throw ConfigError("axis value " + std::to_string(v) + " is outside the standard " +
                        to_string(axis) + " set; pass --unsafe-axis to allow it");
    }
  }
  for (const Variant& var : variants) {
    for (std::size_t v : values) config_for(var, v, seeds.front()).validate();
  }
}

ScenarioConfig SweepSpec::config_for(const Variant& v, std::size_t value,
                                     std::uint64_t seed) const {
  ScenarioConfig c = base;
  c.protocol = v.protocol;
  c.profile = v.profile;
  c.seed = seed;
  if (axis == Axis::Flows) {
    c.cbr_flows = value;
    c.flows.clear();
  } else {
    c.node_count = value;
  }
  return c;
}

Spread spread(std::vector<double> s) {
  if (s.empty()) throw std::invalid_argument("spread of an empty sample");
  std::sort(s.begin(), s.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  return {q(0.5), q(0.75) - q(0.25)};
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Job {
    ScenarioConfig cfg;
  };
  std::vector<Job> jobs;
  for (const Variant& var : spec.variants) {
    for (std::size_t value : spec.values) {
      for (std::uint64_t seed : spec.seeds) jobs.push_back({spec.config_for(var, value, seed)});
    }
  }

  SweepResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      RunRow& row = result.runs[i];
      row.label = label_for(jobs[i].cfg);
      try {
        row.metrics = simulate(jobs[i].cfg).metrics;
      } catch (const std::exception& e) {
        row.error = e.what();
        if (row.error.empty()) row.error = "unknown failure";
      }
    }
  };
  const unsigned n = std::min<std::size_t>(spec.jobs, jobs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const std::size_t per_cell = spec.seeds.size();
  for (std::size_t c = 0; c * per_cell < result.runs.size(); ++c) {
    CellSummary cell;
    std::vector<double> p, a, o;
    for (std::size_t k = 0; k < per_cell; ++k) {
      const RunRow& row = result.runs[c * per_cell + k];
      cell.protocol = row.label.protocol;
      cell.profile = row.label.profile;
      cell.nodes = row.label.nodes;
      cell.flows = row.label.flows;
      ++cell.runs;
      if (!row.metrics) {
        ++cell.errors;
        continue;
      }
      const MetricsRecord& m = *row.metrics;
      if (m.data_sent > 0) p.push_back(pdr(m));
      if (m.data_delivered > 0) {
        a.push_back(ae2ed(m));
        o.push_back(nro(m));
      }
    }
    if (!p.empty()) cell.pdr = spread(p);
    if (!a.empty()) cell.ae2ed = spread(a);
    if (!o.empty()) cell.nro = spread(o);
    result.cells.push_back(cell);
  }
  return result;
}

std::string runs_csv(const SweepResult& r) {
  std::string out = csv_header() + "\n";
  for (const RunRow& row : r.runs) {
    if (row.metrics) {
      out += csv_row(row.label, *row.metrics) + "\n";
    } else {
      const RunLabel& l = row.label;
      out += l.protocol + "," + l.profile + "," + std::to_string(l.nodes) + "," +
             std::to_string(l.flows) + "," + std::to_string(l.seed) + ",ERROR,ERROR,ERROR\n";
    }
  }
  return out;
}

std::string aggregate_header() {
  return "protocol,profile,nodes,flows,runs,errors,pdr_median,pdr_iqr,ae2ed_median,ae2ed_iqr,"
         "nro_median,nro_iqr";
}

std::string aggregate_csv(const SweepResult& r) {
  std::string out = aggregate_header() + "\n";
  auto pair = [](const std::optional<Spread>& s, const char* f) {
    return s ? fmt(f, s->median) + "," + fmt(f, s->iqr) : std::string("NA,NA");
  };
  for (const CellSummary& c : r.cells) {
    out += c.protocol + "," + c.profile + "," + std::to_string(c.nodes) + "," +
           std::to_string(c.flows) + "," + std::to_string(c.runs) + "," +
           std::to_string(c.errors) + "," + pair(c.pdr, "%.6f") + "," +
           pair(c.ae2ed, "%.9f") + "," + pair(c.nro, "%.6f") + "\n";
  }
  return out;
}

FigureKind parse_figure(const std::string& text) {
  static const std::map<std::string, FigureKind> names{
      {"fig2", FigureKind::Fig2},          {"pdr_flows", FigureKind::PdrFlows},
      {"pdr_nodes", FigureKind::PdrNodes}, {"ae2ed_flows", FigureKind::Ae2edFlows},
      {"ae2ed_nodes", FigureKind::Ae2edNodes}, {"nro_flows", FigureKind::NroFlows},
      {"nro_nodes", FigureKind::NroNodes}};
  auto it = names.find(text);
  if (it == names.end()) throw ConfigError("unknown figure '" + text + "'");
  return it->second;
}

std::string to_string(FigureKind k) {
  switch (k) {
    case FigureKind::Fig2: return "fig2";
    case FigureKind::PdrFlows: return "pdr_flows";
    case FigureKind::PdrNodes: return "pdr_nodes";
    case FigureKind::Ae2edFlows: return "ae2ed_flows";
    case FigureKind::Ae2edNodes: return "ae2ed_nodes";
    case FigureKind::NroFlows: return "nro_flows";
    case FigureKind::NroNodes: return "nro_nodes";
  }
  return "?";
}

std::vector<std::filesystem::path> write_fig2(const Fig2Spec& spec,
                                              const std::filesystem::path& out_dir) {
  if (spec.distances.empty()) throw std::invalid_argument("fig2 needs at least one d");
  if (spec.points < 2) throw std::invalid_argument("fig2 needs at least two points");
  if (!(spec.t > 0.0)) throw std::invalid_argument("fig2 needs t > 0");
  for (double d : spec.distances) {
    if (!(d > 0.0)) throw std::invalid_argument("fig2 separations must be positive");
  }
  std::filesystem::create_directories(out_dir);
  const double dmax = *std::max_element(spec.distances.begin(), spec.distances.end());
  const double e_max = spec.e_max > 0 ? spec.e_max : 5.0 * dmax * spec.t;

  std::vector<double> grid(spec.points);
  for (std::size_t i = 0; i < spec.points; ++i) {
    grid[i] = e_max * static_cast<double>(i) / static_cast<double>(spec.points - 1);
  }
  std::vector<std::filesystem::path> files;
  std::string plot = "set xlabel 'expected relative velocity e_vr'\n"
                     "set ylabel 'probability of link availability'\n"
                     "set title 'Link availability, t = " + fmt("%g", spec.t) + " s'\n"
                     "plot ";
  for (std::size_t s = 0; s < spec.distances.size(); ++s) {
    const double d = spec.distances[s];
    std::string text = "# e_vr density\n";
    for (double e : grid) {
      text += fmt("%.9g", e) + " " + fmt("%.9g", analytics::availability_density(e, d, spec.t)) + "\n";
    }
    const auto path = out_dir / ("fig2_d" + fmt("%g", d) + ".dat");
    write_file(path, text);
    files.push_back(path);
    plot += (s ? ", " : "") + std::string("'") + path.filename().string() +
            "' using 1:2 with lines title 'd = " + fmt("%g", d) + " m'";
  }
  const auto script = out_dir / "fig2.gp";
  write_file(script, plot + "\n");
  files.push_back(script);
  return files;
}

std::vector<std::filesystem::path> write_metric_figure(FigureKind kind,
                                                       const std::filesystem::path& aggregate,
                                                       const std::filesystem::path& out_dir) {
  if (kind == FigureKind::Fig2) throw std::invalid_argument("fig2 is not a sweep figure");
  std::ifstream in(aggregate);
  if (!in) throw std::runtime_error("missing sweep data: cannot open " + aggregate.string());

  const std::string name = to_string(kind);
  const std::string metric = name.substr(0, name.find('_'));
  const bool by_flows = name.find("flows") != std::string::npos;

  std::string line;
  if (!std::getline(in, line) || line != aggregate_header()) {
    throw std::runtime_error("missing sweep data: " + aggregate.string() +
                             " is not an aggregate CSV");
  }
  const auto header = split(aggregate_header(), ',');
  const auto col = static_cast<std::size_t>(
      std::find(header.begin(), header.end(), metric + "_median") - header.begin());

  // series -> x -> (median, iqr)
  std::map<std::string, std::map<std::size_t, std::pair<std::string, std::string>>> series;
  std::map<std::string, std::set<std::size_t>> other_axis;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw std::runtime_error("malformed aggregate row: " + line);
    const std::string label = variant_label(f[0], f[1]);
    const std::size_t nodes = std::stoul(f[2]);
    const std::size_t flows = std::stoul(f[3]);
    const std::size_t x = by_flows ? flows : nodes;
    other_axis[label].insert(by_flows ? nodes : flows);
    series[label][x] = {f[col], f[col + 1]};
  }
  bool varies = false;
  for (const auto& [label, pts] : series) varies |= pts.size() > 1;
  if (series.empty() || !varies) {
    throw std::runtime_error("missing sweep data: no variation along the " +
                             std::string(by_flows ? "flows" : "nodes") + " axis in " +
                             aggregate.string());
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> files;
  const std::string ylabel = metric == "pdr"     ? "PDR (%)"
                             : metric == "ae2ed" ? "AE2ED (s)"
                                                 : "NRO";
  std::string plot = "set xlabel '" + std::string(by_flows ? "number of CBR flows" : "number of nodes") +
                     "'\nset ylabel '" + ylabel + "'\nset key outside\nplot ";
  bool first = true;
  for (const auto& [label, pts] : series) {
    std::string text = "# x median iqr\n";
    for (const auto& [x, v] : pts) {
      if (v.first == "NA") continue;
      text += std::to_string(x) + " " + v.first + " " + v.second + "\n";
    }
    const auto path = out_dir / (name + "_" + label + ".dat");
    write_file(path, text);
    files.push_back(path);
    plot += (first ? "" : ", ") + std::string("'") + path.filename().string() +
            "' using 1:2:3 with yerrorlines title '" + label + "'";
    first = false;
  }
  const auto script = out_dir / (name + ".gp");
  write_file(script, plot + "\n");
  files.push_back(script);
  return files;
}

}  // namespace vanet::harness
