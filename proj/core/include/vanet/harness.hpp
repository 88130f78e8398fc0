#pragma once

// Seed-replicated parameter sweeps and plot-data emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vanet/config.hpp"
#include "vanet/metrics.hpp"

namespace vanet::harness {

enum class Axis { Flows, Nodes };

Axis parse_axis(const std::string& text);
std::string to_string(Axis a);

/// Standard axis values: flows 6..42 step 6, nodes 20..100 step 20.
const std::vector<std::size_t>& standard_values(Axis a);

struct Variant {
  routing::Protocol protocol = routing::Protocol::Aodv;
  routing::Profile profile = routing::Profile::Default;
};

/// "aodv", "mod-aodv", "dsr", ... ; "all" expands to the six combinations.
std::vector<Variant> parse_variants(const std::string& csv);

struct SweepSpec {
  ScenarioConfig base;
  Axis axis = Axis::Flows;
  std::vector<std::size_t> values;
  std::vector<std::uint64_t> seeds;
  std::vector<Variant> variants;
  unsigned jobs = 1;
  bool unsafe_axis = false;

  /// Throws ConfigError.
  void validate() const;
  /// Config of one cell/seed.
  ScenarioConfig config_for(const Variant& v, std::size_t value, std::uint64_t seed) const;
};

struct RunRow {
  RunLabel label;
  std::optional<MetricsRecord> metrics;
  std::string error;  ///< empty on success
};

struct Spread {
  double median = 0.0;
  double iqr = 0.0;
};

struct CellSummary {
  std::string protocol;
  std::string profile;
  std::size_t nodes = 0;
  std::size_t flows = 0;
  std::size_t runs = 0;
  std::size_t errors = 0;
  std::optional<Spread> pdr;
  std::optional<Spread> ae2ed;
  std::optional<Spread> nro;
};

struct SweepResult {
  std::vector<RunRow> runs;        ///< variant-major, then value, then seed
  std::vector<CellSummary> cells;  ///< variant-major, then value
};

/// Median and interquartile range with linear interpolation between order
/// statistics. Throws std::invalid_argument on an empty sample.
Spread spread(std::vector<double> sample);

/// Runs the cross product with up to `jobs` concurrent simulations. Failed
/// runs are recorded and the sweep carries on.
SweepResult run_sweep(const SweepSpec& spec);

std::string runs_csv(const SweepResult& r);
std::string aggregate_csv(const SweepResult& r);
std::string aggregate_header();

enum class FigureKind { Fig2, PdrFlows, PdrNodes, Ae2edFlows, Ae2edNodes, NroFlows, NroNodes };

FigureKind parse_figure(const std::string& text);
std::string to_string(FigureKind k);

struct Fig2Spec {
  std::vector<double> distances{150.0, 300.0};
  double t = 10.0;
  double e_max = 0.0;  ///< 0 picks 5 * max(d) * t
  std::size_t points = 200;
};

/// Writes one data file per series and a gnuplot script into `out_dir`;
/// returns the written paths.
std::vector<std::filesystem::path> write_fig2(const Fig2Spec& spec,
                                              const std::filesystem::path& out_dir);

/// Plots a metric from an aggregate CSV produced by a sweep. Throws
/// std::runtime_error when the CSV lacks data for the requested axis.
std::vector<std::filesystem::path> write_metric_figure(FigureKind kind,
                                                       const std::filesystem::path& aggregate,
                                                       const std::filesystem::path& out_dir);

}  // namespace vanet::harness
