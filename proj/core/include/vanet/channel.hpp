#pragma once

// Packet reception: unit-disk gating at the radio range, optionally combined
// with Nakagami-m fading of the received power.

#include <string>
#include <vector>

#include "vanet/rng.hpp"

namespace vanet::channel {

enum class Fading { None, Nakagami };

/// Nakagami shape m applies up to (and including) max_distance.
struct ShapeStage {
  double max_distance;
  double m;
};

struct ChannelModel {
  double range = 300.0;
  Fading fading = Fading::None;
  std::vector<ShapeStage> m_schedule = default_schedule();
  double reference_power = 1.0;  ///< mean received power at 1 m
  double path_loss_exponent = 2.0;
  /// Reception threshold on received power. Use calibrate_threshold() to
  /// derive it from the range.
  double threshold = 0.0;

  static std::vector<ShapeStage> default_schedule();

  void validate() const;
  double mean_power(double distance) const;
  double shape_at(double distance) const;
};

/// Default model for a range: Nakagami stages {(80, 3), (200, 1.5), (inf, 1)},
/// free-space exponent 2, threshold set so that reception at the range edge
/// succeeds with probability 0.1 under fading.
ChannelModel make_channel(double range, Fading fading);

/// Threshold giving reception probability `target` at the model's range.
double calibrate_threshold(const ChannelModel& ch, double target = 0.1);

/// P(gamma(m, omega / m) > threshold), i.e. the regularised upper incomplete
/// gamma Q(m, m * threshold / omega). Integer m uses the finite Poisson sum.
double nakagami_success(double m, double threshold_over_mean);

double reception_probability(double distance, const ChannelModel& ch);

bool try_receive(double distance, const ChannelModel& ch, RandomStream& rng);

Fading parse_fading(const std::string& text);
std::string to_string(Fading f);
/// "80:3,200:1.5,inf:1"
std::vector<ShapeStage> parse_schedule(const std::string& text);
std::string format_schedule(const std::vector<ShapeStage>& schedule);

}  // namespace vanet::channel
