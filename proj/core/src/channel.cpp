#include "vanet/channel.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vanet::channel {
namespace {

constexpr double kReferenceDistance = 1.0;

bool is_integer(double m) { return m == std::floor(m) && m < 64.0; }

}  // namespace

std::vector<ShapeStage> ChannelModel::default_schedule() {
  return {{80.0, 3.0}, {200.0, 1.5}, {std::numeric_limits<double>::infinity(), 1.0}};
}

void ChannelModel::validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("channel range must be positive");
  if (fading == Fading::None) return;
  if (m_schedule.empty()) throw std::invalid_argument("nakagami schedule is empty");
  for (std::size_t i = 0; i < m_schedule.size(); ++i) {
    if (!(m_schedule[i].m >= 0.5)) {
      throw std::invalid_argument("nakagami shape must be >= 0.5");
    }
    if (i > 0 && !(m_schedule[i].max_distance > m_schedule[i - 1].max_distance)) {
      throw std::invalid_argument("nakagami schedule distances must be strictly increasing");
    }
  }
  if (!(reference_power > 0.0) || !(path_loss_exponent > 0.0) || !(threshold > 0.0)) {
    throw std::invalid_argument("nakagami needs positive power, exponent and threshold");
  }
}

double ChannelModel::mean_power(double distance) const {
  const double d = std::max(distance, kReferenceDistance);
  return reference_power * std::pow(kReferenceDistance / d, path_loss_exponent);
}

double ChannelModel::shape_at(double distance) const {
  for (const auto& stage : m_schedule) {
    if (distance <= stage.max_distance) return stage.m;
  }
  return m_schedule.back().m;
}

double nakagami_success(double m, double threshold_over_mean) {
  const double x = m * threshold_over_mean;
  if (is_integer(m)) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < static_cast<int>(m); ++k) {
      term *= x / k;
      sum += term;
    }
    return std::exp(-x) * sum;
  }
  return boost::math::gamma_q(m, x);
}

double calibrate_threshold(const ChannelModel& ch, double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument("calibration target must lie in (0, 1)");
  }
  const double m = ch.shape_at(ch.range);
  return ch.mean_power(ch.range) * boost::math::gamma_q_inv(m, target) / m;
}

ChannelModel make_channel(double range, Fading fading) {
  ChannelModel ch;
  ch.range = range;
  ch.fading = fading;
  ch.threshold = calibrate_threshold(ch);
  return ch;
}

double reception_probability(double distance, const ChannelModel& ch) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw std::domain_error("distance must be finite and non-negative");
  }
  if (distance > ch.range) return 0.0;
  if (ch.fading == Fading::None) return 1.0;
  return nakagami_success(ch.shape_at(distance), ch.threshold / ch.mean_power(distance));
}

bool try_receive(double distance, const ChannelModel& ch, RandomStream& rng) {
  return rng.bernoulli(reception_probability(distance, ch));
}

Fading parse_fading(const std::string& text) {
  if (text == "none") return Fading::None;
  if (text == "nakagami") return Fading::Nakagami;
  throw std::invalid_argument("channel.fading must be 'none' or 'nakagami'");
}

std::string to_string(Fading f) { return f == Fading::None ? "none" : "nakagami"; }

std::vector<ShapeStage> parse_schedule(const std::string& text) {
  std::vector<ShapeStage> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("m_schedule entries look like 'max_distance:m'");
    }
    const std::string dist = item.substr(0, colon);
    const double d = (dist == "inf" || dist == "∞") ? std::numeric_limits<double>::infinity()
                                                    : std::stod(dist);
    out.push_back({d, std::stod(item.substr(colon + 1))});
  }
  if (out.empty()) throw std::invalid_argument("m_schedule is empty");
  return out;
}

std::string format_schedule(const std::vector<ShapeStage>& schedule) {
  std::ostringstream out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i) out << ',';
    if (std::isinf(schedule[i].max_distance)) {
      out << "inf";
    } else {
      out << schedule[i].max_distance;
    }
    out << ':' << schedule[i].m;
  }
  return out.str();
}

}  // namespace vanet::channel
