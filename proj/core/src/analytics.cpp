#include "vanet/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "vanet/rng.hpp"

namespace vanet::analytics {
namespace {

// Normalisation checks use a far tighter rule than the expected-speed
// integrals so the 1e-9 requirement is meaningful.
const QuadratureSpec kNormalisationQuad{16, 1 << 16, 1e-12, 1e-15};
constexpr double kNormalisationTol = 1e-9;
constexpr int kQuantileTableSize = 8192;

void check_normalised(const std::function<double(double)>& density, double lo, double hi,
                      const char* what) {
  const double mass = integrate(density, lo, hi, kNormalisationQuad);
  if (std::fabs(mass - 1.0) > kNormalisationTol) {
    throw std::invalid_argument(std::string(what) + ": density integrates to " +
                                std::to_string(mass) + ", not 1");
  }
}

// Inverse CDF by a cumulative trapezoid table and linear interpolation.
std::function<double(double)> tabulated_quantile(const std::function<double(double)>& density,
                                                 double lo, double hi) {
  auto cdf = std::make_shared<std::vector<double>>(kQuantileTableSize + 1, 0.0);
  const double h = (hi - lo) / kQuantileTableSize;
  double prev = density(lo);
  for (int i = 1; i <= kQuantileTableSize; ++i) {
    const double cur = density(lo + i * h);
    (*cdf)[i] = (*cdf)[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = cdf->back();
  for (double& c : *cdf) c /= total;
  return [cdf, lo, h](double u) {
    const auto it = std::upper_bound(cdf->begin(), cdf->end(), u);
    if (it == cdf->begin()) return lo;
    if (it == cdf->end()) return lo + h * kQuantileTableSize;
    const auto i = static_cast<std::size_t>(it - cdf->begin()) - 1;
    const double span = (*cdf)[i + 1] - (*cdf)[i];
    const double frac = span > 0.0 ? (u - (*cdf)[i]) / span : 0.0;
    return lo + h * (static_cast<double>(i) + frac);
  };
}

double cosine_law(double v1, double v2, double theta) {
  // (v1 - v2)^2 + 4 v1 v2 sin^2(theta / 2) equals the cosine law exactly and
  // does not cancel near theta = 0.
  const double s = std::sin(0.5 * theta);
  const double dv = v1 - v2;
  return std::sqrt(dv * dv + 4.0 * v1 * v2 * s * s);
}

}  // namespace

void EncounterGeometry::validate() const {
  if (!std::isfinite(v1) || !std::isfinite(v2) || v1 < 0.0 || v2 < 0.0) {
    throw std::domain_error("encounter speeds must be finite and non-negative");
  }
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::domain_error("heading angle must lie in [0, pi]");
  }
}

SpeedDistribution::SpeedDistribution(double v_min, double v_max, Density density,
                                     Quantile quantile, bool uniform)
    : v_min_(v_min),
      v_max_(v_max),
      density_(std::move(density)),
      quantile_(std::move(quantile)),
      uniform_(uniform) {}

SpeedDistribution SpeedDistribution::uniform(double v_min, double v_max) {
  if (!(v_min >= 0.0 && v_min < v_max && std::isfinite(v_max))) {
    throw std::invalid_argument("speed distribution needs 0 <= v_min < v_max");
  }
  const double height = 1.0 / (v_max - v_min);
  return SpeedDistribution(
      v_min, v_max,
      [=](double v) { return (v >= v_min && v <= v_max) ? height : 0.0; },
      [=](double u) { return v_min + u * (v_max - v_min); }, true);
}

SpeedDistribution SpeedDistribution::around(double v, double half_width) {
  return uniform(std::max(0.0, v - half_width), v + half_width);
}

SpeedDistribution SpeedDistribution::custom(double v_min, double v_max, Density density,
                                            Quantile quantile) {
  if (!(v_min >= 0.0 && v_min < v_max && std::isfinite(v_max))) {
    throw std::invalid_argument("speed distribution needs 0 <= v_min < v_max");
  }
  if (!density) throw std::invalid_argument("speed distribution needs a density");
  check_normalised(density, v_min, v_max, "speed distribution");
  if (!quantile) quantile = tabulated_quantile(density, v_min, v_max);
  return SpeedDistribution(v_min, v_max, std::move(density), std::move(quantile), false);
}

double SpeedDistribution::density(double v) const { return density_(v); }

double SpeedDistribution::quantile(double u) const { return quantile_(u); }

double SpeedDistribution::mean() const {
  if (uniform_) return 0.5 * (v_min_ + v_max_);
  return integrate([this](double v) { return v * density_(v); }, v_min_, v_max_,
                   kNormalisationQuad);
}

AngleDistribution AngleDistribution::uniform() {
  AngleDistribution ad;
  ad.density_ = [](double theta) { return (theta >= 0.0 && theta <= kPi) ? 1.0 / kPi : 0.0; };
  ad.quantile_ = [](double u) { return kPi * u; };
  return ad;
}

AngleDistribution AngleDistribution::point(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::invalid_argument("angle distribution support is [0, pi]");
  }
  AngleDistribution ad;
  ad.point_ = theta;
  ad.quantile_ = [theta](double) { return theta; };
  return ad;
}

AngleDistribution AngleDistribution::custom(Density density, Quantile quantile) {
  if (!density) throw std::invalid_argument("angle distribution needs a density");
  check_normalised(density, 0.0, kPi, "angle distribution");
  AngleDistribution ad;
  if (!quantile) quantile = tabulated_quantile(density, 0.0, kPi);
  ad.density_ = std::move(density);
  ad.quantile_ = std::move(quantile);
  return ad;
}

double AngleDistribution::density(double theta) const {
  if (point_) {
    throw std::logic_error("point-mass angle distribution has no density");
  }
  return density_(theta);
}

double AngleDistribution::quantile(double u) const { return quantile_(u); }

EncounterCase EncounterCase::case2(double a) {
  if (!(a > 1.0 && a < 3.0)) {
    throw InvalidRatioError("case 2 needs a speed ratio in (1, 3), got " + std::to_string(a));
  }
  return EncounterCase(CaseKind::Case2, a);
}

EncounterCase EncounterCase::case4(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw InvalidRatioError("case 4 needs a finite speed ratio > 1, got " + std::to_string(a));
  }
  return EncounterCase(CaseKind::Case4, a);
}

std::string to_string(const EncounterCase& c) {
  switch (c.kind()) {
    case CaseKind::Case1: return "Case1";
    case CaseKind::Case2: return "Case2(a=" + std::to_string(c.ratio()) + ")";
    case CaseKind::Case3: return "Case3";
    case CaseKind::Case4: return "Case4(a=" + std::to_string(c.ratio()) + ")";
  }
  return "?";
}

double AvailabilityParams::lifetime(int case_index) const {
  if (case_index < 1 || case_index > 4) {
    throw std::out_of_range("case index must be 1..4");
  }
  return lifetimes[static_cast<std::size_t>(case_index - 1)];
}

void AvailabilityParams::validate() const {
  if (!(d > 0.0 && d <= r)) {
    throw std::invalid_argument("availability params need 0 < d <= r");
  }
  if (!(lifetimes[0] > lifetimes[1] && lifetimes[1] > lifetimes[2] &&
        lifetimes[2] > lifetimes[3] && lifetimes[3] > 0.0)) {
    throw std::invalid_argument("link lifetimes need t1 > t2 > t3 > t4 > 0");
  }
}

double relative_speed(const EncounterGeometry& geom) {
  geom.validate();
  return cosine_law(geom.v1, geom.v2, geom.theta);
}

std::optional<EncounterCase> classify_case(const EncounterGeometry& geom, double speed_tol,
                                           double angle_tol) {
  geom.validate();
  if (!(speed_tol > 0.0) || !(angle_tol > 0.0)) {
    throw std::invalid_argument("classification tolerances must be positive");
  }
  const bool same_speed = std::fabs(geom.v1 - geom.v2) <= speed_tol;
  const bool aligned = geom.theta <= angle_tol;
  const bool opposed = std::fabs(geom.theta - kPi) <= angle_tol;
  if (!aligned && !opposed) return std::nullopt;

  if (same_speed) return aligned ? EncounterCase::case1() : EncounterCase::case3();

  const double slow = std::min(geom.v1, geom.v2);
  const double fast = std::max(geom.v1, geom.v2);
  if (slow <= 0.0) return std::nullopt;
  const double a = fast / slow;
  if (aligned) {
    if (a >= 3.0) return std::nullopt;
    return EncounterCase::case2(a);
  }
  return EncounterCase::case4(a);
}

double case_relative_speed(const EncounterCase& c, double v2) {
  if (!(v2 >= 0.0) || !std::isfinite(v2)) {
    throw std::domain_error("v2 must be finite and non-negative");
  }
  switch (c.kind()) {
    case CaseKind::Case1: return 0.0;
    case CaseKind::Case2: return (c.ratio() - 1.0) * v2;
    case CaseKind::Case3: return 2.0 * v2;
    case CaseKind::Case4: return (c.ratio() + 1.0) * v2;
  }
  return 0.0;
}

double expected_relative_speed_general(const SpeedDistribution& sd,
                                       const AngleDistribution& ad,
                                       const QuadratureSpec& quad) {
  quad.validate();
  const double lo = sd.v_min();
  const double hi = sd.v_max();
  // Inner axes run tighter so their residual noise does not stall the
  // convergence test of the axis above.
  QuadratureSpec inner = quad;
  inner.rel_tol = quad.rel_tol * 0.5;

  auto over_angle = [&](double v1, double v2) {
    if (ad.is_point()) return cosine_law(v1, v2, ad.point_angle());
    return integrate([&](double th) { return ad.density(th) * cosine_law(v1, v2, th); },
                     0.0, kPi, inner);
  };
  // |v1 - v2| has a kink on the diagonal, so the v2 axis is split at v1.
  auto over_v2 = [&](double v1) {
    return integrate_split([&](double v2) { return sd.density(v2) * over_angle(v1, v2); },
                           lo, hi, {v1}, inner);
  };
  return integrate([&](double v1) { return sd.density(v1) * over_v2(v1); }, lo, hi, quad);
}

double expected_relative_speed_case(const EncounterCase& c, const SpeedDistribution& sd,
                                    CaseMode mode, const QuadratureSpec& quad) {
  quad.validate();
  const double lo = sd.v_min();
  const double hi = sd.v_max();
  // All four case integrands separate into a v1 factor and a v2 factor.
  const double v1_mass = integrate([&](double v) { return sd.density(v); }, lo, hi, quad);
  const double v2_mass = integrate([&](double v) { return sd.density(v); }, lo, hi, quad);
  const double v2_mean = integrate([&](double v) { return v * sd.density(v); }, lo, hi, quad);
  switch (c.kind()) {
    case CaseKind::Case1: return mode == CaseMode::Literal ? v1_mass * v2_mass : 0.0;
    case CaseKind::Case2: return (c.ratio() - 1.0) * v1_mass * v2_mean;
    case CaseKind::Case3: return 2.0 * v1_mass * v2_mean;
    case CaseKind::Case4: return (c.ratio() + 1.0) * v1_mass * v2_mean;
  }
  return 0.0;
}

double availability_density(double e_vr, double d, double t) {
  const double scale = d * t;
  if (scale == 0.0 || !std::isfinite(scale)) {
    throw std::domain_error("availability density needs a non-zero finite d*t");
  }
  if (!(e_vr >= 0.0)) throw std::domain_error("expected relative speed must be >= 0");
  return std::exp(-e_vr / scale) / scale;
}

double availability_pdf(double e_vr, const AvailabilityParams& params, int case_index) {
  params.validate();
  return availability_density(e_vr, params.d, params.lifetime(case_index));
}

double availability_probability(double e_vr, const AvailabilityParams& params,
                                int case_index) {
  params.validate();
  const double scale = params.d * params.lifetime(case_index);
  return scale * availability_density(e_vr, params.d, params.lifetime(case_index));
}

std::vector<CurvePoint> availability_curve(const std::vector<double>& e_vr_grid,
                                           const AvailabilityParams& params, int case_index) {
  params.validate();
  const double t = params.lifetime(case_index);
  std::vector<CurvePoint> out;
  out.reserve(e_vr_grid.size());
  for (std::size_t i = 0; i < e_vr_grid.size(); ++i) {
    const double e = e_vr_grid[i];
    if (!(e >= 0.0)) throw std::domain_error("curve grid must be non-negative");
    if (i > 0 && !(e > e_vr_grid[i - 1])) {
      throw std::invalid_argument("curve grid must be strictly ascending");
    }
    out.push_back({e, availability_density(e, params.d, t)});
  }
  return out;
}

double crossover_point(double d1, double d2, double t) {
  if (!(d1 > 0.0 && d2 > d1 && t > 0.0)) {
    throw std::invalid_argument("crossover needs 0 < d1 < d2 and t > 0");
  }
  return d1 * d2 * t / (d2 - d1) * std::log(d2 / d1);
}

MonteCarloEstimate monte_carlo_expected_speed(const SpeedDistribution& sd,
                                              const AngleDistribution& ad,
                                              std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("monte carlo needs >= 1000 samples");
  RandomStream rng(seed, StreamId::Analytics);
  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double v1 = sd.quantile(rng.uniform());
    const double v2 = sd.quantile(rng.uniform());
    const double th = ad.quantile(rng.uniform());
    const double x = cosine_law(v1, v2, th);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const auto n = static_cast<double>(n_samples);
  const double variance = m2 / (n - 1.0);
  return {mean, std::sqrt(variance / n)};
}

CaseMode parse_case_mode(const std::string& text) {
  if (text == "literal") return CaseMode::Literal;
  if (text == "consistent") return CaseMode::Consistent;
  throw std::invalid_argument("mode must be 'literal' or 'consistent'");
}

}  // namespace vanet::analytics
