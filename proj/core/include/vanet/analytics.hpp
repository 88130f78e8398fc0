#pragma once

// Link availability analytics for a pair of vehicles: relative speed, the
// four collinear encounter cases, expected relative speed under speed and
// heading distributions, and the exponential availability density.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vanet/quadrature.hpp"

namespace vanet::analytics {

inline constexpr double kPi = 3.14159265358979323846;

/// Two node speeds (m/s) and the angle between their velocity vectors.
struct EncounterGeometry {
  double v1 = 0.0;
  double v2 = 0.0;
  double theta = 0.0;  ///< radians, in [0, pi]

  void validate() const;
};

/// Speed distribution with support [v_min, v_max].
class SpeedDistribution {
 public:
  using Density = std::function<double(double)>;
  using Quantile = std::function<double(double)>;

  /// Uniform on [v_min, v_max].
  static SpeedDistribution uniform(double v_min, double v_max);
  /// Uniform on [v - half_width, v + half_width]; a near point mass at v.
  static SpeedDistribution around(double v, double half_width = 1e-6);
  /// Arbitrary density. Without a quantile function, sampling inverts a
  /// tabulated CDF.
  static SpeedDistribution custom(double v_min, double v_max, Density density,
                                  Quantile quantile = {});

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  bool is_uniform() const { return uniform_; }
  double density(double v) const;
  /// Inverse CDF, u in [0, 1).
  double quantile(double u) const;
  double mean() const;

 private:
  SpeedDistribution(double v_min, double v_max, Density density, Quantile quantile,
                    bool uniform);

  double v_min_;
  double v_max_;
  Density density_;
  Quantile quantile_;
  bool uniform_;
};

/// Heading-angle distribution over [0, pi].
class AngleDistribution {
 public:
  using Density = std::function<double(double)>;
  using Quantile = std::function<double(double)>;

  static AngleDistribution uniform();
  /// All mass at one angle.
  static AngleDistribution point(double theta);
  static AngleDistribution custom(Density density, Quantile quantile = {});

  bool is_point() const { return point_.has_value(); }
  double point_angle() const { return point_.value(); }
  double density(double theta) const;
  double quantile(double u) const;

 private:
  AngleDistribution() = default;

  std::optional<double> point_;
  Density density_;
  Quantile quantile_;
};

enum class CaseKind { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };

/// One of the four collinear encounter cases. Cases 2 and 4 carry the speed
/// ratio a = faster / slower.
class EncounterCase {
 public:
  static EncounterCase case1() { return EncounterCase(CaseKind::Case1, 1.0); }
  static EncounterCase case2(double a);
  static EncounterCase case3() { return EncounterCase(CaseKind::Case3, 1.0); }
  static EncounterCase case4(double a);

  CaseKind kind() const { return kind_; }
  int index() const { return static_cast<int>(kind_); }
  double ratio() const { return ratio_; }
  bool same_direction() const {
    return kind_ == CaseKind::Case1 || kind_ == CaseKind::Case2;
  }

  friend bool operator==(const EncounterCase&, const EncounterCase&) = default;

 private:
  EncounterCase(CaseKind kind, double ratio) : kind_(kind), ratio_(ratio) {}

  CaseKind kind_;
  double ratio_;
};

std::string to_string(const EncounterCase& c);

class InvalidRatioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Separation d, range r and the per-case link lifetimes t1..t4.
struct AvailabilityParams {
  double d = 0.0;
  double r = 0.0;
  std::array<double, 4> lifetimes{};

  double lifetime(int case_index) const;
  void validate() const;
};

/// |v1 - v2| by the cosine law.
double relative_speed(const EncounterGeometry& geom);

inline constexpr double kDefaultSpeedTol = 0.1;
inline constexpr double kDefaultAngleTol = kPi / 36.0;

/// Maps a geometry onto the four-case flow chart. Returns nullopt when the
/// motion is not (nearly) collinear, or when the speed ratio falls outside
/// the range the matching case admits.
std::optional<EncounterCase> classify_case(const EncounterGeometry& geom,
                                           double speed_tol = kDefaultSpeedTol,
                                           double angle_tol = kDefaultAngleTol);

/// Relative speed implied by a case when the slower node moves at v2.
double case_relative_speed(const EncounterCase& c, double v2);

/// Expected relative speed as the triple integral over v1, v2 and theta.
double expected_relative_speed_general(const SpeedDistribution& sd,
                                       const AngleDistribution& ad,
                                       const QuadratureSpec& quad = {});

enum class CaseMode {
  Literal,     ///< integrals exactly as printed; Case 1 integrates to 1
  Consistent,  ///< Case 1 evaluates to 0, matching |v_r| = 0
};

double expected_relative_speed_case(const EncounterCase& c, const SpeedDistribution& sd,
                                    CaseMode mode = CaseMode::Consistent,
                                    const QuadratureSpec& quad = {});

/// (1 / (d t_n)) exp(-e_vr / (d t_n)).
double availability_pdf(double e_vr, const AvailabilityParams& params, int case_index);

/// Tail mass of that density beyond e_vr, exp(-e_vr / (d t_n)). Unlike the
/// density it is not scaled by 1/(d t_n), so it orders the cases by t_n.
double availability_probability(double e_vr, const AvailabilityParams& params, int case_index);

/// Same density with the scale given directly.
double availability_density(double e_vr, double d, double t);

struct CurvePoint {
  double e_vr;
  double density;
};

std::vector<CurvePoint> availability_curve(const std::vector<double>& e_vr_grid,
                                           const AvailabilityParams& params,
                                           int case_index);

/// e_vr where the densities for separations d1 < d2 (same t) are equal.
double crossover_point(double d1, double d2, double t);

struct MonteCarloEstimate {
  double estimate;
  double standard_error;
};

MonteCarloEstimate monte_carlo_expected_speed(const SpeedDistribution& sd,
                                              const AngleDistribution& ad,
                                              std::uint64_t n_samples, std::uint64_t seed);

CaseMode parse_case_mode(const std::string& text);

}  // namespace vanet::analytics
