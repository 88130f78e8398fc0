#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace vanet {

/// Controls for iterated composite Simpson integration.
struct QuadratureSpec {
  int initial_panels = 16;  ///< panels on the first pass, >= 8 and even
  int max_panels = 1024;    ///< refinement cap per axis
  double rel_tol = 1e-6;    ///< successive Richardson estimates must agree to this
  double abs_tol = 1e-13;   ///< floor for integrals that are ~0

  void validate() const;
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Plain composite Simpson rule on `panels` (even) subintervals.
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0) {
    throw std::invalid_argument("simpson: panel count must be even and >= 2");
  }
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  }
  return sum * h / 3.0;
}

/// Composite Simpson with panel doubling and Richardson extrapolation.
///
/// Each doubling reuses every previous function value. Iteration stops once
/// two consecutive extrapolated estimates agree within the tolerance; if the
/// panel cap is reached first a NonConvergenceError is thrown.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return 0.0;
  int n = spec.initial_panels;
  double h = (b - a) / n;
  const double ends = f(a) + f(b);
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) {
    (i % 2 ? odd : even) += f(a + i * h);
  }
  double coarse = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
  bool have_previous = false;
  double previous = 0.0;
  double last_gap = 0.0;
  while (n < spec.max_panels) {
    n *= 2;
    h *= 0.5;
    even += odd;
    odd = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    const double fine = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
    const double extrapolated = fine + (fine - coarse) / 15.0;
    if (have_previous) {
      last_gap = std::fabs(extrapolated - previous);
      if (last_gap <= spec.rel_tol * std::fabs(extrapolated) + spec.abs_tol) {
        return extrapolated;
      }
    }
    previous = extrapolated;
    have_previous = true;
    coarse = fine;
  }
  throw NonConvergenceError("integrate: no convergence on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "] within " +
                            std::to_string(spec.max_panels) +
                            " panels (last gap " + std::to_string(last_gap) + ")");
}

/// Same as integrate() but splits [a, b] at the given interior points, used
/// where the integrand has a kink at a known location.
template <typename F>
double integrate_split(F&& f, double a, double b, std::initializer_list<double> cuts,
                       const QuadratureSpec& spec) {
  std::vector<double> knots{a};
  for (double c : cuts) {
    if (c > knots.back() && c < b) knots.push_back(c);
  }
  knots.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    total += integrate(f, knots[i], knots[i + 1], spec);
  }
  return total;
}

}  // namespace vanet
