#include "vanet/quadrature.hpp"

namespace vanet {

void QuadratureSpec::validate() const {
  if (initial_panels < 8 || initial_panels % 2 != 0 || max_panels < initial_panels ||
      !(rel_tol > 0.0) || !(abs_tol >= 0.0)) {
    throw std::invalid_argument(
        "quadrature spec needs >= 8 even initial panels, cap >= initial, rel_tol > 0");
  }
}

}  // namespace vanet
