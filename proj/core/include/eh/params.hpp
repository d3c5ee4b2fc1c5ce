#pragma once

#include "eh/errors.hpp"

namespace eh {

// Coefficients of the surface-plus-boundary energy
//   E = int a (H + c0)^2 + b K dA  +  oint alpha kappa^2 + beta ds.
// Sign convention: H is measured with the outward normal, so a round sphere
// of radius 1/c0 has H = -c0 and spontaneous curvature c0 >= 0 favors it.
struct EnergyParams {
  double a = 1.0;
  double c0 = 0.0;
  double b = 0.0;
  double alpha = 1.0;
  double beta = 1.0;

  // require_beta: boundary-length weight must be positive wherever an energy
  // scale or a rim radius sqrt(alpha/beta) is formed.
  void validate(bool require_beta = true) const {
    if (!(a > 0)) throw validation_error("EnergyParams: a must be positive");
    if (!(alpha > 0)) throw validation_error("EnergyParams: alpha must be positive");
    if (require_beta && !(beta > 0)) throw validation_error("EnergyParams: beta must be positive");
    if (beta < 0) throw validation_error("EnergyParams: beta must be nonnegative");
  }
};

}  // namespace eh
