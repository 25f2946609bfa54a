#pragma once

#include "faultflow/regdelta.hpp"

namespace faultflow {

// Closed-form 1D Darcy solution with one fault at xg: constant velocity,
// piecewise-linear pressure with a jump u/tf across the fault, and its
// delta-regularized counterpart.
struct Analytic1D {
  double L = 10.0, xg = 5.0, tf = 0.2, p0 = 1.0, pL = 0.0;

  double velocity() const { return (p0 - pL) / (1.0 / tf + L); }

  // at x == xg this returns the left limit
  double pressure(double x) const {
    const double u = velocity();
    return x <= xg ? p0 - u * x : pL + u * (L - x);
  }

  double jump() const { return velocity() / tf; }

  // p_eps(x) = p(x) - H_eps(x) u/tf left of the fault and
  //            p(x) - (H_eps(x)-1) u/tf right of it
  double regularized_pressure(const RegDelta& delta, double x) const {
    const double u = velocity();
    const double H = delta.heaviside(x);
    return x <= xg ? pressure(x) - H * u / tf : pressure(x) - (H - 1.0) * u / tf;
  }
};

}  // namespace faultflow
