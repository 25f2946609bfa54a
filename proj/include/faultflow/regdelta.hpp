#pragma once

#include "faultflow/fault.hpp"

namespace faultflow {

// Tensor-product regularization of the surface delta on the fault: a Gaussian
// of width eps across the fault plane times an erf-window along it that
// smoothly switches on over eps_tau around [tau_min, tau_max]. In 1D the
// window is identically 1.
class RegDelta {
 public:
  RegDelta(const FaultGeometry& geom, double eps, double eps_tau);
  RegDelta(const FaultGeometry& geom, double eps) : RegDelta(geom, eps, eps) {}

  double eps() const { return eps_; }
  double eps_tau() const { return eps_tau_; }
  const FaultGeometry& geometry() const { return geom_; }

  // xn is the absolute normal-axis coordinate; the fault offset is xn - xg
  double normal_profile(double xn) const;
  double dnormal_profile(double xn) const;
  double window(double tau) const;
  double dwindow(double tau) const;

  double delta(Vec2 p) const;
  double ddelta_dn(Vec2 p) const;
  double ddelta_dtau(Vec2 p) const;
  Vec2 grad_delta(Vec2 p) const;

  // H_eps(x) = integral of delta from 0 to x; 1D only
  double heaviside(double x) const;

  // coefficients of the regularized operator
  double g_eps(Vec2 p, double tf) const;      // delta' / (tf + delta)
  double d_eps(Vec2 p, double tf) const;      // delta' * (xn - xg) / (tf + delta)
  double dd_eps_dtau(Vec2 p, double tf) const;

 private:
  FaultGeometry geom_;
  double eps_, eps_tau_;
};

}  // namespace faultflow
