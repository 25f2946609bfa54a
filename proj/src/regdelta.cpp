#include "faultflow/regdelta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace faultflow {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

double std_normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::numbers::sqrt2)); }
}  // namespace

RegDelta::RegDelta(const FaultGeometry& geom, double eps, double eps_tau)
    : geom_(geom), eps_(eps), eps_tau_(eps_tau) {
  geom_.validate();
  if (!(eps > 0.0) || !(eps_tau > 0.0))
    throw std::invalid_argument("regdelta: eps and eps_tau must be positive");
}

double RegDelta::normal_profile(double xn) const {
  const double xi = (xn - geom_.xg) / eps_;
  return std::exp(-0.5 * xi * xi) / (kSqrt2Pi * eps_);
}

double RegDelta::dnormal_profile(double xn) const {
  const double xi = xn - geom_.xg;
  return -xi / (eps_ * eps_) * normal_profile(xn);
}

double RegDelta::window(double tau) const {
  if (geom_.dim == 1) return 1.0;
  const double c = kSqrt2Pi * eps_tau_;
  return 0.25 * (1.0 + std::erf((tau - geom_.tau_min) / c)) *
         (1.0 + std::erf((geom_.tau_max - tau) / c));
}

double RegDelta::dwindow(double tau) const {
  if (geom_.dim == 1) return 0.0;
  const double c = kSqrt2Pi * eps_tau_;
  const double a = (tau - geom_.tau_min) / c;
  const double b = (geom_.tau_max - tau) / c;
  return 0.25 * kTwoOverSqrtPi / c *
         (std::exp(-a * a) * (1.0 + std::erf(b)) - (1.0 + std::erf(a)) * std::exp(-b * b));
}

double RegDelta::delta(Vec2 p) const { return normal_profile(p.x) * window(p.y); }

double RegDelta::ddelta_dn(Vec2 p) const { return dnormal_profile(p.x) * window(p.y); }

double RegDelta::ddelta_dtau(Vec2 p) const { return normal_profile(p.x) * dwindow(p.y); }

Vec2 RegDelta::grad_delta(Vec2 p) const { return {ddelta_dn(p), ddelta_dtau(p)}; }

double RegDelta::heaviside(double x) const {
  if (geom_.dim != 1) throw std::invalid_argument("heaviside is 1D-only");
  return std_normal_cdf((x - geom_.xg) / eps_) - std_normal_cdf(-geom_.xg / eps_);
}

double RegDelta::g_eps(Vec2 p, double tf) const {
  return ddelta_dn(p) / (tf + delta(p));
}

double RegDelta::d_eps(Vec2 p, double tf) const {
  return ddelta_dn(p) * (p.x - geom_.xg) / (tf + delta(p));
}

double RegDelta::dd_eps_dtau(Vec2 p, double tf) const {
  const double xi = p.x - geom_.xg;
  const double num = ddelta_dn(p);
  const double den = tf + delta(p);
  const double dnum = dnormal_profile(p.x) * dwindow(p.y);
  const double dden = normal_profile(p.x) * dwindow(p.y);
  return xi * (dnum * den - num * dden) / (den * den);
}

}  // namespace faultflow
