#include "mixflow/stability.hpp"

#include <cmath>

namespace mixflow {

PerturbationSpec PerturbationSpec::at_equilibrium(double rho_total, double k,
                                                  const ModelParams& p) {
  PerturbationSpec s;
  s.k = k;
  s.rho0 = split_density(rho_total, p.mix);
  for (auto c : kVehicleClasses) s.v0[c] = equilibrium_velocity(c, s.rho0[c], p);
  return s;
}

ClassStabilityCondition class_stability_condition(VehicleClass c, double rho_total,
                                                  const ModelParams& p) {
  ClassStabilityCondition out;
  auto rho = split_density(rho_total, p.mix);
  const auto& spec = p.cls[c];
  // Speed response to its own density versus the pressure stiffness: the
  // anticipation term must dominate the relaxation drive.
  out.lhs = p.psi[c] * (-spec.v_max / spec.ao_max);
  out.rhs = -pressure_derivative(rho[c], p.psi[c], spec.gamma);
  out.margin = out.lhs - out.rhs;
  out.stable = out.lhs < out.rhs;
  return out;
}

std::complex<double> complex_sqrt_split(double re, double im) {
  double mag = std::hypot(re, im);
  double sr = std::sqrt((mag + re) / 2);
  double si = std::sqrt((mag - re) / 2);
  return {sr, std::signbit(im) ? -si : si};
}

namespace {

struct Quadratic {
  std::complex<double> b;
  std::complex<double> c;
};

Quadratic class_quadratic(VehicleClass c, const PerturbationSpec& s, const ModelParams& p) {
  const auto& spec = p.cls[c];
  double rho0 = s.rho0[c];
  double v0 = s.v0[c];
  double dp = pressure_derivative(rho0, p.psi[c], spec.gamma);
  double dve = p.psi[c] * (-spec.v_max / spec.ao_max);  // d v_e / d rho at fixed mix
  std::complex<double> ikv(0, s.k * v0);
  std::complex<double> ikrho(0, s.k * rho0);
  // det = (r + ikv)(r + ikv + 1/tau) + ikrho [ (r + ikv) dp - dve/tau ]
  Quadratic q;
  q.b = 2.0 * ikv + 1.0 / spec.tau + ikrho * dp;
  q.c = ikv * (ikv + 1.0 / spec.tau) + ikrho * (ikv * dp - dve / spec.tau);
  return q;
}

std::array<std::complex<double>, 2> solve(const Quadratic& q) {
  std::complex<double> disc = q.b * q.b - 4.0 * q.c;
  std::complex<double> root = complex_sqrt_split(disc.real(), disc.imag());
  return {(-q.b + root) / 2.0, (-q.b - root) / 2.0};
}

}  // namespace

std::complex<double> dispersion_determinant(VehicleClass c, const PerturbationSpec& s,
                                            const ModelParams& p, std::complex<double> r) {
  Quadratic q = class_quadratic(c, s, p);
  return r * r + q.b * r + q.c;
}

std::array<std::complex<double>, 4> growth_rates(const PerturbationSpec& s,
                                                 const ModelParams& p) {
  auto m = solve(class_quadratic(VehicleClass::motorcycle, s, p));
  auto c = solve(class_quadratic(VehicleClass::car, s, p));
  return {m[0], m[1], c[0], c[1]};
}

double growth_rate_residual(const PerturbationSpec& s, const ModelParams& p) {
  double worst = 0;
  for (auto c : kVehicleClasses) {
    Quadratic q = class_quadratic(c, s, p);
    double scale = 1 + std::abs(q.b) + std::abs(q.c);
    for (const auto& r : solve(q))
      worst = std::max(worst, std::abs(r * r + q.b * r + q.c) / scale);
  }
  return worst;
}

std::vector<StabilityRecord> stability_map(const std::vector<double>& deltas,
                                           const std::vector<double>& rho0s,
                                           const std::vector<double>& ks,
                                           const PerClass<VehicleClassSpec>& cls,
                                           double road_width) {
  std::vector<StabilityRecord> out;
  out.reserve(deltas.size() * rho0s.size() * ks.size() * 2);
  for (double delta : deltas) {
    ModelParams p = ModelParams::make(cls, MixSpec{delta, road_width});
    for (double rho0 : rho0s) {
      for (double k : ks) {
        auto spec = PerturbationSpec::at_equilibrium(rho0, k, p);
        auto roots = growth_rates(spec, p);
        for (auto c : kVehicleClasses) {
          size_t base = c == VehicleClass::motorcycle ? 0 : 2;
          StabilityRecord rec;
          rec.delta = delta;
          rec.rho0 = rho0;
          rec.k = k;
          rec.cls = c;
          auto cond = class_stability_condition(c, rho0, p);
          rec.lhs = cond.lhs;
          rec.rhs = cond.rhs;
          rec.margin = cond.margin;
          rec.stable = cond.stable;
          rec.max_re_r = std::max(roots[base].real(), roots[base + 1].real());
          rec.agree = cond.stable == (rec.max_re_r < 0);
          out.push_back(rec);
        }
      }
    }
  }
  return out;
}

}  // namespace mixflow
