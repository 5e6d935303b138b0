#include "mixflow/model.hpp"

#include <cmath>

namespace mixflow {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

void validate(const VehicleClassSpec& spec) {
  if (!finite_positive(spec.length)) throw std::invalid_argument("vehicle length must be positive");
  if (!finite_positive(spec.width)) throw std::invalid_argument("vehicle width must be positive");
  if (!finite_positive(spec.gamma)) throw std::invalid_argument("pressure exponent must be positive");
  if (!finite_positive(spec.tau)) throw std::invalid_argument("relaxation time must be positive");
  if (!finite_positive(spec.v_max)) throw std::invalid_argument("free-flow speed must be positive");
  if (!std::isfinite(spec.ao_max) || spec.ao_max <= 0 || spec.ao_max > 1)
    throw std::invalid_argument("jam occupancy must lie in (0, 1]");
}

void validate(const MixSpec& mix) {
  if (!std::isfinite(mix.delta) || mix.delta <= 0 || mix.delta >= 1)
    throw InvalidMixError("motorcycle fraction must lie strictly between 0 and 1");
  if (!finite_positive(mix.road_width))
    throw InvalidMixError("road width must be positive");
}

ModelParams ModelParams::make(const PerClass<VehicleClassSpec>& cls, const MixSpec& mix) {
  validate(cls.motorcycle);
  validate(cls.car);
  validate(mix);
  ModelParams p{cls, mix, {}};
  for (auto c : kVehicleClasses) p.psi[c] = occupancy_factor(c, cls, mix);
  return p;
}

PerClass<double> split_density(double rho_total, const MixSpec& mix) {
  if (!std::isfinite(rho_total) || rho_total < 0)
    throw std::domain_error("total density must be nonnegative");
  return {mix.delta * rho_total, (1 - mix.delta) * rho_total};
}

double occupancy_factor(VehicleClass c, const PerClass<VehicleClassSpec>& cls,
                        const MixSpec& mix) {
  // Mixed-stream plan area per unit total density, assigned to each class in
  // proportion to its share so that psi_m*rho_m == psi_c*rho_c.
  double area = cls.car.plan_area() * (1 - mix.delta) + cls.motorcycle.plan_area() * mix.delta;
  double share = c == VehicleClass::motorcycle ? mix.delta : 1 - mix.delta;
  return area / (mix.road_width * share);
}

double area_occupancy(double rho_i, double psi_i) {
  if (!std::isfinite(rho_i) || rho_i < 0) throw std::domain_error("class density must be nonnegative");
  return psi_i * rho_i;
}

double pressure(double rho_i, double psi_i, double gamma_i) {
  return std::pow(area_occupancy(rho_i, psi_i), gamma_i);
}

double pressure_derivative(double rho_i, double psi_i, double gamma_i) {
  double ao = area_occupancy(rho_i, psi_i);
  return gamma_i * psi_i * std::pow(ao, gamma_i - 1);
}

double equilibrium_velocity(VehicleClass c, double rho_i, const ModelParams& p) {
  double ao = area_occupancy(rho_i, p.psi[c]);
  const auto& spec = p.cls[c];
  if (ao >= spec.ao_max) return 0;
  return spec.v_max * (1 - ao / spec.ao_max);
}

EquilibriumDiagnostics equilibrium_diagnostics(double rho_total, const ModelParams& p) {
  EquilibriumDiagnostics d;
  auto rho = split_density(rho_total, p.mix);
  double delta = p.mix.delta;
  double w = p.mix.road_width;
  double area_m = p.cls.motorcycle.plan_area();
  double area_c = p.cls.car.plan_area();
  double mixed_area = area_c * (1 - delta) + area_m * delta;

  for (auto c : kVehicleClasses) {
    d.dve_dao[c] = -p.cls[c].v_max / p.cls[c].ao_max;
    d.dve_drho[c] = d.dve_dao[c] * mixed_area / w;
  }
  // At fixed class density the occupancy shifts only through the share of
  // road each class sees: more motorcycles dilute the per-motorcycle share
  // (occupancy falls, speed rises) and concentrate the cars.
  d.dve_ddelta.motorcycle =
      rho.motorcycle * area_c * p.cls.motorcycle.v_max /
      (p.cls.motorcycle.ao_max * delta * delta * w);
  d.dve_ddelta.car = -rho.car * area_m * p.cls.car.v_max /
                     (p.cls.car.ao_max * (1 - delta) * (1 - delta) * w);
  return d;
}

Vec4 to_vec4(const ConservedCell& u) {
  return {u.rho.motorcycle, u.x.motorcycle, u.rho.car, u.x.car};
}

ConservedCell cell_from_vec4(const Vec4& u) {
  return ConservedCell{{u[0], u[2]}, {u[1], u[3]}};
}

ConservedCell primitive_to_conserved(const PrimitiveCell& w, const ModelParams& p) {
  ConservedCell u;
  for (auto c : kVehicleClasses) {
    u.rho[c] = w.rho[c];
    u.x[c] = w.rho[c] * (w.v[c] + pressure(w.rho[c], p.psi[c], p.cls[c].gamma));
  }
  return u;
}

PrimitiveCell conserved_to_primitive(const ConservedCell& u, const ModelParams& p) {
  PrimitiveCell w;
  for (auto c : kVehicleClasses) {
    double rho = u.rho[c];
    if (!std::isfinite(rho) || !std::isfinite(u.x[c]))
      throw NonphysicalStateError(std::string("non-finite state for class ") + to_string(c));
    if (rho < 0) throw std::domain_error("class density must be nonnegative");
    w.rho[c] = rho;
    if (rho < kVacuumDensity) {
      w.v[c] = 0;
      continue;
    }
    double v = u.x[c] / rho - pressure(rho, p.psi[c], p.cls[c].gamma);
    if (v < -kNegativeVelocityTol)
      throw NonphysicalStateError(std::string("negative velocity for class ") + to_string(c));
    w.v[c] = std::max(v, 0.0);
  }
  return w;
}

Vec4 relaxation_source(const PrimitiveCell& w, const ModelParams& p) {
  Vec4 s{};
  for (auto c : kVehicleClasses) {
    if (w.rho[c] < kVacuumDensity) continue;
    double ve = equilibrium_velocity(c, w.rho[c], p);
    double rate = w.rho[c] * (ve - w.v[c]) / p.cls[c].tau;
    s[c == VehicleClass::motorcycle ? 1 : 3] = rate;
  }
  return s;
}

}  // namespace mixflow
