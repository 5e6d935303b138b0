#pragma once

#include "mixflow/types.hpp"

namespace mixflow {

// Static description of one vehicle class.
struct VehicleClassSpec {
  double length = 0;  // m
  double width = 0;   // m
  double gamma = 0;   // pressure exponent
  double tau = 0;     // relaxation time, s
  double v_max = 0;   // free-flow speed, m/s
  double ao_max = 0;  // area occupancy at which the class jams, in (0, 1]

  double plan_area() const { return length * width; }
};

void validate(const VehicleClassSpec& spec);

// Composition of the stream: fraction delta of the total density is
// motorcycles, the rest cars, on a road of the given width.
struct MixSpec {
  double delta = 0.5;
  double road_width = 0;
};

void validate(const MixSpec& mix);

// Class parameters plus the cached occupancy factors psi_i, which convert a
// class density into the area occupancy both classes share.
struct ModelParams {
  PerClass<VehicleClassSpec> cls;
  MixSpec mix;
  PerClass<double> psi;

  static ModelParams make(const PerClass<VehicleClassSpec>& cls, const MixSpec& mix);
};

PerClass<double> split_density(double rho_total, const MixSpec& mix);

double occupancy_factor(VehicleClass c, const PerClass<VehicleClassSpec>& cls,
                        const MixSpec& mix);

double area_occupancy(double rho_i, double psi_i);

double pressure(double rho_i, double psi_i, double gamma_i);

// d pressure / d rho_i at fixed composition.
double pressure_derivative(double rho_i, double psi_i, double gamma_i);

double equilibrium_velocity(VehicleClass c, double rho_i, const ModelParams& p);

// Sensitivities of the equilibrium speed, all evaluated from a total density
// split by the mix. The delta-derivatives hold the class density fixed.
struct EquilibriumDiagnostics {
  PerClass<double> dve_dao;
  PerClass<double> dve_ddelta;
  PerClass<double> dve_drho;
};

EquilibriumDiagnostics equilibrium_diagnostics(double rho_total, const ModelParams& p);

struct PrimitiveCell {
  PerClass<double> rho;
  PerClass<double> v;
};

// Conserved pair per class: density and X = rho * (v + p(rho)).
struct ConservedCell {
  PerClass<double> rho;
  PerClass<double> x;
};

Vec4 to_vec4(const ConservedCell& u);
ConservedCell cell_from_vec4(const Vec4& u);

ConservedCell primitive_to_conserved(const PrimitiveCell& w, const ModelParams& p);

// Inverse map. A class below the vacuum density reports v = 0; a velocity
// more negative than the rounding slack is a nonphysical state.
PrimitiveCell conserved_to_primitive(const ConservedCell& u, const ModelParams& p);

// Relaxation toward the equilibrium speed; density components are zero.
Vec4 relaxation_source(const PrimitiveCell& w, const ModelParams& p);

}  // namespace mixflow
