#pragma once

#include <complex>
#include <vector>

#include "mixflow/model.hpp"

namespace mixflow {

// Base state and wavenumber for the linearized system. Velocities default to
// the equilibrium speeds at the given densities.
struct PerturbationSpec {
  double k = 0;
  PerClass<double> rho0;
  PerClass<double> v0;

  static PerturbationSpec at_equilibrium(double rho_total, double k, const ModelParams& p);
};

// Closed-form long-wave criterion for one class: the equilibrium-speed
// response psi * dve/dAO must stay above -dp/drho. margin = lhs - rhs, so
// negative margin means stable.
struct ClassStabilityCondition {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool stable = false;
};

ClassStabilityCondition class_stability_condition(VehicleClass c, double rho_total,
                                                  const ModelParams& p);

// sqrt(R + i*I) with the sign convention that the real part is nonnegative
// and the imaginary part carries the sign of I.
std::complex<double> complex_sqrt_split(double re, double im);

// Characteristic determinant of one class block at growth rate r.
std::complex<double> dispersion_determinant(VehicleClass c, const PerturbationSpec& s,
                                            const ModelParams& p, std::complex<double> r);

// The four growth rates, ordered (m+, m-, c+, c-) by the quadratic branch.
std::array<std::complex<double>, 4> growth_rates(const PerturbationSpec& s,
                                                 const ModelParams& p);

// max |det(r)| / (1 + |B| + |C|) over the four roots, with B, C the
// quadratic coefficients of the owning block.
double growth_rate_residual(const PerturbationSpec& s, const ModelParams& p);

struct StabilityRecord {
  double delta = 0;
  double rho0 = 0;
  double k = 0;
  VehicleClass cls = VehicleClass::motorcycle;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  double max_re_r = 0;
  bool stable = false;  // closed-form verdict
  bool agree = false;   // sign(max_re_r) matches the closed-form verdict
};

// One record per (delta, rho0, k, class). Both verdict routes are evaluated
// for every point; disagreements are flagged, not reconciled.
std::vector<StabilityRecord> stability_map(const std::vector<double>& deltas,
                                           const std::vector<double>& rho0s,
                                           const std::vector<double>& ks,
                                           const PerClass<VehicleClassSpec>& cls,
                                           double road_width);

inline const std::vector<double>& default_wavenumbers() {
  static const std::vector<double> ks{0.01, 0.05, 0.1, 0.5, 1.0};
  return ks;
}

}  // namespace mixflow
