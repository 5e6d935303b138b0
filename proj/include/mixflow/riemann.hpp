#pragma once

#include "mixflow/model.hpp"

namespace mixflow {

enum class EntropyFixMode { harten_hyman, spread_only, none };

EntropyFixMode entropy_fix_mode_from_string(const std::string& s);
std::string to_string(EntropyFixMode m);

Vec4 physical_flux(const ConservedCell& u, const ModelParams& p);

// Flux Jacobian in conserved variables. Vacuum densities make the map
// singular, which is an error here (the interface solver handles vacuum
// separately).
Matrix4 jacobian(const ConservedCell& u, const ModelParams& p);

// Eigenvalues and right eigenvectors of the Jacobian at a state, in wave
// order (per class: acoustic lambda = v - gamma*p, then contact lambda = v).
struct EigenStructure {
  std::array<double, 4> lambda;
  std::array<Vec4, 4> r;
};

EigenStructure eigenstructure(const ConservedCell& u, const ModelParams& p);

// Interface averages for one class, built from the square-root change of
// variables (alpha, beta) = (sqrt(rho), X/sqrt(rho)).
struct RoeClassAverage {
  double alpha = 0;  // mean sqrt(rho)
  double beta = 0;   // mean X/sqrt(rho)
  double u = 0;      // averaged v + p
  double p = 0;      // pressure at the arithmetic-mean density
  double v = 0;      // u - p
  bool vacuum = false;
};

struct RoeInterfaceData {
  PerClass<RoeClassAverage> avg;
  std::array<double, 4> lambda;
  std::array<Vec4, 4> r;
};

RoeInterfaceData roe_average(const ConservedCell& ul, const ConservedCell& ur,
                             const ModelParams& p);

// Closed-form averaged Jacobian consistent with the flux difference.
Matrix4 roe_matrix(const RoeInterfaceData& d, const ModelParams& p);

// Coordinates of the jump ur - ul in the averaged eigenvector basis.
std::array<double, 4> wave_strengths(const ConservedCell& ul, const ConservedCell& ur,
                                     const RoeInterfaceData& d, const ModelParams& p);

// |lambda| with the transonic spread delta = max(0, lbar-ll, lr-lbar)
// applied per the selected mode.
std::array<double, 4> entropy_fixed_eigenvalues(const std::array<double, 4>& lambda_l,
                                                const std::array<double, 4>& lambda_bar,
                                                const std::array<double, 4>& lambda_r,
                                                EntropyFixMode mode);

Vec4 numerical_flux(const ConservedCell& ul, const ConservedCell& ur, const ModelParams& p,
                    EntropyFixMode mode);

// Diagnostic bundle for the linearization at one pair of states:
//  - real averaged spectrum and the eigenvector-matrix determinant,
//  - consistency with the Jacobian at coincident states,
//  - jump reconstruction from the wave decomposition,
//  - flux-difference residual, raw and jump-normalized, plus the factor by
//    which the normalized residual shrinks when the jump is halved (the raw
//    residual is cubic in the jump; normalized, quadratic, so the factor
//    approaches 4).
struct RoePropertyReport {
  bool lambdas_real = false;
  double eigenvector_det = 0;
  double consistency_error = 0;
  double reconstruction_error = 0;
  double conservation_residual = 0;
  double normalized_residual = 0;
  double halving_ratio = 0;
};

RoePropertyReport verify_roe_properties(const ConservedCell& ul, const ConservedCell& ur,
                                        const ModelParams& p);

}  // namespace mixflow
