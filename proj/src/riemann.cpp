#include "mixflow/riemann.hpp"

#include <cmath>

namespace mixflow {

namespace {

// Jacobian block of one class in conserved variables, written in terms of
// the transport speed u = v + p. Shared by the pointwise Jacobian and the
// interface average so that the two coincide at equal states to rounding.
std::array<double, 4> class_block(double u, double p, double gamma) {
  return {-(1 + gamma) * p, 1, -(gamma * p * u + u * u), 2 * u - p};
}

int rho_slot(VehicleClass c) { return c == VehicleClass::motorcycle ? 0 : 2; }

// Eigenvalues of one class at a cell state, vacuum reporting zeros.
std::array<double, 2> side_lambdas(VehicleClass c, const ConservedCell& cell,
                                   const ModelParams& p) {
  double rho = cell.rho[c];
  if (rho < kVacuumDensity) return {0, 0};
  double gamma = p.cls[c].gamma;
  double pr = pressure(rho, p.psi[c], gamma);
  double v = cell.x[c] / rho - pr;
  return {v - gamma * pr, v};
}

Vec4 embed(VehicleClass c, double rho_part, double x_part) {
  Vec4 out{};
  out[static_cast<size_t>(rho_slot(c))] = rho_part;
  out[static_cast<size_t>(rho_slot(c) + 1)] = x_part;
  return out;
}

}  // namespace

EntropyFixMode entropy_fix_mode_from_string(const std::string& s) {
  if (s == "harten-hyman") return EntropyFixMode::harten_hyman;
  if (s == "spread-only") return EntropyFixMode::spread_only;
  if (s == "none") return EntropyFixMode::none;
  throw ConfigError("unknown entropy fix mode '" + s +
                    "' (expected harten-hyman, spread-only or none)");
}

std::string to_string(EntropyFixMode m) {
  switch (m) {
    case EntropyFixMode::harten_hyman: return "harten-hyman";
    case EntropyFixMode::spread_only: return "spread-only";
    case EntropyFixMode::none: return "none";
  }
  return "";
}

Vec4 physical_flux(const ConservedCell& u, const ModelParams& p) {
  Vec4 f{};
  for (auto c : kVehicleClasses) {
    double rho = u.rho[c];
    int i = rho_slot(c);
    if (rho < kVacuumDensity) continue;
    double pr = pressure(rho, p.psi[c], p.cls[c].gamma);
    double x = u.x[c];
    f[static_cast<size_t>(i)] = x - rho * pr;
    f[static_cast<size_t>(i + 1)] = x * x / rho - pr * x;
  }
  return f;
}

Matrix4 jacobian(const ConservedCell& u, const ModelParams& p) {
  Matrix4 a;
  for (auto c : kVehicleClasses) {
    double rho = u.rho[c];
    if (rho < kVacuumDensity)
      throw SingularStateError(std::string("flux Jacobian is singular at vacuum density (") +
                               to_string(c) + ")");
    double gamma = p.cls[c].gamma;
    double pr = pressure(rho, p.psi[c], gamma);
    double transport = u.x[c] / rho;
    a.set_block(c == VehicleClass::motorcycle ? 0 : 1, class_block(transport, pr, gamma));
  }
  return a;
}

EigenStructure eigenstructure(const ConservedCell& u, const ModelParams& p) {
  EigenStructure es;
  for (auto c : kVehicleClasses) {
    double rho = u.rho[c];
    if (rho < kVacuumDensity)
      throw SingularStateError(std::string("eigenstructure undefined at vacuum density (") +
                               to_string(c) + ")");
    double gamma = p.cls[c].gamma;
    double pr = pressure(rho, p.psi[c], gamma);
    double transport = u.x[c] / rho;  // v + p
    double v = transport - pr;
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    es.lambda[base] = v - gamma * pr;
    es.lambda[base + 1] = v;
    es.r[base] = embed(c, 1, transport);
    es.r[base + 1] = embed(c, 1, transport + gamma * pr);
  }
  return es;
}

RoeInterfaceData roe_average(const ConservedCell& ul, const ConservedCell& ur,
                             const ModelParams& p) {
  RoeInterfaceData d;
  for (auto c : kVehicleClasses) {
    auto& avg = d.avg[c];
    double rl = ul.rho[c], rr = ur.rho[c];
    if (rl < 0 || rr < 0) throw std::domain_error("class density must be nonnegative");
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    if (rl < kVacuumDensity && rr < kVacuumDensity) {
      avg.vacuum = true;
      d.lambda[base] = d.lambda[base + 1] = 0;
      d.r[base] = embed(c, 1, 0);
      d.r[base + 1] = embed(c, 0, 1);
      continue;
    }
    double al = std::sqrt(rl), ar = std::sqrt(rr);
    double bl = rl < kVacuumDensity ? 0 : ul.x[c] / al;
    double br = rr < kVacuumDensity ? 0 : ur.x[c] / ar;
    double gamma = p.cls[c].gamma;
    avg.alpha = 0.5 * (al + ar);
    avg.beta = 0.5 * (bl + br);
    avg.u = avg.beta / avg.alpha;
    avg.p = pressure(0.5 * (rl + rr), p.psi[c], gamma);
    avg.v = avg.u - avg.p;
    d.lambda[base] = avg.v - gamma * avg.p;
    d.lambda[base + 1] = avg.v;
    d.r[base] = embed(c, 1, avg.u);
    d.r[base + 1] = embed(c, 1, avg.u + gamma * avg.p);
  }
  return d;
}

Matrix4 roe_matrix(const RoeInterfaceData& d, const ModelParams& p) {
  Matrix4 a;
  for (auto c : kVehicleClasses) {
    const auto& avg = d.avg[c];
    double gamma = p.cls[c].gamma;
    // Pressure evaluated at the squared mean root density, the value that
    // makes the block an exact derivative in the averaged variables.
    double ph = avg.vacuum
                    ? 0.0
                    : std::pow(p.psi[c], gamma) * std::pow(avg.alpha, 2 * gamma);
    a.set_block(c == VehicleClass::motorcycle ? 0 : 1, class_block(avg.u, ph, gamma));
  }
  return a;
}

std::array<double, 4> wave_strengths(const ConservedCell& ul, const ConservedCell& ur,
                                     const RoeInterfaceData& d, const ModelParams& p) {
  std::array<double, 4> s{};
  for (auto c : kVehicleClasses) {
    const auto& avg = d.avg[c];
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    if (avg.vacuum) continue;
    double drho = ur.rho[c] - ul.rho[c];
    double dx = ur.x[c] - ul.x[c];
    double gp = p.cls[c].gamma * avg.p;
    if (avg.p <= kDegeneratePressure) {
      s[base + 1] = drho;
      s[base] = 0;
      continue;
    }
    double contact = (dx - avg.u * drho) / gp;
    s[base + 1] = contact;
    s[base] = drho - contact;
  }
  return s;
}

std::array<double, 4> entropy_fixed_eigenvalues(const std::array<double, 4>& lambda_l,
                                                const std::array<double, 4>& lambda_bar,
                                                const std::array<double, 4>& lambda_r,
                                                EntropyFixMode mode) {
  std::array<double, 4> out{};
  for (size_t k = 0; k < 4; ++k) {
    double spread =
        std::max(0.0, std::max(lambda_bar[k] - lambda_l[k], lambda_r[k] - lambda_bar[k]));
    switch (mode) {
      case EntropyFixMode::harten_hyman:
        out[k] = std::max(std::abs(lambda_bar[k]), spread);
        break;
      case EntropyFixMode::spread_only:
        out[k] = spread;
        break;
      case EntropyFixMode::none:
        out[k] = std::abs(lambda_bar[k]);
        break;
    }
  }
  return out;
}

Vec4 numerical_flux(const ConservedCell& ul, const ConservedCell& ur, const ModelParams& p,
                    EntropyFixMode mode) {
  RoeInterfaceData d = roe_average(ul, ur, p);
  auto s = wave_strengths(ul, ur, d, p);

  std::array<double, 4> ll{}, lr{};
  for (auto c : kVehicleClasses) {
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    auto el = side_lambdas(c, ul, p);
    auto er = side_lambdas(c, ur, p);
    ll[base] = el[0];
    ll[base + 1] = el[1];
    lr[base] = er[0];
    lr[base + 1] = er[1];
  }
  auto lt = entropy_fixed_eigenvalues(ll, d.lambda, lr, mode);

  Vec4 f = 0.5 * (physical_flux(ul, p) + physical_flux(ur, p));
  for (auto c : kVehicleClasses) {
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    if (d.avg[c].vacuum) continue;
    for (size_t k = base; k < base + 2; ++k) f = f - (0.5 * s[k] * lt[k]) * d.r[k];
  }
  return f;
}

RoePropertyReport verify_roe_properties(const ConservedCell& ul, const ConservedCell& ur,
                                        const ModelParams& p) {
  RoePropertyReport rep;
  RoeInterfaceData d = roe_average(ul, ur, p);

  rep.lambdas_real = true;
  for (double l : d.lambda) rep.lambdas_real = rep.lambdas_real && std::isfinite(l);

  Matrix4 rmat;
  for (int col = 0; col < 4; ++col)
    for (int row = 0; row < 4; ++row) rmat(row, col) = d.r[static_cast<size_t>(col)][static_cast<size_t>(row)];
  rep.eigenvector_det = std::abs(determinant(rmat));

  for (const auto* u : {&ul, &ur}) {
    Matrix4 diff = roe_matrix(roe_average(*u, *u, p), p) - jacobian(*u, p);
    rep.consistency_error = std::max(rep.consistency_error, max_abs_entry(diff));
  }

  Vec4 du = to_vec4(ur) - to_vec4(ul);
  auto s = wave_strengths(ul, ur, d, p);
  Vec4 rebuilt{};
  for (size_t k = 0; k < 4; ++k) rebuilt = rebuilt + s[k] * d.r[k];
  rep.reconstruction_error = inf_norm(du - rebuilt);

  auto residual_at = [&](const ConservedCell& a, const ConservedCell& b) {
    Vec4 df = physical_flux(b, p) - physical_flux(a, p);
    Vec4 jump = to_vec4(b) - to_vec4(a);
    Matrix4 abar = roe_matrix(roe_average(a, b, p), p);
    double raw = inf_norm(df - abar.apply(jump));
    double denom = inf_norm(jump);
    return std::array<double, 2>{raw, denom > 0 ? raw / denom : 0};
  };

  auto full = residual_at(ul, ur);
  rep.conservation_residual = full[0];
  rep.normalized_residual = full[1];

  auto scaled_pair = [&](double scale) {
    Vec4 mid = 0.5 * (to_vec4(ul) + to_vec4(ur));
    Vec4 half = (0.5 * scale) * du;
    return std::array<ConservedCell, 2>{cell_from_vec4(mid - half), cell_from_vec4(mid + half)};
  };
  auto p2 = scaled_pair(0.5);
  auto p4 = scaled_pair(0.25);
  double n2 = residual_at(p2[0], p2[1])[1];
  double n4 = residual_at(p4[0], p4[1])[1];
  rep.halving_ratio = n4 > 0 ? n2 / n4 : 0;

  return rep;
}

}  // namespace mixflow
