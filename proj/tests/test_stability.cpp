#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>

#include "mixflow/stability.hpp"
#include "test_helpers.hpp"

using namespace mixflow;
using mixflow::testing::reference_classes;
using mixflow::testing::reference_params;

namespace {

// Independent root finder: the growth rates are the eigenvalues of -M^{-1}N
// for the 2x2 linearized block of one class.
std::array<std::complex<double>, 2> dense_roots(VehicleClass c, const PerturbationSpec& s,
                                                const ModelParams& p) {
  using C = std::complex<double>;
  double rho0 = s.rho0[c];
  double v0 = s.v0[c];
  double dp = pressure_derivative(rho0, p.psi[c], p.cls[c].gamma);
  double dve = p.psi[c] * (-p.cls[c].v_max / p.cls[c].ao_max);
  double tau = p.cls[c].tau;
  C ik(0, s.k);

  Eigen::Matrix2cd m, n;
  m << C(1, 0), C(0, 0), C(dp, 0), C(1, 0);
  n << ik * v0, -ik * rho0, ik * v0 * dp - dve / tau, ik * v0 + 1.0 / tau;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver((-m.inverse() * n).eval());
  std::array<C, 2> out{solver.eigenvalues()[0], solver.eigenvalues()[1]};
  std::sort(out.begin(), out.end(), [](const C& a, const C& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

TEST_CASE("closed-form condition matches frozen values at the reference point") {
  auto p = reference_params(0.2);
  auto cond = class_stability_condition(VehicleClass::motorcycle, 0.2, p);
  CHECK(cond.lhs == doctest::Approx(-28.643137254901962).epsilon(1e-13));
  CHECK(cond.rhs == doctest::Approx(-0.25020332184803457).epsilon(1e-13));
  CHECK(cond.margin == doctest::Approx(cond.lhs - cond.rhs).epsilon(1e-13));
  CHECK(cond.stable);
}

TEST_CASE("constant-pressure limit sends the threshold to zero") {
  // gamma = 0 is outside the validated parameter range but the condition
  // itself is well defined: p' = 0, so the threshold side vanishes.
  auto cls = reference_classes();
  ModelParams p;
  p.cls = cls;
  p.cls.car.gamma = 0.0;
  p.mix = MixSpec{0.2, 12.0};
  for (auto c : kVehicleClasses) p.psi[c] = occupancy_factor(c, p.cls, p.mix);
  auto cond = class_stability_condition(VehicleClass::car, 0.2, p);
  CHECK(cond.rhs == 0.0);
  CHECK(cond.lhs < 0.0);
  CHECK(cond.stable);
}

TEST_CASE("split square root respects the principal branch and conjugation") {
  for (double re : {-3.0, -0.5, 0.0, 0.7, 4.0}) {
    for (double im : {-2.0, -0.1, 0.0, 0.3, 5.0}) {
      auto s = complex_sqrt_split(re, im);
      CHECK(s.real() >= 0.0);
      std::complex<double> sq = s * s;
      CHECK(sq.real() == doctest::Approx(re).epsilon(1e-12));
      CHECK(sq.imag() == doctest::Approx(im).epsilon(1e-12));
      auto conj = complex_sqrt_split(re, -im);
      CHECK(conj.real() == doctest::Approx(s.real()).epsilon(1e-13));
      CHECK(conj.imag() == doctest::Approx(-s.imag()).epsilon(1e-13));
    }
  }
}

TEST_CASE("long-wave limit recovers the relaxation spectrum") {
  auto p = reference_params(0.2);
  auto s = PerturbationSpec::at_equilibrium(0.2, 1e-12, p);
  auto roots = growth_rates(s, p);
  for (auto c : kVehicleClasses) {
    size_t base = c == VehicleClass::motorcycle ? 0 : 2;
    double tau = p.cls[c].tau;
    double near_zero = std::min(std::abs(roots[base]), std::abs(roots[base + 1]));
    double near_tau = std::min(std::abs(roots[base] + 1.0 / tau),
                               std::abs(roots[base + 1] + 1.0 / tau));
    CHECK(near_zero <= 1e-6);
    CHECK(near_tau <= 1e-6);
  }
}

TEST_CASE("growth rates satisfy the dispersion relation and match the dense solver") {
  auto p2 = reference_params(0.2);
  auto p9 = reference_params(0.9);
  for (const auto* p : {&p2, &p9}) {
    for (double rho0 : {0.05, 0.2, 0.5, 0.9}) {
      for (double k : {0.01, 0.1, 0.5, 1.0}) {
        auto s = PerturbationSpec::at_equilibrium(rho0, k, *p);
        CHECK(growth_rate_residual(s, *p) <= 1e-10);

        auto roots = growth_rates(s, *p);
        for (auto c : kVehicleClasses) {
          size_t base = c == VehicleClass::motorcycle ? 0 : 2;
          for (size_t i = 0; i < 2; ++i)
            CHECK(std::abs(dispersion_determinant(c, s, *p, roots[base + i])) <= 1e-8);

          auto dense = dense_roots(c, s, *p);
          std::array<std::complex<double>, 2> mine{roots[base], roots[base + 1]};
          std::sort(mine.begin(), mine.end(),
                    [](const std::complex<double>& a, const std::complex<double>& b) {
                      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
                    });
          for (size_t i = 0; i < 2; ++i) {
            CHECK(mine[i].real() == doctest::Approx(dense[i].real()).epsilon(1e-8));
            CHECK(mine[i].imag() == doctest::Approx(dense[i].imag()).epsilon(1e-8));
          }
        }
      }
    }
  }
}

TEST_CASE("density growth erodes the closed-form margin while the response stays put") {
  auto p = reference_params(0.5);
  double prev_rhs = -1e300;
  double lhs0 = class_stability_condition(VehicleClass::car, 0.1, p).lhs;
  bool first = true;
  for (double rho0 = 0.1; rho0 <= 0.91; rho0 += 0.1) {
    auto cond = class_stability_condition(VehicleClass::car, rho0, p);
    CHECK(cond.lhs == doctest::Approx(lhs0).epsilon(1e-13));
    if (!first) CHECK(cond.rhs < prev_rhs);
    prev_rhs = cond.rhs;
    first = false;
  }
}

TEST_CASE("stability map evaluates both verdict routes at every grid point") {
  auto cls = reference_classes();
  std::vector<double> deltas{0.2, 0.9};
  std::vector<double> rhos;
  for (int i = 0; i < 10; ++i) rhos.push_back(0.05 + (0.9 - 0.05) * i / 9.0);

  auto records = stability_map(deltas, rhos, default_wavenumbers(), cls, 12.0);
  REQUIRE(records.size() == deltas.size() * rhos.size() * default_wavenumbers().size() * 2);

  size_t disagreements = 0;
  for (const auto& r : records) {
    // Closed form: stable across the whole sweep.
    CHECK(r.stable);
    CHECK(r.margin < 0);
    // The agreement flag faithfully compares the two verdicts.
    CHECK(r.agree == (r.stable == (r.max_re_r < 0)));
    if (!r.agree) ++disagreements;
  }
  // The spectral route reports positive growth on this parameter set; the
  // map records the conflict per point instead of hiding either verdict.
  CHECK(disagreements > 0);

  // Single-point map agrees with the direct condition evaluation.
  auto p = reference_params(0.2);
  auto single = stability_map({0.2}, {0.2}, {0.1}, cls, 12.0);
  REQUIRE(single.size() == 2);
  auto cond = class_stability_condition(VehicleClass::motorcycle, 0.2, p);
  CHECK(single[0].lhs == doctest::Approx(cond.lhs).epsilon(1e-13));
  CHECK(single[0].rhs == doctest::Approx(cond.rhs).epsilon(1e-13));
  CHECK(single[0].cls == VehicleClass::motorcycle);
  CHECK(single[1].cls == VehicleClass::car);
}

TEST_CASE("equilibrium perturbation base uses the equilibrium speeds") {
  auto p = reference_params(0.2);
  auto s = PerturbationSpec::at_equilibrium(0.2, 0.1, p);
  CHECK(s.rho0.motorcycle == doctest::Approx(0.04).epsilon(1e-13));
  CHECK(s.rho0.car == doctest::Approx(0.16).epsilon(1e-13));
  CHECK(s.v0.motorcycle == doctest::Approx(9.854274509803922).epsilon(1e-13));
  CHECK(s.v0.car == doctest::Approx(12.148972972972974).epsilon(1e-13));
}
