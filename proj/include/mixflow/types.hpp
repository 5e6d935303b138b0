#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mixflow {

enum class VehicleClass { motorcycle, car };

inline constexpr std::array<VehicleClass, 2> kVehicleClasses{VehicleClass::motorcycle,
                                                             VehicleClass::car};

inline const char* to_string(VehicleClass c) {
  return c == VehicleClass::motorcycle ? "motorcycle" : "car";
}

// Pair of per-class values addressable by VehicleClass.
template <typename T>
struct PerClass {
  T motorcycle{};
  T car{};

  T& operator[](VehicleClass c) { return c == VehicleClass::motorcycle ? motorcycle : car; }
  const T& operator[](VehicleClass c) const {
    return c == VehicleClass::motorcycle ? motorcycle : car;
  }
};

// State/flux vectors use the fixed component order
// (rho_m, X_m, rho_c, X_c); wave-indexed arrays use the order
// (m acoustic, m contact, c acoustic, c contact).
using Vec4 = std::array<double, 4>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator-(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Vec4 operator*(double s, const Vec4& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

inline double inf_norm(const Vec4& a) {
  return std::max(std::max(std::abs(a[0]), std::abs(a[1])),
                  std::max(std::abs(a[2]), std::abs(a[3])));
}

// Dense row-major 4x4; the class-block structure is imposed by the builders,
// off-diagonal blocks stay exactly zero.
struct Matrix4 {
  std::array<double, 16> e{};

  double& operator()(int r, int c) { return e[static_cast<size_t>(4 * r + c)]; }
  double operator()(int r, int c) const { return e[static_cast<size_t>(4 * r + c)]; }

  Vec4 apply(const Vec4& v) const {
    Vec4 out{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out[static_cast<size_t>(r)] += (*this)(r, c) * v[static_cast<size_t>(c)];
    return out;
  }

  // Places a 2x2 block at rows/cols {2i, 2i+1}, i = 0 motorcycles, 1 cars.
  void set_block(int i, const std::array<double, 4>& b) {
    (*this)(2 * i, 2 * i) = b[0];
    (*this)(2 * i, 2 * i + 1) = b[1];
    (*this)(2 * i + 1, 2 * i) = b[2];
    (*this)(2 * i + 1, 2 * i + 1) = b[3];
  }
};

inline Matrix4 operator-(const Matrix4& a, const Matrix4& b) {
  Matrix4 out;
  for (size_t i = 0; i < 16; ++i) out.e[i] = a.e[i] - b.e[i];
  return out;
}

inline double max_abs_entry(const Matrix4& m) {
  double v = 0;
  for (double x : m.e) v = std::max(v, std::abs(x));
  return v;
}

double determinant(const Matrix4& m);

// Thresholds shared across modules.
inline constexpr double kVacuumDensity = 1e-10;      // below this a class is treated as absent
inline constexpr double kNegativeVelocityTol = 1e-9; // rounding slack before v<0 is an error
inline constexpr double kDegeneratePressure = 1e-12; // averaged pressure treated as zero

struct InvalidMixError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonphysicalStateError : std::runtime_error {
  int cell = -1;
  explicit NonphysicalStateError(const std::string& what, int cell_index = -1)
      : std::runtime_error(what), cell(cell_index) {}
};

struct SingularStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepRejectedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mixflow
