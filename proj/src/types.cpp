#include "mixflow/types.hpp"

namespace mixflow {

double determinant(const Matrix4& m) {
  // In-place LU with partial pivoting; the product of pivots carries the sign.
  std::array<double, 16> a = m.e;
  double det = 1;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[static_cast<size_t>(4 * r + col)]) >
          std::abs(a[static_cast<size_t>(4 * pivot + col)]))
        pivot = r;
    if (pivot != col) {
      for (int c = 0; c < 4; ++c)
        std::swap(a[static_cast<size_t>(4 * pivot + c)], a[static_cast<size_t>(4 * col + c)]);
      det = -det;
    }
    double p = a[static_cast<size_t>(5 * col)];
    if (p == 0) return 0;
    det *= p;
    for (int r = col + 1; r < 4; ++r) {
      double f = a[static_cast<size_t>(4 * r + col)] / p;
      for (int c = col; c < 4; ++c)
        a[static_cast<size_t>(4 * r + c)] -= f * a[static_cast<size_t>(4 * col + c)];
    }
  }
  return det;
}

}  // namespace mixflow
