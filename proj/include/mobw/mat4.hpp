#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace mobw {

// Dense 4x4 matrix, enough linear algebra for the Fisher-information work.
struct Mat4 {
  std::array<double, 16> a{};

  double& operator()(int i, int j) { return a[i * 4 + j]; }
  double operator()(int i, int j) const { return a[i * 4 + j]; }

  static Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
  }

  double trace() const { return a[0] + a[5] + a[10] + a[15]; }

  bool is_symmetric() const {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (a[i * 4 + j] != a[j * 4 + i]) return false;
      }
    }
    return true;
  }

  double max_abs() const {
    double v = 0.0;
    for (double x : a) v = std::max(v, std::fabs(x));
    return v;
  }
};

inline Mat4 operator*(const Mat4& A, const Mat4& B) {
  Mat4 C;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      const double aik = A(i, k);
      for (int j = 0; j < 4; ++j) C(i, j) += aik * B(k, j);
    }
  }
  return C;
}

// Gauss-Jordan with partial pivoting; also returns the determinant of the
// input through *det when requested. Throws on a singular matrix.
Mat4 inverse(Mat4 A, double* det = nullptr);

double determinant(const Mat4& A);

// 1-norm condition number estimate ||A||_1 * ||A^-1||_1.
double condition_number(const Mat4& A);

}  // namespace mobw
