#include "mobw/mat4.hpp"

#include <cmath>
#include <utility>

namespace mobw {

Mat4 inverse(Mat4 A, double* det) {
  Mat4 inv = Mat4::identity();
  double d = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    double best = std::fabs(A(col, col));
    for (int i = col + 1; i < 4; ++i) {
      const double v = std::fabs(A(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("Mat4::inverse: singular matrix");
    if (piv != col) {
      for (int j = 0; j < 4; ++j) {
        std::swap(A(col, j), A(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
      d = -d;
    }
    const double pivval = A(col, col);
    d *= pivval;
    for (int j = 0; j < 4; ++j) {
      A(col, j) /= pivval;
      inv(col, j) /= pivval;
    }
    for (int i = 0; i < 4; ++i) {
      if (i == col) continue;
      const double f = A(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        A(i, j) -= f * A(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  if (det) *det = d;
  return inv;
}

double determinant(const Mat4& A) {
  Mat4 U = A;
  double d = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    double best = std::fabs(U(col, col));
    for (int i = col + 1; i < 4; ++i) {
      const double v = std::fabs(U(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < 4; ++j) std::swap(U(col, j), U(piv, j));
      d = -d;
    }
    d *= U(col, col);
    for (int i = col + 1; i < 4; ++i) {
      const double f = U(i, col) / U(col, col);
      for (int j = col; j < 4; ++j) U(i, j) -= f * U(col, j);
    }
  }
  return d;
}

double condition_number(const Mat4& A) {
  auto norm1 = [](const Mat4& M) {
    double best = 0.0;
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += std::fabs(M(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  return norm1(A) * norm1(inverse(A));
}

}  // namespace mobw
