#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace sdmac {

using Vector = std::vector<double>;

// BLAS-1 style helpers. Kept serial on purpose: GMRES iteration counts must
// not depend on the thread count, and these are never the bottleneck here.

inline double dot(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

inline void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(double a, Vector& x) {
  for (double& v : x) v *= a;
}

inline double norm_inf(const Vector& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace sdmac
