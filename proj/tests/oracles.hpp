#pragma once

// Test-only reference computations, independent of the library's
// quadrature and transform code paths.

#include <cmath>
#include <functional>

namespace lfjohn::test {

namespace detail {
inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                       double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson with Richardson correction on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_depth = 40) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Sum of adaptive Simpson over `pieces` equal sub-intervals, which keeps
/// the first sampling from missing narrow features.
inline double adaptive_simpson_pieces(const std::function<double(double)>& f, double a, double b,
                                      int pieces, double tol) {
  double sum = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) sum += adaptive_simpson(f, a + i * w, a + (i + 1) * w, tol / pieces);
  return sum;
}

}  // namespace lfjohn::test
