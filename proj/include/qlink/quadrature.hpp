#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qlink {

// Adaptive Gauss-Kronrod quadrature on a finite interval.  max_depth caps the
// adaptive subdivision; keep it small when the interval is already a narrow
// panel of a cumulative sum, where the relative-error test can otherwise force
// full-depth recursion on near-zero stretches of the integrand.
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-12,
                 unsigned max_depth = 15) {
  if (!(a < b)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b,
                                                                       max_depth, tol);
}

}  // namespace qlink
