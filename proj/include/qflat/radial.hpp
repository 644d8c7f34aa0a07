#pragma once

#include <complex>

namespace qflat {

enum class RadialKernel {
  // p^2 sinc(p r) e^{-w tau} / w
  propagator,
  // p^2 sinc(p r) e^{-w tau}
  time_derivative,
  // p^4 h(p r) e^{-w tau} / w with h(u) = (u cos u - sin u) / u^3
  spatial_derivative,
};

// (4 pi^2)^-1 int_0^inf kernel dp with w = sqrt(p^2 + m^2); requires Re tau > 0.
std::complex<double> radial_integral(RadialKernel kernel, double m, std::complex<double> tau,
                                     double r);

// Same integral on a fixed composite Gauss-Legendre grid, for cross-checks.
std::complex<double> radial_integral_fixed(RadialKernel kernel, double m, std::complex<double> tau,
                                           double r, int order);

}  // namespace qflat
