#include "qflat/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qflat/quadrature.hpp"

namespace qflat {

namespace {

using cplx = std::complex<double>;

constexpr double kDecayExponent = 44.0;
constexpr std::size_t kMaxPanels = 40000;

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

double h_kernel(double u) {
  if (std::abs(u) < 0.1) {
    const double u2 = u * u;
    return -1.0 / 3.0 + u2 * (1.0 / 30.0 + u2 * (-1.0 / 840.0 + u2 * (1.0 / 45360.0)));
  }
  return (u * std::cos(u) - std::sin(u)) / (u * u * u);
}

std::vector<double> panels(double m, cplx tau, double r) {
  const double re = tau.real();
  if (!(re > 0.0)) throw std::domain_error("radial integral requires Re tau > 0");
  const double w_max = kDecayExponent / re;
  const double p_max = std::max(w_max > m ? std::sqrt(w_max * w_max - m * m) : 0.0, 1.0 / re);
  double width = 2.0 / re;
  if (r > 0.0) width = std::min(width, std::numbers::pi / r);
  if (std::abs(tau.imag()) > 0.0) width = std::min(width, std::numbers::pi / std::abs(tau.imag()));
  std::size_t count = static_cast<std::size_t>(std::ceil(p_max / width));
  count = std::clamp<std::size_t>(count, 4, kMaxPanels);
  std::vector<double> breaks(count + 1);
  for (std::size_t i = 0; i <= count; ++i) breaks[i] = p_max * static_cast<double>(i) / count;
  return breaks;
}

RealIntegrand integrand(RadialKernel kernel, double m, cplx tau, double r) {
  return [=](double p) -> cplx {
    const double w = std::sqrt(p * p + m * m);
    const cplx e = std::exp(-w * tau);
    switch (kernel) {
      case RadialKernel::propagator:
        return p * p * sinc(p * r) * e / w;
      case RadialKernel::time_derivative:
        return p * p * sinc(p * r) * e;
      case RadialKernel::spatial_derivative:
        break;
    }
    const double p2 = p * p;
    return p2 * p2 * h_kernel(p * r) * e / w;
  };
}

constexpr double kNorm = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

}  // namespace

std::complex<double> radial_integral(RadialKernel kernel, double m, std::complex<double> tau,
                                     double r) {
  const auto res = integrate_adaptive(integrand(kernel, m, tau, r), panels(m, tau, r), 1e-13);
  return kNorm * res.value;
}

std::complex<double> radial_integral_fixed(RadialKernel kernel, double m, std::complex<double> tau,
                                           double r, int order) {
  const auto res = integrate_composite_gl(integrand(kernel, m, tau, r), panels(m, tau, r), order);
  return kNorm * res.value;
}

}  // namespace qflat
