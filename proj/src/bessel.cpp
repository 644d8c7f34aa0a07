#include "qflat/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qflat {

namespace {

using cplx = std::complex<double>;

constexpr double kSeriesRadius = 2.0;
constexpr int kSeriesTerms = 40;
constexpr double kStep = 0.1;
constexpr int kSteps = 66;

void check_half_plane(cplx z) {
  if (!(z.real() > 0.0)) throw std::domain_error("Bessel K requires Re z > 0");
}

// Ascending series around z = 0.
cplx k0_series(cplx z) {
  const cplx t = 0.25 * z * z;
  cplx term = 1.0;
  cplx i0 = 1.0;
  cplx harmonic_sum = 0.0;
  double h = 0.0;
  for (int k = 1; k < kSeriesTerms; ++k) {
    term *= t / static_cast<double>(k * k);
    h += 1.0 / k;
    i0 += term;
    harmonic_sum += h * term;
  }
  return -(std::log(0.5 * z) + std::numbers::egamma) * i0 + harmonic_sum;
}

cplx k1_series(cplx z) {
  const cplx t = 0.25 * z * z;
  cplx term = 1.0;  // t^k / (k! (k+1)!)
  cplx i1_sum = 1.0;
  double psi_k1 = -std::numbers::egamma;  // psi(k + 1)
  double psi_k2 = 1.0 - std::numbers::egamma;  // psi(k + 2)
  cplx digamma_sum = psi_k1 + psi_k2;
  for (int k = 1; k < kSeriesTerms; ++k) {
    term *= t / static_cast<double>(k * (k + 1));
    psi_k1 += 1.0 / k;
    psi_k2 += 1.0 / (k + 1);
    i1_sum += term;
    digamma_sum += (psi_k1 + psi_k2) * term;
  }
  const cplx i1 = 0.5 * z * i1_sum;
  return 1.0 / z + std::log(0.5 * z) * i1 - 0.25 * z * digamma_sum;
}

// K_nu(z) = sqrt(pi / 2z) e^-z / Gamma(nu + 1/2) * int_0^inf e^-t t^(nu - 1/2) (1 + t/2z)^(nu - 1/2) dt
// with t = u^2, evaluated by the trapezoid rule on the even extension in u.
cplx k0_integral(cplx z) {
  const cplx inv2z = 0.5 / z;
  cplx acc = 0.5;
  for (int k = 1; k <= kSteps; ++k) {
    const double u = k * kStep;
    acc += std::exp(-u * u) / std::sqrt(1.0 + u * u * inv2z);
  }
  return 2.0 * kStep * acc * std::exp(-z) / std::sqrt(2.0 * z);
}

cplx k1_integral(cplx z) {
  const cplx inv2z = 0.5 / z;
  cplx acc = 0.0;
  for (int k = 1; k <= kSteps; ++k) {
    const double u = k * kStep;
    acc += std::exp(-u * u) * u * u * std::sqrt(1.0 + u * u * inv2z);
  }
  return 4.0 * kStep * acc * std::exp(-z) / std::sqrt(2.0 * z);
}

}  // namespace

std::complex<double> bessel_k0(std::complex<double> z) {
  check_half_plane(z);
  return std::abs(z) <= kSeriesRadius ? k0_series(z) : k0_integral(z);
}

std::complex<double> bessel_k1(std::complex<double> z) {
  check_half_plane(z);
  return std::abs(z) <= kSeriesRadius ? k1_series(z) : k1_integral(z);
}

}  // namespace qflat
