#pragma once

#include <complex>

namespace qflat {

// Modified Bessel functions of the second kind on Re z > 0.
// Throws std::domain_error when Re z <= 0.
std::complex<double> bessel_k0(std::complex<double> z);
std::complex<double> bessel_k1(std::complex<double> z);

}  // namespace qflat
