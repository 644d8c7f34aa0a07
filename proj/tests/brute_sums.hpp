#pragma once

#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "qflat/lattice.hpp"

namespace qflat::testing {

// Dual-lattice sum eta * sum_k exp(i n delta p_k) / ((2 - 2cos p_k delta)/delta^2 + B^2),
// accumulated term by term in 50-digit arithmetic. The sum cancels down to ~z-^|n|, so
// double precision cannot serve as a reference far from the origin.
inline cplx brute_one_d(cplx B, long n, const LatticeParams& p) {
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_complex_50;
  const cpp_bin_float_50 pi = boost::multiprecision::default_ops::get_constant_pi<cpp_bin_float_50::backend_type>();
  const cpp_bin_float_50 delta = sqrt(pi) / p.M;
  const cpp_bin_float_50 eta = sqrt(pi) / p.N;
  const cpp_complex_50 beta = cpp_complex_50(B.real(), B.imag()) * cpp_complex_50(B.real(), B.imag());
  cpp_complex_50 acc = 0;
  for (int k = -p.L + 1; k <= p.L; ++k) {
    const cpp_bin_float_50 th = pi * k / p.L;
    const cpp_bin_float_50 sym = (2 - 2 * cos(th)) / (delta * delta);
    const cpp_bin_float_50 arg = th * n;
    acc += cpp_complex_50(cos(arg), sin(arg)) / (beta + sym);
  }
  acc *= eta;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// Random B with 0.1 <= |B| <= 10 (log-uniform) and |arg B| <= pi/4.
inline std::vector<cplx> admissible_B(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> logmod(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> arg(-0.25 * std::numbers::pi, 0.25 * std::numbers::pi);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(std::polar(std::exp(logmod(rng)), arg(rng)));
  return out;
}

}  // namespace qflat::testing
