#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qflat/lattice.hpp"
#include "qflat/reduce.hpp"

namespace qflat {

// Roots z+ z- = 1 of z^2 - (2 + delta^2 beta) z + 1 with |z-| <= |z+|.
struct ResolventRoots {
  cplx z_plus;
  cplx z_minus;
};
ResolventRoots resolvent_roots(cplx beta, double delta);

// Exact periodic sum over the 2L dual momenta:
//   sum_p exp(i n delta p) eta / ((2 - 2 cos p delta) / delta^2 + beta).
// Empty when the roots are too close to the unit circle for the closed form.
std::optional<cplx> periodic_resolvent_sum(cplx beta, long n, const LatticeParams& params);

// The same sum evaluated term by term.
cplx periodic_resolvent_sum_direct(cplx beta, long n, const LatticeParams& params);

// Closed-form 1D sum with beta = B^2 for B != 0, |arg B| <= pi/4.
// Throws std::domain_error outside that sector.
cplx one_d_sum_closed(cplx B, long n, const LatticeParams& params);
// Infinite-lattice form 2 pi delta z+^-|n| / (z+ - z-), which omits periodic images.
cplx one_d_sum_infinite_lattice(cplx B, long n, const LatticeParams& params);

struct SumResult {
  cplx value;
  std::uint64_t terms = 0;
};

// S(x) = (2 pi)^-4 sum_p exp(i p x) / (|q|^2 + m^2) eta^4 over the full dual lattice.
SumResult scalar_sum_direct(const LatticeParams& params, double m, const LatticeSite& x,
                            Exec exec = Exec::parallel);
// Same value with the p0 sum done in closed form: one term per spatial momentum.
SumResult scalar_sum_accelerated(const LatticeParams& params, double m, const LatticeSite& x,
                                 Exec exec = Exec::parallel);

cplx lattice_propagator_direct(const LatticeParams& params, double m, const LatticeSite& x);
cplx lattice_propagator_accel(const LatticeParams& params, double m, const LatticeSite& x);

inline constexpr std::size_t kDenseRowLimit = 4096;

// -Laplacian + m^2 with periodic wrap, in lexicographic site order.
Eigen::MatrixXd dense_scalar_operator(const LatticeParams& params, double m);
// delta^-4 times the full inverse; throws std::length_error above kDenseRowLimit rows.
Eigen::MatrixXd dense_operator_oracle(const LatticeParams& params, double m);
// delta^-4 times the inverse column of the origin, i.e. S(x) for every site x.
Eigen::VectorXd dense_propagator_column(const LatticeParams& params, double m);

// Euclidean continuum propagator by radial momentum quadrature; requires x0 != 0.
cplx continuum_schwinger(double m, const Vec4& x);
// Analytic continuation D(x0 - i eps, xvec) by radial quadrature; requires eps > 0.
cplx wightman_minus(double m, double x0, double eps, const std::array<double, 3>& xvec);

// m K1(m s) / (4 pi^2 s) with s = sqrt(y0^2 + r^2), Re s > 0; requires Re y0 != 0 or r > 0.
cplx scalar_two_point_closed(double m, cplx y0, double r);

// Lattice value at the site nearest x compared against the continuum.
struct PropagatorSample {
  int M = 0;
  int N = 0;
  Vec4 x{};  // lattice site position actually evaluated
  cplx lattice;
  cplx continuum;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

std::vector<PropagatorSample> converge_scalar(double m, const Vec4& x, const std::vector<int>& M_list,
                                              const std::vector<int>& N_list = {});

// S(0) on M = N for each M in the list, by the accelerated sum.
std::vector<double> s_zero_trend(double m, const std::vector<int>& M_list);
// (2 pi)^-4 sum_p [16 |p|^2 / pi^2 + m^2]^-1 eta^4, a lower bound for S(0).
double s_zero_lower_bound(const LatticeParams& params, double m);

}  // namespace qflat
