#pragma once

#include <array>
#include <vector>

#include "qflat/interacting.hpp"
#include "qflat/lattice.hpp"

namespace qflat {

// f(z) = exp(-sum_mu (z_mu - c_mu)^2 / sigma^2) * sum_t coeff_t prod_mu z_mu^e_t,mu.
struct Monomial {
  cplx coeff;
  std::array<int, 4> powers{};
};

class GaussianTestFunction {
 public:
  GaussianTestFunction(std::array<cplx, 4> center, double sigma, std::vector<Monomial> poly = {{1.0, {}}});

  cplx operator()(const std::array<cplx, 4>& z) const;
  // f*(z) = conj f(-conj z).
  GaussianTestFunction reflected_conjugate() const;
  // Largest admissible contour shift.
  double k_max() const { return 10.0 * sigma_; }
  // Sampled sup of |z^p f(z)|, |p| <= 2, over the tube |Im z0| <= k_max; finite by construction.
  double decay_certificate() const;

  const std::array<cplx, 4>& center() const { return center_; }
  double sigma() const { return sigma_; }
  const std::vector<Monomial>& polynomial() const { return poly_; }

 private:
  std::array<cplx, 4> center_;
  double sigma_;
  std::vector<Monomial> poly_;
};

// Default test function for contour checks. Its mass sits away from the light cone of the
// origin, where the kernel varies on the scale of eps, so 64 nodes per axis resolve it:
// center (0, 1.5, 0, 0) with sigma 0.5 for l > 0, center (0, 6, 0, 0) with sigma 1 for l = 0
// (the larger width keeps exp(eps^2 / sigma^2) small up to eps = 2).
GaussianTestFunction default_test_function(double l);

// Two-point kernel F(z0, xvec) evaluated on z0 = x0 - i eps.
enum class KernelKind {
  rho,             // det A^-1/2 for signs (-, +)
  scalar_pair,     // det A^-1/2 * D
  dirac_component  // det A^-1/2 * W_ab
};

struct TwoPointKernel {
  KernelKind kind = KernelKind::scalar_pair;
  ModelParams params;
  int alpha = 0;
  int beta = 0;

  cplx operator()(cplx z0, const std::array<double, 3>& x) const;
  // Kernel whose pairing with f* is the conjugate of this kernel's pairing with f.
  TwoPointKernel hermitian_partner(double* phase) const;
};

struct ContourSpec {
  double epsilon = 1.0;
  int nodes_per_axis = 64;
  double half_width_sigmas = 8.0;
};

// int F(x0 - i eps, xvec) f(x0 - i eps, xvec) d^4x on a Gauss-Legendre tensor grid.
// Throws std::domain_error for eps outside (0, k_max] and AnalyticityError for
// l > 0 with eps <= fundamental length.
cplx eval_two_point_functional(const TwoPointKernel& kernel, const GaussianTestFunction& f,
                               const ContourSpec& spec);

struct InvarianceRow {
  double epsilon = 0.0;
  cplx value;
  double rel_dev = 0.0;  // |value - value(first)| / |value(first)|
};
std::vector<InvarianceRow> contour_invariance_report(const TwoPointKernel& kernel,
                                                     const GaussianTestFunction& f,
                                                     const std::vector<double>& eps_list,
                                                     int nodes_per_axis = 64);

struct ThresholdRow {
  double epsilon = 0.0;
  double max_abs = 0.0;  // grid max of |4 l^4 D(x0 - i eps, x)^2|
  std::array<double, 2> argmax{};  // (x0, |xvec|)
};
// Grid scan of |4 l^4 D^2| with D by radial quadrature.
std::vector<ThresholdRow> threshold_probe(double l, double m, const std::vector<double>& eps_list);

}  // namespace qflat
