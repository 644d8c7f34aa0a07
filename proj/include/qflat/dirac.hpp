#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qflat/lattice.hpp"
#include "qflat/reduce.hpp"
#include "qflat/scalar.hpp"

namespace qflat {

// Momentum symbol of the forward/backward Dirac operator,
//   S(p) = [[a, b], [-b^dagger, abar]], a = i conj(q0) + m, abar = conj(a), b = sigma.q.
struct DiracSymbol {
  SpinorMatrix matrix;
  Mat2 a;
  Mat2 b;
};

DiracSymbol dirac_symbol(const MomentumPoint& p, double m_dirac, const LatticeParams& params);
DiracSymbol dirac_symbol_from_q(const std::array<cplx, 4>& q, double m_dirac, double delta);

// Blocks of K = a abar + b b^dagger = kappa - 2 E with E = w.sigma,
// w = (Im q2 conj q3, Im q3 conj q1, Im q1 conj q2) and rho = |w|.
struct KappaRho {
  double kappa = 0.0;
  double rho = 0.0;
  std::array<double, 3> w{};
  Mat2 K;          // a abar + b b^dagger
  Mat2 K_partner;  // a abar + b^dagger b = adj K
  double det() const { return kappa * kappa - 4.0 * rho * rho; }
};

KappaRho kappa_rho(const MomentumPoint& p, double m_dirac, const LatticeParams& params);
KappaRho kappa_rho_from_q(const std::array<cplx, 4>& q, double m_dirac, double delta);

// S^-1 = T diag(K_partner, K) / (kappa^2 - 4 rho^2), T = [[abar, -b], [b^dagger, a]].
SpinorMatrix momentum_inverse_analytic(const MomentumPoint& p, double m_dirac,
                                       const LatticeParams& params);
// LU solve of the 4x4 symbol.
SpinorMatrix momentum_inverse_direct(const MomentumPoint& p, double m_dirac,
                                     const LatticeParams& params);

enum class DiracMethod { direct, accelerated };

struct SpinorSumResult {
  SpinorMatrix value;
  std::uint64_t terms = 0;
};

// R(x) = (2 pi)^-4 sum_p exp(i p x) S^-1(p) eta^4.
SpinorSumResult dirac_sum_direct(const LatticeParams& params, double m_dirac, const LatticeSite& x,
                                 Exec exec = Exec::parallel);
// Same value with the p0 sum done in closed form per spatial momentum.
SpinorSumResult dirac_sum_accelerated(const LatticeParams& params, double m_dirac,
                                      const LatticeSite& x, Exec exec = Exec::parallel);

SpinorMatrix lattice_dirac_propagator(const LatticeParams& params, double m_dirac,
                                      const LatticeSite& x,
                                      DiracMethod method = DiracMethod::accelerated);

// sum_mu gamma_mu nabla_mu + m with forward differences on spinor components 0, 1
// and backward differences on 2, 3. Row index = 4 * site + spinor.
Eigen::MatrixXcd dense_dirac_operator(const LatticeParams& params, double m_dirac);
// delta^-4 times the inverse; throws std::length_error above kDenseRowLimit rows.
Eigen::MatrixXcd dense_dirac_oracle(const LatticeParams& params, double m_dirac);
// 4x4 block of the oracle for separation x = y1 - y2.
SpinorMatrix dense_dirac_block(const Eigen::MatrixXcd& oracle, const LatticeSite& x,
                               const LatticeParams& params);

// Continuum R(x) = (-gamma.d + m) S_m(x) by radial quadrature; requires x0 != 0.
SpinorMatrix continuum_dirac_schwinger(double m_dirac, const Vec4& x);
// Closed form in terms of K0, K1; y0 may be complex with Re y0 != 0 or |yvec| > 0.
SpinorMatrix dirac_two_point_closed(double m_dirac, cplx y0, const std::array<double, 3>& yvec);

struct DiracSample {
  int M = 0;
  int N = 0;
  Vec4 x{};
  SpinorMatrix lattice;
  SpinorMatrix continuum;
  double abs_err = 0.0;  // max entry |lattice - continuum|
  double rel_err = 0.0;  // abs_err / max entry |continuum|
};

std::vector<DiracSample> converge_dirac(double m_dirac, const Vec4& x, const std::vector<int>& M_list,
                                        const std::vector<int>& N_list = {});

enum class DiscretizationScheme { forward_backward, central };
DiscretizationScheme parse_scheme(const std::string& name);
std::string scheme_name(DiscretizationScheme scheme);

// Momentum symbol of the given scheme.
SpinorMatrix scheme_symbol(DiscretizationScheme scheme, const MomentumPoint& p, double m_dirac,
                           const LatticeParams& params);

struct DoublingReport {
  int count = 0;
  std::vector<MomentumPoint> zero_modes;
};

// Dual momenta where the smallest singular value of the symbol is below 1e-8 / delta.
DoublingReport doubling_scan(DiscretizationScheme scheme, const LatticeParams& params,
                             double m_dirac = 0.0);
int doubling_count(DiscretizationScheme scheme, const LatticeParams& params, double m_dirac = 0.0);

}  // namespace qflat
