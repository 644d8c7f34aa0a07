#include "qflat/reference.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace qflat::reference {

namespace {

cplx plane_wave(const LatticeParams& params, const std::array<int, 4>& k, const LatticeSite& x) {
  double phase = 0.0;
  for (int mu = 0; mu < 4; ++mu) phase += k[mu] * params.eta * x.j[mu] * params.delta;
  return std::polar(1.0, phase);
}

double measure(const LatticeParams& params) { return std::pow(params.eta / (2.0 * std::numbers::pi), 4); }

}  // namespace

cplx scalar_propagator(const LatticeParams& params, double m, const LatticeSite& x) {
  cplx acc = 0.0;
  for (std::uint64_t i = 0; i < params.volume(); ++i) {
    const MomentumPoint p = momentum_from_index(i, params);
    double sym = m * m;
    for (int mu = 0; mu < 4; ++mu) {
      const double c = 1.0 - std::cos(params.theta(p.k[mu]));
      sym += 2.0 * c / (params.delta * params.delta);
    }
    acc += plane_wave(params, p.k, x) / sym;
  }
  return acc * measure(params);
}

SpinorMatrix dirac_propagator(const LatticeParams& params, double m_dirac, const LatticeSite& x) {
  SpinorMatrix acc = SpinorMatrix::Zero();
  const cplx I(0.0, 1.0);
  for (std::uint64_t i = 0; i < params.volume(); ++i) {
    const MomentumPoint p = momentum_from_index(i, params);
    // Plane-wave eigenvalues of the forward and backward differences.
    SpinorMatrix S = m_dirac * SpinorMatrix::Identity();
    for (int mu = 0; mu < 4; ++mu) {
      const cplx e = std::exp(I * params.theta(p.k[mu]));
      const cplx fwd = (e - 1.0) / params.delta;
      const cplx bwd = (1.0 - 1.0 / e) / params.delta;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) S(a, b) += gamma_euclidean(mu)(a, b) * (b < 2 ? fwd : bwd);
      }
    }
    acc += plane_wave(params, p.k, x) * Eigen::PartialPivLU<SpinorMatrix>(S).solve(SpinorMatrix::Identity());
  }
  return acc * measure(params);
}

}  // namespace qflat::reference
