#include "qflat/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "qflat/bessel.hpp"
#include "qflat/radial.hpp"

namespace qflat {

namespace {

const cplx kI(0.0, 1.0);

Mat2 sigma_dot(const std::array<cplx, 3>& v) {
  return v[0] * pauli(1) + v[1] * pauli(2) + v[2] * pauli(3);
}

std::array<cplx, 3> spatial(const std::array<cplx, 4>& q) { return {q[1], q[2], q[3]}; }

std::array<cplx, 4> q_from_tables(const AxisTables& tab, std::size_t k0, std::size_t k1,
                                  std::size_t k2, std::size_t k3) {
  return {tab.q[k0], tab.q[k1], tab.q[k2], tab.q[k3]};
}

// Spatial data of the symbol shared by a whole p0 line.
struct SpatialBlock {
  Mat2 b;
  Mat2 b_dag;
  double q_norm2 = 0.0;
  double rho = 0.0;
  Mat2 proj_plus;   // (1 + w_hat.sigma) / 2
  Mat2 proj_minus;  // (1 - w_hat.sigma) / 2
};

SpatialBlock spatial_block(const std::array<cplx, 4>& q) {
  SpatialBlock s;
  s.b = sigma_dot(spatial(q));
  s.b_dag = s.b.adjoint();
  s.q_norm2 = std::norm(q[1]) + std::norm(q[2]) + std::norm(q[3]);
  const std::array<double, 3> w = {std::imag(q[2] * std::conj(q[3])), std::imag(q[3] * std::conj(q[1])),
                                   std::imag(q[1] * std::conj(q[2]))};
  s.rho = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  Mat2 wsig = Mat2::Zero();
  if (s.rho > 0.0) wsig = (w[0] * pauli(1) + w[1] * pauli(2) + w[2] * pauli(3)) / s.rho;
  s.proj_plus = 0.5 * (pauli(0) + wsig);
  s.proj_minus = 0.5 * (pauli(0) - wsig);
  return s;
}

SpinorMatrix analytic_inverse(const std::array<cplx, 4>& q, double m, double delta) {
  const KappaRho kr = kappa_rho_from_q(q, m, delta);
  const cplx a = m + kI * std::conj(q[0]);
  const Mat2 b = sigma_dot(spatial(q));
  const Mat2 bd = b.adjoint();
  const Mat2 s0 = pauli(0);
  const SpinorMatrix T = block_matrix(std::conj(a) * s0, -b, bd, a * s0);
  const Mat2 z = Mat2::Zero();
  const SpinorMatrix D = block_matrix(kr.K_partner, z, z, kr.K);
  return T * D / kr.det();
}

double four_pi_norm(const LatticeParams& params) {
  const double s = params.eta / (2.0 * std::numbers::pi);
  return s * s * s * s;
}

void require_positive_mass(double m) {
  if (!(m > 0.0)) throw std::invalid_argument("Dirac mass must be positive");
}

}  // namespace

DiracSymbol dirac_symbol_from_q(const std::array<cplx, 4>& q, double m_dirac, double) {
  DiracSymbol s;
  const cplx a = m_dirac + kI * std::conj(q[0]);
  s.a = a * pauli(0);
  s.b = sigma_dot(spatial(q));
  s.matrix = block_matrix(s.a, s.b, -s.b.adjoint(), s.a.adjoint());
  return s;
}

DiracSymbol dirac_symbol(const MomentumPoint& p, double m_dirac, const LatticeParams& params) {
  return dirac_symbol_from_q(momentum_symbol_q(p, params), m_dirac, params.delta);
}

KappaRho kappa_rho_from_q(const std::array<cplx, 4>& q, double m_dirac, double) {
  KappaRho kr;
  const cplx a = m_dirac + kI * std::conj(q[0]);
  const double a2 = std::norm(a);
  const double q2 = std::norm(q[1]) + std::norm(q[2]) + std::norm(q[3]);
  kr.kappa = a2 + q2;
  kr.w = {std::imag(q[2] * std::conj(q[3])), std::imag(q[3] * std::conj(q[1])),
          std::imag(q[1] * std::conj(q[2]))};
  kr.rho = std::sqrt(kr.w[0] * kr.w[0] + kr.w[1] * kr.w[1] + kr.w[2] * kr.w[2]);
  const Mat2 b = sigma_dot(spatial(q));
  kr.K = a2 * pauli(0) + b * b.adjoint();
  kr.K_partner = a2 * pauli(0) + b.adjoint() * b;
  return kr;
}

KappaRho kappa_rho(const MomentumPoint& p, double m_dirac, const LatticeParams& params) {
  return kappa_rho_from_q(momentum_symbol_q(p, params), m_dirac, params.delta);
}

SpinorMatrix momentum_inverse_analytic(const MomentumPoint& p, double m_dirac,
                                       const LatticeParams& params) {
  const KappaRho kr = kappa_rho(p, m_dirac, params);
  if (!(kr.det() > 0.0)) throw std::domain_error("Dirac symbol is singular at this momentum");
  return analytic_inverse(momentum_symbol_q(p, params), m_dirac, params.delta);
}

SpinorMatrix momentum_inverse_direct(const MomentumPoint& p, double m_dirac,
                                     const LatticeParams& params) {
  const SpinorMatrix S = dirac_symbol(p, m_dirac, params).matrix;
  Eigen::PartialPivLU<SpinorMatrix> lu(S);
  return lu.solve(SpinorMatrix::Identity());
}

SpinorSumResult dirac_sum_direct(const LatticeParams& params, double m_dirac, const LatticeSite& x,
                                 Exec exec) {
  require_positive_mass(m_dirac);
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  const AxisTables tab = make_axis_tables(params);
  const std::vector<cplx> ph = phase_table(params);
  std::array<std::size_t, 4> jx{};
  for (int mu = 0; mu < 4; ++mu) jx[mu] = static_cast<std::size_t>(axis_index(x.j[mu], params));
  const SpinorMatrix zero = SpinorMatrix::Zero();
  auto line = [&](std::size_t outer) -> SpinorMatrix {
    const std::size_t k3 = outer % n;
    const std::size_t k2 = (outer / n) % n;
    const std::size_t k1 = outer / (n * n);
    const cplx sp = ph[k1 * n + jx[1]] * ph[k2 * n + jx[2]] * ph[k3 * n + jx[3]];
    auto term = [&](std::size_t k0) -> SpinorMatrix {
      return ph[k0 * n + jx[0]] * analytic_inverse(q_from_tables(tab, k0, k1, k2, k3), m_dirac, params.delta);
    };
    return sp * tree_sum(n, zero, term, Exec::serial);
  };
  const SpinorMatrix total = tree_sum(n * n * n, zero, line, exec);
  return {total * four_pi_norm(params), params.volume()};
}

SpinorSumResult dirac_sum_accelerated(const LatticeParams& params, double m_dirac,
                                      const LatticeSite& x, Exec exec) {
  require_positive_mass(m_dirac);
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  const AxisTables tab = make_axis_tables(params);
  const std::vector<cplx> ph = phase_table(params);
  std::array<std::size_t, 4> jx{};
  for (int mu = 0; mu < 4; ++mu) jx[mu] = static_cast<std::size_t>(axis_index(x.j[mu], params));
  const double delta = params.delta;
  const double shift = 1.0 - m_dirac * delta;
  const long x0 = x.j[0];
  const Mat2 s0 = pauli(0);
  const Mat2 z2 = Mat2::Zero();
  const SpinorMatrix t_minus = block_matrix(s0 / delta, z2, z2, z2);
  const SpinorMatrix t_plus = block_matrix(z2, z2, z2, s0 / delta);
  const SpinorMatrix zero = SpinorMatrix::Zero();

  auto line = [&](std::size_t outer) -> SpinorMatrix {
    const std::size_t k3 = outer % n;
    const std::size_t k2 = (outer / n) % n;
    const std::size_t k1 = outer / (n * n);
    const cplx sp = ph[k1 * n + jx[1]] * ph[k2 * n + jx[2]] * ph[k3 * n + jx[3]];
    const SpatialBlock blk = spatial_block(q_from_tables(tab, 0, k1, k2, k3));
    const SpinorMatrix t0 =
        block_matrix((m_dirac - 1.0 / delta) * s0, -blk.b, blk.b_dag, (m_dirac - 1.0 / delta) * s0);

    // F(k) = sum_p0 exp(i k p0 delta) eta / (|a|^2 + lambda), or empty if no closed form applies.
    auto resolvent = [&](double lambda, long k) -> std::optional<cplx> {
      if (shift < 1e-8) return std::nullopt;
      auto v = periodic_resolvent_sum((m_dirac * m_dirac + lambda) / shift, k, params);
      if (!v) return std::nullopt;
      return *v / shift;
    };
    auto channel = [&](double lambda) -> std::optional<SpinorMatrix> {
      auto f0 = resolvent(lambda, x0);
      auto fp = resolvent(lambda, x0 + 1);
      auto fm = resolvent(lambda, x0 - 1);
      if (!f0 || !fp || !fm) return std::nullopt;
      return SpinorMatrix(t0 * *f0 + t_plus * *fp + t_minus * *fm);
    };

    std::optional<SpinorMatrix> result;
    if (blk.rho <= 1e-14 * blk.q_norm2 || blk.rho == 0.0) {
      result = channel(blk.q_norm2);
    } else {
      auto c1 = channel(blk.q_norm2 - 2.0 * blk.rho);
      auto c2 = channel(blk.q_norm2 + 2.0 * blk.rho);
      if (c1 && c2) {
        const SpinorMatrix q1 = block_matrix(blk.proj_plus, z2, z2, blk.proj_minus);
        const SpinorMatrix q2 = block_matrix(blk.proj_minus, z2, z2, blk.proj_plus);
        result = SpinorMatrix(*c1 * q1 + *c2 * q2);
      }
    }
    if (!result) {
      auto term = [&](std::size_t k0) -> SpinorMatrix {
        return ph[k0 * n + jx[0]] * analytic_inverse(q_from_tables(tab, k0, k1, k2, k3), m_dirac, delta);
      };
      result = SpinorMatrix(tree_sum(n, zero, term, Exec::serial) * params.eta);
    }
    return sp * *result;
  };
  const SpinorMatrix total = tree_sum(n * n * n, zero, line, exec);
  const double e = params.eta / (2.0 * std::numbers::pi);
  return {total * (e * e * e / (2.0 * std::numbers::pi)), static_cast<std::uint64_t>(n * n * n)};
}

SpinorMatrix lattice_dirac_propagator(const LatticeParams& params, double m_dirac,
                                      const LatticeSite& x, DiracMethod method) {
  return method == DiracMethod::direct ? dirac_sum_direct(params, m_dirac, x).value
                                       : dirac_sum_accelerated(params, m_dirac, x).value;
}

Eigen::MatrixXcd dense_dirac_operator(const LatticeParams& params, double m_dirac) {
  const std::size_t V = params.volume();
  const std::size_t rows = 4 * V;
  if (rows > kDenseRowLimit) {
    throw std::length_error("dense Dirac operator has " + std::to_string(rows) + " rows, limit is " +
                            std::to_string(kDenseRowLimit));
  }
  const double inv_d = 1.0 / params.delta;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(rows, rows);
  for (std::size_t site = 0; site < V; ++site) {
    const LatticeSite s = site_from_index(site, params);
    for (int alpha = 0; alpha < 4; ++alpha) D(4 * site + alpha, 4 * site + alpha) += m_dirac;
    for (int mu = 0; mu < 4; ++mu) {
      const std::size_t fwd = shift_site(s, mu, +1, params).linear_index(params);
      const std::size_t bwd = shift_site(s, mu, -1, params).linear_index(params);
      const SpinorMatrix& g = gamma_euclidean(mu);
      for (int alpha = 0; alpha < 4; ++alpha) {
        for (int beta = 0; beta < 4; ++beta) {
          const cplx c = g(alpha, beta) * inv_d;
          if (c == 0.0) continue;
          const std::size_t row = 4 * site + alpha;
          if (beta < 2) {
            D(row, 4 * fwd + beta) += c;
            D(row, 4 * site + beta) -= c;
          } else {
            D(row, 4 * site + beta) += c;
            D(row, 4 * bwd + beta) -= c;
          }
        }
      }
    }
  }
  return D;
}

Eigen::MatrixXcd dense_dirac_oracle(const LatticeParams& params, double m_dirac) {
  require_positive_mass(m_dirac);
  const Eigen::MatrixXcd D = dense_dirac_operator(params, m_dirac);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(D);
  const double d2 = params.delta * params.delta;
  return lu.inverse() / (d2 * d2);
}

SpinorMatrix dense_dirac_block(const Eigen::MatrixXcd& oracle, const LatticeSite& x,
                               const LatticeParams& params) {
  const std::size_t row = 4 * x.linear_index(params);
  const std::size_t col = 4 * make_site({0, 0, 0, 0}, params).linear_index(params);
  return oracle.block<4, 4>(row, col);
}

SpinorMatrix continuum_dirac_schwinger(double m_dirac, const Vec4& x) {
  require_positive_mass(m_dirac);
  if (x[0] == 0.0) throw std::invalid_argument("continuum Dirac propagator requires x0 != 0");
  const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  const double tau = std::abs(x[0]);
  const cplx s = radial_integral(RadialKernel::propagator, m_dirac, tau, r);
  const cplx dt = -std::copysign(1.0, x[0]) * radial_integral(RadialKernel::time_derivative, m_dirac, tau, r);
  const cplx ds = radial_integral(RadialKernel::spatial_derivative, m_dirac, tau, r);
  SpinorMatrix R = m_dirac * s * SpinorMatrix::Identity() - dt * gamma_euclidean(0);
  for (int j = 1; j <= 3; ++j) R -= x[j] * ds * gamma_euclidean(j);
  return R;
}

SpinorMatrix dirac_two_point_closed(double m_dirac, cplx y0, const std::array<double, 3>& yvec) {
  require_positive_mass(m_dirac);
  const double r2 = yvec[0] * yvec[0] + yvec[1] * yvec[1] + yvec[2] * yvec[2];
  const cplx s = std::sqrt(y0 * y0 + r2);
  if (!(s.real() > 0.0)) throw std::domain_error("two-point function evaluated on the light cone");
  const double m = m_dirac;
  const double norm = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  const cplx k0 = bessel_k0(m * s);
  const cplx k1 = bessel_k1(m * s);
  const cplx prop = norm * m * k1 / s;
  // -dS/dy_mu = y_mu * coeff
  const cplx coeff = norm * m * (m * s * k0 + 2.0 * k1) / (s * s * s);
  SpinorMatrix R = m * prop * SpinorMatrix::Identity() + coeff * y0 * gamma_euclidean(0);
  for (int j = 0; j < 3; ++j) R += coeff * yvec[j] * gamma_euclidean(j + 1);
  return R;
}

std::vector<DiracSample> converge_dirac(double m_dirac, const Vec4& x, const std::vector<int>& M_list,
                                        const std::vector<int>& N_list) {
  if (M_list.empty()) throw std::invalid_argument("convergence needs a non-empty M list");
  if (!N_list.empty() && N_list.size() != M_list.size()) {
    throw std::invalid_argument("N list must be empty or match the M list");
  }
  if (x[0] == 0.0) throw std::invalid_argument("convergence point requires x0 != 0");
  std::vector<DiracSample> out;
  for (std::size_t i = 0; i < M_list.size(); ++i) {
    const LatticeParams params = make_lattice(M_list[i], N_list.empty() ? M_list[i] : N_list[i]);
    const LatticeSite site = nearest_site(x, params);
    if (site.j[0] == 0) throw std::invalid_argument("x0 rounds to the time slice 0 on this lattice");
    DiracSample s;
    s.M = params.M;
    s.N = params.N;
    s.x = site.position(params);
    s.lattice = lattice_dirac_propagator(params, m_dirac, site);
    s.continuum = continuum_dirac_schwinger(m_dirac, s.x);
    s.abs_err = (s.lattice - s.continuum).cwiseAbs().maxCoeff();
    s.rel_err = s.abs_err / std::max(s.continuum.cwiseAbs().maxCoeff(), 1e-300);
    out.push_back(s);
  }
  return out;
}

DiscretizationScheme parse_scheme(const std::string& name) {
  if (name == "forward_backward" || name == "fb") return DiscretizationScheme::forward_backward;
  if (name == "central") return DiscretizationScheme::central;
  throw std::invalid_argument("unknown discretization scheme '" + name + "'");
}

std::string scheme_name(DiscretizationScheme scheme) {
  return scheme == DiscretizationScheme::central ? "central" : "forward_backward";
}

SpinorMatrix scheme_symbol(DiscretizationScheme scheme, const MomentumPoint& p, double m_dirac,
                           const LatticeParams& params) {
  if (scheme == DiscretizationScheme::forward_backward) return dirac_symbol(p, m_dirac, params).matrix;
  SpinorMatrix S = m_dirac * SpinorMatrix::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    S += kI * (std::sin(params.theta(p.k[mu])) / params.delta) * gamma_euclidean(mu);
  }
  return S;
}

DoublingReport doubling_scan(DiscretizationScheme scheme, const LatticeParams& params, double m_dirac) {
  if (m_dirac < 0.0) throw std::invalid_argument("Dirac mass must be non-negative for pole counting");
  const double threshold = 1e-8 / params.delta;
  DoublingReport rep;
  const std::uint64_t V = params.volume();
  for (std::uint64_t i = 0; i < V; ++i) {
    const MomentumPoint p = momentum_from_index(i, params);
    const SpinorMatrix S = scheme_symbol(scheme, p, m_dirac, params);
    // sigma_min >= |det S| / ||S||_F^3, so the SVD is needed only near singular symbols.
    const double fro = S.norm();
    if (std::abs(S.determinant()) > threshold * fro * fro * fro) continue;
    Eigen::JacobiSVD<SpinorMatrix> svd(S);
    if (svd.singularValues().minCoeff() < threshold) rep.zero_modes.push_back(p);
  }
  rep.count = static_cast<int>(rep.zero_modes.size());
  return rep;
}

int doubling_count(DiscretizationScheme scheme, const LatticeParams& params, double m_dirac) {
  return doubling_scan(scheme, params, m_dirac).count;
}

}  // namespace qflat
