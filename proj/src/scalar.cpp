#include "qflat/scalar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "qflat/bessel.hpp"
#include "qflat/radial.hpp"

namespace qflat {

namespace {

constexpr double kUnitCircleGap = 1e-9;

cplx int_power(cplx z, long n) {
  cplx result = 1.0;
  cplx base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

double four_pi_norm(const LatticeParams& params) {
  const double s = params.eta / (2.0 * std::numbers::pi);
  return s * s * s * s;
}

void require_positive_mass(double m) {
  if (!(m > 0.0)) throw std::invalid_argument("mass must be positive, got " + std::to_string(m));
}

}  // namespace

ResolventRoots resolvent_roots(cplx beta, double delta) {
  const cplx t = delta * delta * beta;
  const cplx s = std::sqrt(t * (4.0 + t));
  const cplx za = 0.5 * (2.0 + t + s);
  const cplx zb = 0.5 * (2.0 + t - s);
  const cplx zp = std::abs(za) >= std::abs(zb) ? za : zb;
  return {zp, 1.0 / zp};
}

std::optional<cplx> periodic_resolvent_sum(cplx beta, long n, const LatticeParams& params) {
  const double delta = params.delta;
  const cplx t = delta * delta * beta;
  const cplx s = std::sqrt(t * (4.0 + t));
  const cplx za = 0.5 * (2.0 + t + s);
  const cplx zb = 0.5 * (2.0 + t - s);
  const bool a_larger = std::abs(za) >= std::abs(zb);
  const cplx z_plus = a_larger ? za : zb;
  const cplx z_minus = 1.0 / z_plus;
  const cplx gap = a_larger ? s : -s;  // z+ - z-
  if (std::abs(z_minus) > 1.0 - kUnitCircleGap || std::abs(gap) < kUnitCircleGap) return std::nullopt;
  const long period = 2L * params.L;
  const long k = ((n % period) + period) % period;
  const cplx wrap = int_power(z_minus, period);
  const cplx num = int_power(z_minus, k) + int_power(z_minus, period - k);
  return 2.0 * std::numbers::pi * delta * num / (gap * (1.0 - wrap));
}

cplx periodic_resolvent_sum_direct(cplx beta, long n, const LatticeParams& params) {
  const int size = params.sites_per_axis();
  const long period = 2L * params.L;
  cplx acc = 0.0;
  for (int i = 0; i < size; ++i) {
    const int k = axis_coordinate(i, params);
    const long r = ((static_cast<long>(k) * n) % period + period) % period;
    const double ang = std::numbers::pi * static_cast<double>(r) / params.L;
    acc += cplx(std::cos(ang), std::sin(ang)) / (laplacian_symbol(params.theta(k), params.delta) + beta);
  }
  return acc * params.eta;
}

namespace {
void check_sector(cplx B) {
  if (B == 0.0 || std::abs(std::arg(B)) > 0.25 * std::numbers::pi * (1.0 + 1e-14)) {
    throw std::domain_error("one-dimensional sum requires B != 0 and |arg B| <= pi/4");
  }
}
}  // namespace

cplx one_d_sum_closed(cplx B, long n, const LatticeParams& params) {
  check_sector(B);
  const cplx beta = B * B;
  if (auto v = periodic_resolvent_sum(beta, n, params)) return *v;
  return periodic_resolvent_sum_direct(beta, n, params);
}

cplx one_d_sum_infinite_lattice(cplx B, long n, const LatticeParams& params) {
  check_sector(B);
  const ResolventRoots r = resolvent_roots(B * B, params.delta);
  return 2.0 * std::numbers::pi * params.delta * int_power(r.z_minus, std::labs(n)) /
         (r.z_plus - r.z_minus);
}

SumResult scalar_sum_direct(const LatticeParams& params, double m, const LatticeSite& x, Exec exec) {
  require_positive_mass(m);
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  const AxisTables tab = make_axis_tables(params);
  const std::vector<cplx> ph = phase_table(params);
  std::array<std::size_t, 4> jx{};
  for (int mu = 0; mu < 4; ++mu) jx[mu] = static_cast<std::size_t>(axis_index(x.j[mu], params));
  const double m2 = m * m;
  auto line = [&](std::size_t outer) {
    const std::size_t k3 = outer % n;
    const std::size_t k2 = (outer / n) % n;
    const std::size_t k1 = outer / (n * n);
    const double a2 = m2 + tab.laplacian[k1] + tab.laplacian[k2] + tab.laplacian[k3];
    const cplx spatial = ph[k1 * n + jx[1]] * ph[k2 * n + jx[2]] * ph[k3 * n + jx[3]];
    auto term = [&](std::size_t k0) { return ph[k0 * n + jx[0]] / (tab.laplacian[k0] + a2); };
    return spatial * tree_sum(n, cplx(0.0), term, Exec::serial);
  };
  const cplx total = tree_sum(n * n * n, cplx(0.0), line, exec);
  return {total * four_pi_norm(params), params.volume()};
}

SumResult scalar_sum_accelerated(const LatticeParams& params, double m, const LatticeSite& x,
                                 Exec exec) {
  require_positive_mass(m);
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  const AxisTables tab = make_axis_tables(params);
  const std::vector<cplx> ph = phase_table(params);
  std::array<std::size_t, 4> jx{};
  for (int mu = 0; mu < 4; ++mu) jx[mu] = static_cast<std::size_t>(axis_index(x.j[mu], params));
  const double m2 = m * m;
  const long x0 = x.j[0];
  auto term = [&](std::size_t outer) {
    const std::size_t k3 = outer % n;
    const std::size_t k2 = (outer / n) % n;
    const std::size_t k1 = outer / (n * n);
    const double a2 = m2 + tab.laplacian[k1] + tab.laplacian[k2] + tab.laplacian[k3];
    const cplx spatial = ph[k1 * n + jx[1]] * ph[k2 * n + jx[2]] * ph[k3 * n + jx[3]];
    auto line = periodic_resolvent_sum(a2, x0, params);
    return spatial * (line ? *line : periodic_resolvent_sum_direct(a2, x0, params));
  };
  const cplx total = tree_sum(n * n * n, cplx(0.0), term, exec);
  const double eta = params.eta / (2.0 * std::numbers::pi);
  return {total * eta * eta * eta / (2.0 * std::numbers::pi), static_cast<std::uint64_t>(n * n * n)};
}

cplx lattice_propagator_direct(const LatticeParams& params, double m, const LatticeSite& x) {
  return scalar_sum_direct(params, m, x).value;
}

cplx lattice_propagator_accel(const LatticeParams& params, double m, const LatticeSite& x) {
  return scalar_sum_accelerated(params, m, x).value;
}

Eigen::MatrixXd dense_scalar_operator(const LatticeParams& params, double m) {
  const std::size_t V = params.volume();
  if (V > kDenseRowLimit) {
    throw std::length_error("dense operator has " + std::to_string(V) + " rows, limit is " +
                            std::to_string(kDenseRowLimit));
  }
  const double inv_d2 = 1.0 / (params.delta * params.delta);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(V, V);
  for (std::size_t row = 0; row < V; ++row) {
    const LatticeSite s = site_from_index(row, params);
    A(row, row) += m * m + 8.0 * inv_d2;
    for (int mu = 0; mu < 4; ++mu) {
      A(row, shift_site(s, mu, +1, params).linear_index(params)) -= inv_d2;
      A(row, shift_site(s, mu, -1, params).linear_index(params)) -= inv_d2;
    }
  }
  return A;
}

Eigen::MatrixXd dense_operator_oracle(const LatticeParams& params, double m) {
  require_positive_mass(m);
  const Eigen::MatrixXd A = dense_scalar_operator(params, m);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("scalar operator is not positive definite");
  const double d2 = params.delta * params.delta;
  return llt.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols())) / (d2 * d2);
}

Eigen::VectorXd dense_propagator_column(const LatticeParams& params, double m) {
  require_positive_mass(m);
  const Eigen::MatrixXd A = dense_scalar_operator(params, m);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("scalar operator is not positive definite");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(A.rows());
  e[static_cast<Eigen::Index>(make_site({0, 0, 0, 0}, params).linear_index(params))] = 1.0;
  const double d2 = params.delta * params.delta;
  return llt.solve(e) / (d2 * d2);
}

cplx continuum_schwinger(double m, const Vec4& x) {
  require_positive_mass(m);
  if (x[0] == 0.0) throw std::invalid_argument("continuum propagator requires x0 != 0");
  const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  return radial_integral(RadialKernel::propagator, m, std::abs(x[0]), r);
}

cplx wightman_minus(double m, double x0, double eps, const std::array<double, 3>& xvec) {
  require_positive_mass(m);
  if (!(eps > 0.0)) throw std::invalid_argument("Wightman function requires eps > 0");
  const double r = std::sqrt(xvec[0] * xvec[0] + xvec[1] * xvec[1] + xvec[2] * xvec[2]);
  return radial_integral(RadialKernel::propagator, m, cplx(eps, x0), r);
}

cplx scalar_two_point_closed(double m, cplx y0, double r) {
  require_positive_mass(m);
  const cplx s = std::sqrt(y0 * y0 + r * r);
  if (!(s.real() > 0.0)) throw std::domain_error("two-point function evaluated on the light cone");
  return m * bessel_k1(m * s) / (4.0 * std::numbers::pi * std::numbers::pi * s);
}

std::vector<PropagatorSample> converge_scalar(double m, const Vec4& x, const std::vector<int>& M_list,
                                              const std::vector<int>& N_list) {
  if (M_list.empty()) throw std::invalid_argument("convergence needs a non-empty M list");
  if (!N_list.empty() && N_list.size() != M_list.size()) {
    throw std::invalid_argument("N list must be empty or match the M list");
  }
  if (x[0] == 0.0) throw std::invalid_argument("convergence point requires x0 != 0");
  std::vector<PropagatorSample> out;
  for (std::size_t i = 0; i < M_list.size(); ++i) {
    const LatticeParams params = make_lattice(M_list[i], N_list.empty() ? M_list[i] : N_list[i]);
    const LatticeSite site = nearest_site(x, params);
    if (site.j[0] == 0) throw std::invalid_argument("x0 rounds to the time slice 0 on this lattice");
    PropagatorSample s;
    s.M = params.M;
    s.N = params.N;
    s.x = site.position(params);
    s.lattice = lattice_propagator_accel(params, m, site);
    s.continuum = continuum_schwinger(m, s.x);
    s.abs_err = std::abs(s.lattice - s.continuum);
    s.rel_err = s.abs_err / std::max(std::abs(s.continuum), 1e-300);
    out.push_back(s);
  }
  return out;
}

std::vector<double> s_zero_trend(double m, const std::vector<int>& M_list) {
  std::vector<double> out;
  for (int M : M_list) {
    const LatticeParams params = make_lattice(M, M);
    out.push_back(lattice_propagator_accel(params, m, make_site({0, 0, 0, 0}, params)).real());
  }
  return out;
}

double s_zero_lower_bound(const LatticeParams& params, double m) {
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  std::vector<double> p2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = axis_coordinate(static_cast<int>(i), params) * params.eta;
    p2[i] = p * p;
  }
  const double c = 16.0 / (std::numbers::pi * std::numbers::pi);
  auto term = [&](std::size_t idx) {
    const double s = p2[idx % n] + p2[(idx / n) % n] + p2[(idx / (n * n)) % n] + p2[idx / (n * n * n)];
    return 1.0 / (c * s + m * m);
  };
  return tree_sum(params.volume(), 0.0, term) * four_pi_norm(params);
}

}  // namespace qflat
