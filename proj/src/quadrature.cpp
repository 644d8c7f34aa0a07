#include "qflat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qflat {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  // Golub-Welsch: eigenpairs of the Jacobi matrix of the Legendre recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  GaussLegendreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = 2.0 * v * v;
  }
  // Symmetrize to remove eigen-solver asymmetry.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;
using cplx = std::complex<double>;

struct PanelEstimate {
  cplx kronrod;
  cplx gauss;
};

PanelEstimate gk15(const RealIntegrand& f, double a, double b) {
  static const auto& xk = gauss_kronrod<double, 15>::abscissa();
  static const auto& wk = gauss_kronrod<double, 15>::weights();
  static const auto& wg = gauss<double, 7>::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx f0 = f(c);
  cplx k = wk[0] * f0;
  cplx g = wg[0] * f0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const cplx s = f(c - h * xk[i]) + f(c + h * xk[i]);
    k += wk[i] * s;
    if (i % 2 == 0) g += wg[i / 2] * s;
  }
  return {k * h, g * h};
}

void adapt(const RealIntegrand& f, double a, double b, double rel_tol, double abs_tol, int depth,
           QuadratureResult& out) {
  const PanelEstimate e = gk15(f, a, b);
  out.evaluations += 15;
  const double err = std::abs(e.kronrod - e.gauss);
  if (depth <= 0 || err <= std::max(abs_tol, rel_tol * std::abs(e.kronrod)) || b - a < 1e-300) {
    out.value += e.kronrod;
    out.error_estimate += err;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, rel_tol, 0.5 * abs_tol, depth - 1, out);
  adapt(f, m, b, rel_tol, 0.5 * abs_tol, depth - 1, out);
}

void check_breaks(const std::vector<double>& breaks) {
  if (breaks.size() < 2) throw std::invalid_argument("quadrature needs at least two breakpoints");
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i - 1])) throw std::invalid_argument("breakpoints must increase");
  }
}

}  // namespace

QuadratureResult integrate_adaptive(const RealIntegrand& f, const std::vector<double>& breaks,
                                    double rel_tol, double abs_tol, int max_depth) {
  check_breaks(breaks);
  QuadratureResult out{0.0, 0.0, 0};
  const double panel_abs = abs_tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    adapt(f, breaks[i - 1], breaks[i], rel_tol, panel_abs, max_depth, out);
  }
  return out;
}

QuadratureResult integrate_composite_gl(const RealIntegrand& f, const std::vector<double>& breaks,
                                        int order) {
  check_breaks(breaks);
  const GaussLegendreRule rule = gauss_legendre(order);
  QuadratureResult out{0.0, 0.0, 0};
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double c = 0.5 * (breaks[i] + breaks[i - 1]);
    const double h = 0.5 * (breaks[i] - breaks[i - 1]);
    cplx acc = 0.0;
    for (int k = 0; k < order; ++k) acc += rule.weights[k] * f(c + h * rule.nodes[k]);
    out.value += acc * h;
    out.evaluations += order;
  }
  return out;
}

}  // namespace qflat
