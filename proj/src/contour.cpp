#include "qflat/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qflat/bessel.hpp"
#include "qflat/dirac.hpp"
#include "qflat/quadrature.hpp"
#include "qflat/scalar.hpp"

namespace qflat {

GaussianTestFunction::GaussianTestFunction(std::array<cplx, 4> center, double sigma,
                                           std::vector<Monomial> poly)
    : center_(center), sigma_(sigma), poly_(std::move(poly)) {
  if (!(sigma > 0.0)) throw std::invalid_argument("test function width must be positive");
  for (const auto& m : poly_) {
    for (int p : m.powers) {
      if (p < 0) throw std::invalid_argument("monomial powers must be non-negative");
    }
  }
}

cplx GaussianTestFunction::operator()(const std::array<cplx, 4>& z) const {
  cplx q = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const cplx d = z[mu] - center_[mu];
    q += d * d;
  }
  cplx poly = 0.0;
  for (const auto& m : poly_) {
    cplx t = m.coeff;
    for (int mu = 0; mu < 4; ++mu) t *= std::pow(z[mu], m.powers[mu]);
    poly += t;
  }
  return std::exp(-q / (sigma_ * sigma_)) * poly;
}

GaussianTestFunction GaussianTestFunction::reflected_conjugate() const {
  // conj f(-conj z): center c -> -conj c, coefficient -> conj(coeff) (-1)^|p|.
  std::array<cplx, 4> c;
  for (int mu = 0; mu < 4; ++mu) c[mu] = -std::conj(center_[mu]);
  std::vector<Monomial> poly;
  for (const auto& m : poly_) {
    int deg = 0;
    for (int p : m.powers) deg += p;
    poly.push_back({std::conj(m.coeff) * (deg % 2 == 0 ? 1.0 : -1.0), m.powers});
  }
  return GaussianTestFunction(c, sigma_, poly);
}

double GaussianTestFunction::decay_certificate() const {
  double sup = 0.0;
  const int steps = 8;
  const double span = 8.0 * sigma_;
  for (double im : {-k_max(), 0.0, k_max()}) {
    for (int a = -steps; a <= steps; ++a) {
      for (int b = -steps; b <= steps; b += 4) {
        std::array<cplx, 4> z = {center_[0].real() + span * a / steps + cplx(0.0, im),
                                 center_[1].real() + span * b / steps, center_[2].real(), center_[3].real()};
        const double fz = std::abs((*this)(z));
        double weight = 1.0;
        for (int mu = 0; mu < 4; ++mu) {
          weight = std::max(weight, std::abs(z[mu]));
          for (int nu = 0; nu < 4; ++nu) weight = std::max(weight, std::abs(z[mu] * z[nu]));
        }
        sup = std::max(sup, weight * fz);
      }
    }
  }
  return sup;
}

GaussianTestFunction default_test_function(double l) {
  if (l > 0.0) return GaussianTestFunction({0.0, 1.5, 0.0, 0.0}, 0.5);
  return GaussianTestFunction({0.0, 6.0, 0.0, 0.0}, 1.0);
}

namespace {

constexpr double kNorm = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

// Pieces of the kernel that depend only on (z0, r).
struct RadialValues {
  cplx det_factor;  // (1 - 4 l^4 D^2)^-1/2
  cplx D;           // scalar two-point function
  cplx mass_term;   // m S, coefficient of the identity in W
  cplx grad;        // coefficient of y_mu gamma_mu in W
};

RadialValues radial_values(const TwoPointKernel& k, cplx z0, double r) {
  RadialValues v{};
  const cplx y0 = cplx(0.0, 1.0) * z0;
  const double m = k.params.m;
  v.D = scalar_two_point_closed(m, y0, r);
  const double l = k.params.l;
  const cplx p = 4.0 * l * l * l * l * v.D * v.D;
  if (!(std::abs(p) < 1.0)) throw AnalyticityError("|4 l^4 D^2| >= 1 on the contour");
  v.det_factor = 1.0 / std::sqrt(1.0 - p);
  if (k.kind == KernelKind::dirac_component) {
    const double md = k.params.m_dirac;
    const cplx s = std::sqrt(y0 * y0 + r * r);
    const cplx k0 = bessel_k0(md * s);
    const cplx k1 = bessel_k1(md * s);
    v.mass_term = md * kNorm * md * k1 / s;
    v.grad = kNorm * md * (md * s * k0 + 2.0 * k1) / (s * s * s);
  }
  return v;
}

cplx assemble(const TwoPointKernel& k, const RadialValues& v, cplx z0, const std::array<double, 3>& x) {
  switch (k.kind) {
    case KernelKind::rho:
      return v.det_factor;
    case KernelKind::scalar_pair:
      return v.det_factor * v.D;
    case KernelKind::dirac_component:
      break;
  }
  const cplx y0 = cplx(0.0, 1.0) * z0;
  cplx w = k.alpha == k.beta ? v.mass_term : cplx(0.0);
  w += v.grad * y0 * gamma_euclidean(0)(k.alpha, k.beta);
  for (int j = 0; j < 3; ++j) w += v.grad * x[j] * gamma_euclidean(j + 1)(k.alpha, k.beta);
  return v.det_factor * w;
}

}  // namespace

cplx TwoPointKernel::operator()(cplx z0, const std::array<double, 3>& x) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return assemble(*this, radial_values(*this, z0, r), z0, x);
}

TwoPointKernel TwoPointKernel::hermitian_partner(double* phase) const {
  TwoPointKernel k = *this;
  double ph = 1.0;
  if (kind == KernelKind::dirac_component) {
    std::swap(k.alpha, k.beta);
    ph = gamma_euclidean(0)(alpha, alpha).real() * gamma_euclidean(0)(beta, beta).real();
  }
  if (phase) *phase = ph;
  return k;
}

cplx eval_two_point_functional(const TwoPointKernel& kernel, const GaussianTestFunction& f,
                               const ContourSpec& spec) {
  const double eps = spec.epsilon;
  if (!(eps > 0.0) || eps > f.k_max()) {
    throw std::domain_error("contour shift must lie in (0, k_max]");
  }
  if (kernel.params.l > 0.0 && !(eps > fundamental_length(kernel.params.l))) {
    throw AnalyticityError("contour shift must exceed the fundamental length for l > 0");
  }
  if (kernel.alpha < 0 || kernel.alpha > 3 || kernel.beta < 0 || kernel.beta > 3) {
    throw std::out_of_range("spinor index must be in 0..3");
  }
  const int n = spec.nodes_per_axis;
  const GaussLegendreRule rule = gauss_legendre(n);
  const double half = spec.half_width_sigmas * f.sigma();

  // Per-axis nodes and weights around the real part of the center.
  std::array<std::vector<double>, 4> x;
  std::array<std::vector<double>, 4> w;
  for (int mu = 0; mu < 4; ++mu) {
    x[mu].resize(n);
    w[mu].resize(n);
    for (int i = 0; i < n; ++i) {
      x[mu][i] = f.center()[mu].real() + half * rule.nodes[i];
      w[mu][i] = half * rule.weights[i];
    }
  }

  // Unique radii over the spatial grid, keyed by the sum of the sorted squares.
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  std::vector<double> r2(n3);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        std::array<double, 3> s = {x[1][a] * x[1][a], x[2][b] * x[2][b], x[3][c] * x[3][c]};
        std::sort(s.begin(), s.end());
        r2[(static_cast<std::size_t>(a) * n + b) * n + c] = s[0] + s[1] + s[2];
      }
    }
  }
  std::vector<double> unique = r2;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<std::uint32_t> slot(n3);
  for (std::size_t i = 0; i < n3; ++i) {
    slot[i] = static_cast<std::uint32_t>(std::lower_bound(unique.begin(), unique.end(), r2[i]) - unique.begin());
  }

  const std::size_t nu = unique.size();
  std::vector<RadialValues> table(static_cast<std::size_t>(n) * nu);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < n; ++t) {
    const cplx z0(x[0][t], -eps);
    for (std::size_t u = 0; u < nu; ++u) table[t * nu + u] = radial_values(kernel, z0, std::sqrt(unique[u]));
  }

  // Separable factors of f: Gaussian times weight, and powers per monomial.
  const auto& poly = f.polynomial();
  const double s2 = f.sigma() * f.sigma();
  std::vector<std::array<std::vector<cplx>, 4>> factor(poly.size());
  for (std::size_t m = 0; m < poly.size(); ++m) {
    for (int mu = 0; mu < 4; ++mu) {
      factor[m][mu].resize(n);
      for (int i = 0; i < n; ++i) {
        const cplx z = mu == 0 ? cplx(x[0][i], -eps) : cplx(x[mu][i]);
        const cplx d = z - f.center()[mu];
        cplx v = w[mu][i] * std::exp(-d * d / s2) * std::pow(z, poly[m].powers[mu]);
        if (mu == 0) v *= poly[m].coeff;
        factor[m][mu][i] = v;
      }
    }
  }

  std::vector<cplx> partial(n, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < n; ++t) {
    const cplx z0(x[0][t], -eps);
    cplx acc_t = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          const std::size_t idx = (static_cast<std::size_t>(a) * n + b) * n + c;
          const cplx F = assemble(kernel, table[t * nu + slot[idx]], z0, {x[1][a], x[2][b], x[3][c]});
          cplx fv = 0.0;
          for (std::size_t m = 0; m < poly.size(); ++m) {
            fv += factor[m][0][t] * factor[m][1][a] * factor[m][2][b] * factor[m][3][c];
          }
          acc_t += F * fv;
        }
      }
    }
    partial[t] = acc_t;
  }
  cplx total = 0.0;
  for (const cplx& p : partial) total += p;
  return total;
}

std::vector<InvarianceRow> contour_invariance_report(const TwoPointKernel& kernel,
                                                     const GaussianTestFunction& f,
                                                     const std::vector<double>& eps_list,
                                                     int nodes_per_axis) {
  std::vector<InvarianceRow> rows;
  for (double eps : eps_list) {
    ContourSpec spec;
    spec.epsilon = eps;
    spec.nodes_per_axis = nodes_per_axis;
    InvarianceRow r;
    r.epsilon = eps;
    r.value = eval_two_point_functional(kernel, f, spec);
    rows.push_back(r);
  }
  for (auto& r : rows) r.rel_dev = std::abs(r.value - rows.front().value) / std::abs(rows.front().value);
  return rows;
}

std::vector<ThresholdRow> threshold_probe(double l, double m, const std::vector<double>& eps_list) {
  constexpr int kTime = 41;
  constexpr int kRadius = 21;
  constexpr double kExtent = 2.0;
  std::vector<ThresholdRow> out;
  for (double eps : eps_list) {
    ThresholdRow row;
    row.epsilon = eps;
    std::vector<double> vals(static_cast<std::size_t>(kTime) * kRadius);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < kTime; ++i) {
      const double x0 = -kExtent + 2.0 * kExtent * i / (kTime - 1);
      for (int j = 0; j < kRadius; ++j) {
        const double r = kExtent * j / (kRadius - 1);
        const cplx D = wightman_minus(m, x0, eps, {r, 0.0, 0.0});
        vals[i * kRadius + j] = std::abs(4.0 * l * l * l * l * D * D);
      }
    }
    for (int i = 0; i < kTime; ++i) {
      for (int j = 0; j < kRadius; ++j) {
        const double v = vals[i * kRadius + j];
        if (v > row.max_abs) {
          row.max_abs = v;
          row.argmax = {-kExtent + 2.0 * kExtent * i / (kTime - 1), kExtent * j / (kRadius - 1)};
        }
      }
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace qflat
