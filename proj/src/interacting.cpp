#include "qflat/interacting.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qflat/dirac.hpp"
#include "qflat/scalar.hpp"

namespace qflat {

int sign_value(FieldSign s) { return s == FieldSign::plus ? 1 : -1; }

FieldSign conjugate(FieldSign s) { return s == FieldSign::plus ? FieldSign::minus : FieldSign::plus; }

FieldSign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus" || s == "psibar") return FieldSign::plus;
  if (s == "-" || s == "minus" || s == "psi") return FieldSign::minus;
  throw std::invalid_argument("unknown field sign '" + s + "'");
}

double fundamental_length(double l) { return l / (std::numbers::sqrt2 * std::numbers::pi); }

ScalarTwoPoint continuum_scalar_two_point(double m) {
  return [m](const Vec4& y) {
    return scalar_two_point_closed(m, y[0], std::sqrt(y[1] * y[1] + y[2] * y[2] + y[3] * y[3]));
  };
}

cplx CorrelationMatrix::det() const {
  if (entries.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(entries).determinant();
}

namespace {

cplx coupling(FieldSign a, FieldSign b, double l) {
  const double phase = 0.25 * std::numbers::pi * (sign_value(a) + sign_value(b));
  return 2.0 * l * l * std::polar(1.0, phase);
}

void check_sizes(std::size_t points, std::size_t signs) {
  if (points != signs) throw std::invalid_argument("points and signs differ in length");
}

std::string pair_message(int j, int k, double gap, double dist) {
  std::ostringstream os;
  os << "|P_n| >= 1; closest offending pair (" << j << ", " << k << ") has imaginary gap " << gap
     << " and real separation " << dist;
  return os.str();
}

}  // namespace

CorrelationMatrix build_C(const std::vector<Vec4>& points, const std::vector<FieldSign>& signs,
                          const ModelParams& params, const ScalarTwoPoint& two_point) {
  check_sizes(points.size(), signs.size());
  const ScalarTwoPoint S = two_point ? two_point : continuum_scalar_two_point(params.m);
  const int n = static_cast<int>(points.size());
  CorrelationMatrix C{Eigen::MatrixXcd::Identity(n, n)};
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const Vec4 y = {points[j][0] - points[k][0], points[j][1] - points[k][1],
                      points[j][2] - points[k][2], points[j][3] - points[k][3]};
      if (y == Vec4{0, 0, 0, 0}) throw std::invalid_argument("coincident points");
      const cplx c = params.l == 0.0 ? cplx(0.0) : coupling(signs[j], signs[k], params.l) * S(y);
      C.entries(j, k) = c;
      C.entries(k, j) = c;
    }
  }
  return C;
}

CorrelationMatrix build_A(const std::vector<ComplexPoint>& points, const std::vector<FieldSign>& signs,
                          const ModelParams& params) {
  check_sizes(points.size(), signs.size());
  const int n = static_cast<int>(points.size());
  for (int j = 1; j < n; ++j) {
    if (!(points[j].t.imag() > points[j - 1].t.imag())) {
      throw std::invalid_argument("points outside the tube: Im t must increase strictly");
    }
  }
  CorrelationMatrix A{Eigen::MatrixXcd::Identity(n, n)};
  if (params.l == 0.0) return A;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const cplx y0 = cplx(0.0, 1.0) * (points[j].t - points[k].t);
      double r2 = 0.0;
      for (int i = 0; i < 3; ++i) r2 += std::pow(points[j].x[i] - points[k].x[i], 2);
      const cplx a = coupling(signs[j], signs[k], params.l) * scalar_two_point_closed(params.m, y0, std::sqrt(r2));
      A.entries(j, k) = a;
      A.entries(k, j) = a;
    }
  }
  return A;
}

DetFactor det_inverse_sqrt(const CorrelationMatrix& C) {
  DetFactor f;
  f.det = C.det();
  f.p_n = f.det - 1.0;
  if (!(std::abs(f.p_n) < 1.0)) {
    std::ostringstream os;
    os << "|P_n| = " << std::abs(f.p_n) << " >= 1";
    throw AnalyticityError(os.str());
  }
  f.value = 1.0 / std::sqrt(f.det);
  return f;
}

namespace {

struct FieldOp {
  FieldSign sign;
  int spinor;
  cplx y0;
  std::array<double, 3> y;
};

// <psi_a(u) psibar_b(v)> = R_ab(u - v); <psibar_b(u) psi_a(v)> = -R_ab(v - u).
cplx contraction(const FieldOp& f, const FieldOp& g, double m_dirac) {
  if (f.sign == g.sign) return 0.0;
  const FieldOp& psi = f.sign == FieldSign::minus ? f : g;
  const FieldOp& bar = f.sign == FieldSign::minus ? g : f;
  const std::array<double, 3> d = {psi.y[0] - bar.y[0], psi.y[1] - bar.y[1], psi.y[2] - bar.y[2]};
  const cplx v = dirac_two_point_closed(m_dirac, psi.y0 - bar.y0, d)(psi.spinor, bar.spinor);
  return f.sign == FieldSign::minus ? v : -v;
}

cplx wick(std::vector<FieldOp>& ops, double m_dirac) {
  if (ops.empty()) return 1.0;
  const FieldOp first = ops.front();
  cplx total = 0.0;
  for (std::size_t k = 1; k < ops.size(); ++k) {
    const cplx c = contraction(first, ops[k], m_dirac);
    if (c == 0.0) continue;
    std::vector<FieldOp> rest;
    rest.reserve(ops.size() - 2);
    for (std::size_t i = 1; i < ops.size(); ++i) {
      if (i != k) rest.push_back(ops[i]);
    }
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
    total += sgn * c * wick(rest, m_dirac);
  }
  return total;
}

}  // namespace

cplx free_dirac_npoint(const std::vector<cplx>& y0, const std::vector<std::array<double, 3>>& y,
                       const std::vector<FieldSign>& signs, const std::vector<int>& spinors,
                       double m_dirac) {
  const std::size_t n = signs.size();
  if (y0.size() != n || y.size() != n || spinors.size() != n) {
    throw std::invalid_argument("field lists differ in length");
  }
  int balance = 0;
  std::vector<FieldOp> ops;
  for (std::size_t i = 0; i < n; ++i) {
    if (spinors[i] < 0 || spinors[i] > 3) throw std::out_of_range("spinor index must be in 0..3");
    balance += sign_value(signs[i]);
    ops.push_back({signs[i], spinors[i], y0[i], y[i]});
  }
  if (balance != 0) return 0.0;
  return wick(ops, m_dirac);
}

cplx npoint_schwinger(const std::vector<Vec4>& points, const std::vector<FieldSign>& signs,
                      const std::vector<int>& spinors, const ModelParams& params) {
  const DetFactor det = det_inverse_sqrt(build_C(points, signs, params));
  if (spinors.empty()) return det.value;
  std::vector<cplx> y0;
  std::vector<std::array<double, 3>> y;
  for (const auto& p : points) {
    y0.emplace_back(p[0]);
    y.push_back({p[1], p[2], p[3]});
  }
  return det.value * free_dirac_npoint(y0, y, signs, spinors, params.m_dirac);
}

cplx npoint_wightman(const WightmanConfig& cfg, const ModelParams& params) {
  const CorrelationMatrix A = build_A(cfg.points, cfg.signs, params);
  DetFactor det;
  try {
    det = det_inverse_sqrt(A);
  } catch (const AnalyticityError&) {
    int bj = 0;
    int bk = 1;
    double worst = -1.0;
    for (int j = 0; j < A.size(); ++j) {
      for (int k = j + 1; k < A.size(); ++k) {
        if (std::abs(A.entries(j, k)) > worst) {
          worst = std::abs(A.entries(j, k));
          bj = j;
          bk = k;
        }
      }
    }
    const auto& a = cfg.points[bj];
    const auto& b = cfg.points[bk];
    double dist2 = std::pow(a.t.real() - b.t.real(), 2);
    for (int i = 0; i < 3; ++i) dist2 += std::pow(a.x[i] - b.x[i], 2);
    throw AnalyticityError(pair_message(bj, bk, std::abs(a.t.imag() - b.t.imag()), std::sqrt(dist2)));
  }
  if (cfg.spinors.empty()) return det.value;
  std::vector<cplx> y0;
  std::vector<std::array<double, 3>> y;
  for (const auto& p : cfg.points) {
    y0.push_back(cplx(0.0, 1.0) * p.t);
    y.push_back(p.x);
  }
  return det.value * free_dirac_npoint(y0, y, cfg.signs, cfg.spinors, params.m_dirac);
}

HermitianPartner hermitian_partner(const WightmanConfig& cfg) {
  HermitianPartner h;
  const std::size_t n = cfg.points.size();
  for (std::size_t i = n; i-- > 0;) {
    h.config.points.push_back({std::conj(cfg.points[i].t), cfg.points[i].x});
    h.config.signs.push_back(conjugate(cfg.signs[i]));
  }
  for (std::size_t i = cfg.spinors.size(); i-- > 0;) {
    h.config.spinors.push_back(cfg.spinors[i]);
    h.phase *= gamma_euclidean(0)(cfg.spinors[i], cfg.spinors[i]).real();
  }
  return h;
}

namespace {

void require_spd(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() < 1 || L.rows() > 4) {
    throw std::invalid_argument("Gaussian identity needs a square matrix of size 1..4");
  }
  if (!L.isApprox(L.transpose(), 1e-12)) throw std::invalid_argument("Lambda must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  if (llt.info() != Eigen::Success) throw AnalyticityError("Lambda must be positive definite");
}

// Trapezoid sum of f over the box [-R, R]^n with step h on each axis.
template <class F>
cplx tensor_trapezoid(int n, double R, double h, F&& f) {
  const int half = static_cast<int>(std::ceil(R / h));
  const int side = 2 * half + 1;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  cplx acc = 0.0;
  Eigen::VectorXd x(n);
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (int i = 0; i < n; ++i) {
      x[i] = (static_cast<int>(r % side) - half) * h;
      r /= side;
    }
    acc += f(x);
  }
  return acc * std::pow(h, n);
}

struct GridSize {
  double R;
  double h;
};

GridSize grid_for(const Eigen::MatrixXd& L, double shift) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  return {11.0 / std::sqrt(lmin), 2.0 * std::numbers::pi / (shift + std::sqrt(100.0 * lmax))};
}

}  // namespace

IdentityCheck gaussian_identity_A(const Eigen::MatrixXd& Lambda, const Eigen::VectorXd& y) {
  require_spd(Lambda);
  const int n = static_cast<int>(Lambda.rows());
  if (y.size() != n) throw std::invalid_argument("y has the wrong dimension");
  const GridSize g = grid_for(Lambda, y.norm());
  const double pref = std::sqrt(Lambda.determinant()) * std::pow(2.0 * std::numbers::pi, -0.5 * n);
  const cplx quad = tensor_trapezoid(n, g.R, g.h, [&](const Eigen::VectorXd& x) {
    return std::exp(cplx(-0.5 * x.dot(Lambda * x), y.dot(x)));
  });
  IdentityCheck c;
  c.lhs = pref * quad;
  c.rhs = std::exp(-0.5 * y.dot(Lambda.llt().solve(y)));
  c.abs_diff = std::abs(c.lhs - c.rhs);
  return c;
}

IdentityCheck gaussian_identity_B(const Eigen::MatrixXd& Lambda, const Eigen::MatrixXd& A) {
  require_spd(Lambda);
  const int n = static_cast<int>(Lambda.rows());
  if (A.rows() != n || A.cols() != n) throw std::invalid_argument("A has the wrong dimension");
  const GridSize g = grid_for(Lambda, 0.0);
  const double pref = std::sqrt(Lambda.determinant()) * std::pow(2.0 * std::numbers::pi, -0.5 * n);
  const cplx quad = tensor_trapezoid(n, g.R, g.h, [&](const Eigen::VectorXd& x) {
    return cplx(x.dot(A * x) * std::exp(-0.5 * x.dot(Lambda * x)));
  });
  IdentityCheck c;
  c.lhs = pref * quad;
  c.rhs = (A * Lambda.inverse()).trace();
  c.abs_diff = std::abs(c.lhs - c.rhs);
  return c;
}

cplx wick_two_point(double l, double S) {
  const double c = 2.0 * l * l * S;
  if (!(std::abs(c) < 1.0)) throw AnalyticityError("|2 l^2 S| >= 1");
  return 1.0 / std::sqrt(cplx(1.0 - c * c));
}

cplx wick_two_point_quadrature(double l, double S) {
  const double c = 2.0 * l * l * S;
  if (!(std::abs(c) < 1.0)) throw AnalyticityError("|2 l^2 S| >= 1");
  const double R = 11.0 / std::sqrt(1.0 - std::abs(c));
  const double h = 0.5;
  const int half = static_cast<int>(std::ceil(R / h));
  double acc = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double t = i * h;
    double row = 0.0;
    for (int j = -half; j <= half; ++j) {
      const double s = j * h;
      row += std::exp(-0.5 * (t * t + s * s) - c * t * s);
    }
    acc += row;
  }
  return acc * h * h / (2.0 * std::numbers::pi);
}

}  // namespace qflat
