#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qflat/lattice.hpp"

namespace qflat {

// Raised when |P_n| >= 1 or a Gaussian identity leaves its domain.
class AnalyticityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// minus: psi, auxiliary phase exp(-i pi/4); plus: psi-bar, phase exp(+i pi/4).
enum class FieldSign { minus, plus };

int sign_value(FieldSign s);
FieldSign conjugate(FieldSign s);
FieldSign parse_sign(const std::string& s);

struct ModelParams {
  double l = 1.0;
  double m = 1.0;
  double m_dirac = 1.0;
};

// l / (sqrt(2) pi): for eps > this, sup |4 l^4 D(x0 - i eps, x)^2| < 1.
double fundamental_length(double l);

// Point (t, xvec) with complex time t = x0 - i eps.
struct ComplexPoint {
  cplx t;
  std::array<double, 3> x{};
};

// Euclidean two-point function of the auxiliary scalar, argument y = y_j - y_k.
using ScalarTwoPoint = std::function<cplx(const Vec4&)>;
ScalarTwoPoint continuum_scalar_two_point(double m);

struct CorrelationMatrix {
  Eigen::MatrixXcd entries;
  int size() const { return static_cast<int>(entries.rows()); }
  cplx det() const;
  cplx p_n() const { return det() - 1.0; }
};

// c_jk = 2 exp(i (r_j + r_k) pi/4) l^2 S(y_j - y_k), c_jj = 1.
CorrelationMatrix build_C(const std::vector<Vec4>& points, const std::vector<FieldSign>& signs,
                          const ModelParams& params, const ScalarTwoPoint& two_point = {});
// a_jk = 2 exp(i (r_j + r_k) pi/4) l^2 D(z_j - z_k) for j < k, symmetric, a_jj = 1.
// Requires Im t_j strictly increasing.
CorrelationMatrix build_A(const std::vector<ComplexPoint>& points, const std::vector<FieldSign>& signs,
                          const ModelParams& params);

struct DetFactor {
  cplx value;  // det^-1/2, principal branch
  cplx det;
  cplx p_n;
};

// Throws AnalyticityError when |P_n| >= 1.
DetFactor det_inverse_sqrt(const CorrelationMatrix& C);

// Free fermion n-point function by Wick expansion at complex Euclidean times y0.
// signs[j] minus = psi, plus = psi-bar; unequal counts give 0.
cplx free_dirac_npoint(const std::vector<cplx>& y0, const std::vector<std::array<double, 3>>& y,
                       const std::vector<FieldSign>& signs, const std::vector<int>& spinors,
                       double m_dirac);

// det C^-1/2 times the free Dirac factor; an empty spinor list gives the determinant factor alone.
cplx npoint_schwinger(const std::vector<Vec4>& points, const std::vector<FieldSign>& signs,
                      const std::vector<int>& spinors, const ModelParams& params);

struct WightmanConfig {
  std::vector<ComplexPoint> points;
  std::vector<FieldSign> signs;
  std::vector<int> spinors;
};

cplx npoint_wightman(const WightmanConfig& cfg, const ModelParams& params);

// Reversed, conjugated configuration with barred signs; its value is conj of the original
// times partner_phase.
struct HermitianPartner {
  WightmanConfig config;
  double phase = 1.0;
};
HermitianPartner hermitian_partner(const WightmanConfig& cfg);

struct IdentityCheck {
  cplx lhs;  // quadrature
  cplx rhs;  // closed form
  double abs_diff = 0.0;
};

// (2 pi)^-n/2 sqrt(det L) int exp(i y.x - x.L.x/2) dx = exp(-y.L^-1.y/2), n <= 4.
IdentityCheck gaussian_identity_A(const Eigen::MatrixXd& Lambda, const Eigen::VectorXd& y);
// (2 pi)^-n/2 sqrt(det L) int x.A.x exp(-x.L.x/2) dx = tr(A L^-1), n <= 4.
IdentityCheck gaussian_identity_B(const Eigen::MatrixXd& Lambda, const Eigen::MatrixXd& A);

// (1 - (2 l^2 S)^2)^-1/2; throws AnalyticityError when |2 l^2 S| >= 1.
cplx wick_two_point(double l, double S);
// (2 pi)^-1 int exp(-(t^2 + s^2)/2 - 2 l^2 S t s) dt ds by the trapezoid rule.
cplx wick_two_point_quadrature(double l, double S);

}  // namespace qflat
