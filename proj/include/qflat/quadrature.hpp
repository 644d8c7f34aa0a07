#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qflat {

using RealIntegrand = std::function<std::complex<double>(double)>;

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule; throws std::invalid_argument for n < 1.
GaussLegendreRule gauss_legendre(int n);

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Adaptive 7/15 Gauss-Kronrod over consecutive breakpoints; each panel is bisected
// until |K15 - G7| <= max(abs_tol, rel_tol * |panel|) or max_depth is reached.
QuadratureResult integrate_adaptive(const RealIntegrand& f, const std::vector<double>& breaks,
                                    double rel_tol = 1e-13, double abs_tol = 0.0,
                                    int max_depth = 30);

// Composite fixed-order Gauss-Legendre on every panel.
QuadratureResult integrate_composite_gl(const RealIntegrand& f, const std::vector<double>& breaks,
                                        int order);

}  // namespace qflat
