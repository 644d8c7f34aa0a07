#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qflat/contour.hpp"
#include "qflat/scalar.hpp"

using namespace qflat;

namespace {

ContourSpec spec_with(double eps, int nodes) {
  ContourSpec s;
  s.epsilon = eps;
  s.nodes_per_axis = nodes;
  return s;
}

}  // namespace

TEST_CASE("reflected conjugate satisfies f*(z) = conj f(-conj z)") {
  const GaussianTestFunction f({cplx(0.2, 0.1), 1.0, cplx(-0.3, 0.4), 0.0}, 0.8,
                               {{cplx(1.0, 0.5), {1, 0, 0, 0}}, {cplx(-0.2, 0.0), {0, 2, 1, 0}}, {2.0, {}}});
  const GaussianTestFunction g = f.reflected_conjugate();
  std::mt19937 rng(3u);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    std::array<cplx, 4> z;
    std::array<cplx, 4> w;
    for (int mu = 0; mu < 4; ++mu) {
      z[mu] = cplx(u(rng), u(rng));
      w[mu] = -std::conj(z[mu]);
    }
    CHECK(std::abs(g(z) - std::conj(f(w))) < 1e-14 * (1.0 + std::abs(g(z))));
  }
  CHECK(std::isfinite(f.decay_certificate()));
  CHECK(f.k_max() == doctest::Approx(8.0));
  CHECK_THROWS_AS(GaussianTestFunction({0.0, 0.0, 0.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianTestFunction({0.0, 0.0, 0.0, 0.0}, 1.0, {{1.0, {0, -1, 0, 0}}}), std::invalid_argument);
}

TEST_CASE("default test functions sit off the light cone of the origin") {
  for (double l : {0.0, 1.0}) {
    const GaussianTestFunction f = default_test_function(l);
    const double r = std::abs(f.center()[1]);
    CHECK(r / f.sigma() >= 3.0);
    CHECK(f.k_max() >= 2.0);
  }
}

TEST_CASE("contour functional validates the shift") {
  const GaussianTestFunction f = default_test_function(1.0);
  TwoPointKernel k;
  k.kind = KernelKind::rho;
  k.params = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(eval_two_point_functional(k, f, spec_with(0.0, 8)), std::domain_error);
  CHECK_THROWS_AS(eval_two_point_functional(k, f, spec_with(f.k_max() * 1.01, 8)), std::domain_error);
  CHECK_THROWS_AS(eval_two_point_functional(k, f, spec_with(fundamental_length(1.0), 8)), AnalyticityError);
  k.alpha = 4;
  k.kind = KernelKind::dirac_component;
  CHECK_THROWS_AS(eval_two_point_functional(k, f, spec_with(0.5, 8)), std::out_of_range);
}

TEST_CASE("free rho kernel integrates the test function exactly") {
  const GaussianTestFunction f = default_test_function(1.0);
  TwoPointKernel k;
  k.kind = KernelKind::rho;
  k.params = {0.0, 1.0, 1.0};
  const double sigma = f.sigma();
  const double exact = std::pow(std::numbers::pi * sigma * sigma, 2);
  for (double eps : {0.3, 0.6}) {
    const cplx v = eval_two_point_functional(k, f, spec_with(eps, 48));
    CHECK(std::abs(v - exact) < 1e-8 * exact);
  }
}

TEST_CASE("kernels match their scalar and Dirac building blocks") {
  TwoPointKernel k;
  k.params = {0.5, 1.0, 1.3};
  const cplx z0(0.4, -0.5);
  const std::array<double, 3> x{0.3, -0.2, 0.6};
  const double r = std::sqrt(0.49);
  const cplx D = scalar_two_point_closed(k.params.m, cplx(0.0, 1.0) * z0, r);
  const cplx det = 1.0 / std::sqrt(1.0 - 4.0 * std::pow(k.params.l, 4) * D * D);
  k.kind = KernelKind::rho;
  CHECK(std::abs(k(z0, x) - det) < 1e-14);
  k.kind = KernelKind::scalar_pair;
  CHECK(std::abs(k(z0, x) - det * D) < 1e-14 * std::abs(D));
}

TEST_CASE("Hermitian partner of the Dirac kernel swaps indices and carries the gamma_0 phase") {
  TwoPointKernel k;
  k.kind = KernelKind::dirac_component;
  k.alpha = 0;
  k.beta = 3;
  double phase = 0.0;
  const TwoPointKernel h = k.hermitian_partner(&phase);
  CHECK(h.alpha == 3);
  CHECK(h.beta == 0);
  CHECK(phase == -1.0);
  k.kind = KernelKind::scalar_pair;
  k.hermitian_partner(&phase);
  CHECK(phase == 1.0);
}

TEST_CASE("pairings obey the reflection relation on a coarse grid") {
  const GaussianTestFunction f({cplx(0.1, 0.05), 1.4, -0.2, 0.3}, 0.5, {{cplx(1.0, -0.4), {1, 1, 0, 0}}, {0.5, {}}});
  for (KernelKind kind : {KernelKind::scalar_pair, KernelKind::dirac_component}) {
    TwoPointKernel k;
    k.kind = kind;
    k.params = {1.0, 1.0, 1.0};
    k.alpha = 1;
    k.beta = 2;
    double phase = 1.0;
    const TwoPointKernel h = k.hermitian_partner(&phase);
    const ContourSpec spec = spec_with(0.5, 24);
    const cplx lhs = std::conj(eval_two_point_functional(k, f, spec));
    const cplx rhs = phase * eval_two_point_functional(h, f.reflected_conjugate(), spec);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("interacting functional is independent of the contour shift") {
  TwoPointKernel k;
  k.kind = KernelKind::scalar_pair;
  k.params = {1.0, 1.0, 1.0};
  const double ell = fundamental_length(1.0);
  const auto rows = contour_invariance_report(k, default_test_function(1.0), {2.0 * ell, 3.0 * ell}, 48);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rel_dev == 0.0);
  CHECK(rows[1].rel_dev < 1e-5);
}

TEST_CASE("threshold probe respects the analytic bound above the fundamental length") {
  const double ell = fundamental_length(1.0);
  const auto rows = threshold_probe(1.0, 1.0, {2.0 * ell, 0.5 * ell});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].max_abs < 1.0);
  CHECK(rows[0].max_abs <= 1.0 / 16.0 + 1e-10);
  // Below the fundamental length the bound fails near the origin.
  CHECK(rows[1].max_abs > 1.0);
  CHECK(rows[1].argmax[0] == doctest::Approx(0.0));
  CHECK(rows[1].argmax[1] == doctest::Approx(0.0));
}
