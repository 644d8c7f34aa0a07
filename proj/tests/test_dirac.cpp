#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <omp.h>

#include "qflat/dirac.hpp"
#include "qflat/reference.hpp"

using namespace qflat;

namespace {

double max_entry(const SpinorMatrix& A) { return A.cwiseAbs().maxCoeff(); }

template <class Fn>
void for_each_momentum(const LatticeParams& p, Fn&& fn) {
  for (std::uint64_t i = 0; i < p.volume(); ++i) fn(momentum_from_index(i, p));
}

}  // namespace

TEST_CASE("analytic inverse inverts the symbol at every dual momentum") {
  for (int M = 1; M <= 2; ++M) {
    for (int N = 1; N <= 2; ++N) {
      const LatticeParams p = make_lattice(M, N);
      double worst = 0.0;
      for_each_momentum(p, [&](const MomentumPoint& k) {
        const SpinorMatrix prod = momentum_inverse_analytic(k, 1.0, p) * dirac_symbol(k, 1.0, p).matrix;
        worst = std::max(worst, max_entry(prod - SpinorMatrix::Identity()));
        const SpinorMatrix lu = momentum_inverse_direct(k, 1.0, p);
        CHECK(max_entry(lu - momentum_inverse_analytic(k, 1.0, p)) < 1e-12 * max_entry(lu));
      });
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("K blocks: K = kappa - 2 w.sigma, eigenvalues kappa -+ 2 rho, partner is the adjugate") {
  const LatticeParams p = make_lattice(2, 2);
  for (std::uint64_t i = 0; i < p.volume(); i += 11) {
    const MomentumPoint k = momentum_from_index(i, p);
    const KappaRho kr = kappa_rho(k, 0.8, p);
    const Mat2 E = kr.w[0] * pauli(1) + kr.w[1] * pauli(2) + kr.w[2] * pauli(3);
    const double scale = std::max(1.0, kr.kappa);
    CHECK((kr.K - (kr.kappa * pauli(0) - 2.0 * E)).norm() < 1e-12 * scale);
    CHECK((kr.K - kr.K.adjoint()).norm() < 1e-12 * scale);
    Eigen::SelfAdjointEigenSolver<Mat2> es(kr.K);
    CHECK(es.eigenvalues()[0] == doctest::Approx(kr.kappa - 2.0 * kr.rho).epsilon(1e-12).scale(scale));
    CHECK(es.eigenvalues()[1] == doctest::Approx(kr.kappa + 2.0 * kr.rho).epsilon(1e-12).scale(scale));
    Mat2 adj;
    adj << kr.K(1, 1), -kr.K(0, 1), -kr.K(1, 0), kr.K(0, 0);
    CHECK((kr.K_partner - adj).norm() < 1e-12 * scale);
    CHECK((kr.K * kr.K_partner - kr.det() * pauli(0)).norm() < 1e-10 * scale * scale);
    CHECK(kr.det() > 0.0);
  }
}

TEST_CASE("rho is bounded by half the spatial symbol norm") {
  for (auto [M, N] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
    const LatticeParams p = make_lattice(M, N);
    for_each_momentum(p, [&](const MomentumPoint& k) {
      const auto q = momentum_symbol_q(k, p);
      const double q2 = std::norm(q[1]) + std::norm(q[2]) + std::norm(q[3]);
      const double rho = kappa_rho(k, 1.0, p).rho;
      CHECK(rho <= q2 / 2.0 * (1.0 + 1e-13) + 1e-300);
      CHECK(rho <= q2 / std::sqrt(2.0) * (1.0 + 1e-13) + 1e-300);
    });
  }
}

TEST_CASE("Dirac propagator: direct, accelerated, dense and reference agree on M=N=1") {
  const LatticeParams p = make_lattice(1, 1);
  for (double m : {0.5, 1.0, 2.5}) {
    const Eigen::MatrixXcd oracle = dense_dirac_oracle(p, m);
    for (std::uint64_t i = 0; i < p.volume(); ++i) {
      const LatticeSite x = site_from_index(i, p);
      const SpinorMatrix d = dirac_sum_direct(p, m, x).value;
      const double scale = max_entry(d);
      CHECK(max_entry(dirac_sum_accelerated(p, m, x).value - d) < 1e-10 * scale);
      CHECK(max_entry(dense_dirac_block(oracle, x, p) - d) < 1e-10 * scale);
      CHECK(max_entry(reference::dirac_propagator(p, m, x) - d) < 1e-12 * scale);
    }
  }
}

TEST_CASE("Dirac propagator matches frozen independent values") {
  // numpy full-lattice sum with per-momentum 4x4 inverses, M=N=1, m=1, x=(1,0,1,0).
  const LatticeParams p = make_lattice(1, 1);
  const LatticeSite x = make_site({1, 0, 1, 0}, p);
  const SpinorMatrix R = lattice_dirac_propagator(p, 1.0, x);
  const cplx off(0.004323500835791155, -0.002016952483755909);
  CHECK(std::abs(R(0, 0) - 0.055447136144962876) < 1e-14);
  CHECK(std::abs(R(0, 3) - off) < 1e-14);
  CHECK(std::abs(R(2, 1) - off) < 1e-14);
}

TEST_CASE("accelerated Dirac sum agrees with the direct sum on larger lattices") {
  const LatticeParams p = make_lattice(2, 1);
  for (std::uint64_t i = 0; i < p.volume(); i += 211) {
    const LatticeSite x = site_from_index(i, p);
    const SpinorSumResult d = dirac_sum_direct(p, 1.0, x);
    const SpinorSumResult a = dirac_sum_accelerated(p, 1.0, x);
    CHECK(max_entry(a.value - d.value) < 1e-10 * max_entry(d.value));
    CHECK(d.terms == a.terms * static_cast<std::uint64_t>(2 * p.L));
  }
}

TEST_CASE("Dirac kernels are bitwise identical across thread counts") {
  const LatticeParams p = make_lattice(2, 2);
  const LatticeSite x = make_site({1, 0, -1, 2}, p);
  const SpinorMatrix s = dirac_sum_accelerated(p, 1.0, x, Exec::serial).value;
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    CHECK(dirac_sum_accelerated(p, 1.0, x, Exec::parallel).value == s);
  }
  omp_set_num_threads(1);
}

TEST_CASE("dense Dirac operator has the expected shape and size guard") {
  const LatticeParams p = make_lattice(1, 1);
  const Eigen::MatrixXcd D = dense_dirac_operator(p, 1.0);
  CHECK(D.rows() == static_cast<Eigen::Index>(4 * p.volume()));
  CHECK(D.cols() == D.rows());
  CHECK_THROWS_AS(dense_dirac_oracle(make_lattice(2, 2), 1.0), std::length_error);
  CHECK_THROWS_AS(dense_dirac_oracle(p, 0.0), std::invalid_argument);
}

TEST_CASE("continuum Dirac propagator: quadrature, closed form and finite differences agree") {
  const double m = 1.0;
  for (Vec4 x : {Vec4{1.0, 0.0, 0.0, 0.0}, Vec4{0.7, 0.3, -0.4, 0.2}, Vec4{-1.2, 0.5, 0.0, 0.9}}) {
    const SpinorMatrix quad = continuum_dirac_schwinger(m, x);
    const SpinorMatrix closed = dirac_two_point_closed(m, x[0], {x[1], x[2], x[3]});
    CHECK(max_entry(quad - closed) < 1e-10 * max_entry(closed));

    const double h = 1e-4;
    SpinorMatrix fd = m * continuum_schwinger(m, x) * SpinorMatrix::Identity();
    for (int mu = 0; mu < 4; ++mu) {
      Vec4 xp = x;
      Vec4 xm = x;
      xp[mu] += h;
      xm[mu] -= h;
      const cplx d = (continuum_schwinger(m, xp) - continuum_schwinger(m, xm)) / (2.0 * h);
      fd -= d * gamma_euclidean(mu);
    }
    CHECK(max_entry(fd - quad) < 1e-6 * max_entry(quad));
  }
  CHECK_THROWS_AS(continuum_dirac_schwinger(m, {0.0, 1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("continuum Dirac propagator is trace-normalised by the scalar one") {
  const Vec4 x{0.9, 0.2, 0.1, -0.3};
  const double m = 1.7;
  const SpinorMatrix R = continuum_dirac_schwinger(m, x);
  CHECK(std::abs(R.trace() - 4.0 * m * continuum_schwinger(m, x)) < 1e-12 * std::abs(R.trace()));
}

TEST_CASE("zero-mode counts of the two discretizations") {
  for (int M : {2, 4}) {
    const LatticeParams p = make_lattice(M, M);
    CHECK(doubling_count(DiscretizationScheme::central, p) == 16);
    // Singular where q0 = 0 and rho = |q|^2 / 2: p = 0 and six further spatial momenta.
    const DoublingReport fb = doubling_scan(DiscretizationScheme::forward_backward, p);
    CHECK(fb.count == 7);
    for (const MomentumPoint& k : fb.zero_modes) {
      CHECK(k.k[0] == 0);
      const KappaRho kr = kappa_rho(k, 0.0, p);
      CHECK(kr.kappa == doctest::Approx(2.0 * kr.rho).epsilon(1e-10).scale(1.0 / (p.delta * p.delta)));
    }
    CHECK(doubling_count(DiscretizationScheme::forward_backward, p, 1.0) == 0);
  }
}

TEST_CASE("scheme names round trip and unknown names are rejected") {
  CHECK(parse_scheme("forward_backward") == DiscretizationScheme::forward_backward);
  CHECK(parse_scheme("fb") == DiscretizationScheme::forward_backward);
  CHECK(parse_scheme("central") == DiscretizationScheme::central);
  CHECK(parse_scheme(scheme_name(DiscretizationScheme::central)) == DiscretizationScheme::central);
  CHECK_THROWS_AS(parse_scheme("wilson"), std::invalid_argument);
}
