#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <omp.h>

#include "qflat/fourier.hpp"
#include "qflat/lattice.hpp"
#include "qflat/reduce.hpp"

using namespace qflat;

TEST_CASE("lattice parameters satisfy delta * eta * L = pi") {
  for (int M = 1; M <= 4; ++M) {
    for (int N = 1; N <= 4; ++N) {
      const LatticeParams p = make_lattice(M, N);
      CHECK(p.L == M * N);
      CHECK(p.delta * p.eta * p.L == doctest::Approx(std::numbers::pi).epsilon(1e-15));
      CHECK(p.sites_per_axis() == 2 * M * N);
    }
  }
  CHECK_THROWS_AS(make_lattice(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(1, -2), std::invalid_argument);
}

TEST_CASE("coordinates wrap into (-L, L]") {
  const LatticeParams p = make_lattice(1, 2);
  CHECK(wrap_coordinate(2, p) == 2);
  CHECK(wrap_coordinate(3, p) == -1);
  CHECK(wrap_coordinate(-2, p) == 2);
  CHECK(wrap_coordinate(-1, p) == -1);
  CHECK(wrap_coordinate(6, p) == 2);
  CHECK_THROWS_AS(make_site({0, 0, 3, 0}, p), std::out_of_range);
  CHECK_THROWS_AS(make_site({-2, 0, 0, 0}, p), std::out_of_range);
  CHECK_THROWS_AS(make_momentum({0, 0, 0, 5}, p), std::out_of_range);
}

TEST_CASE("site index is lexicographic and invertible") {
  const LatticeParams p = make_lattice(1, 2);
  for (std::uint64_t i = 0; i < p.volume(); i += 7) {
    CHECK(site_from_index(i, p).linear_index(p) == i);
  }
  CHECK(make_site({-1, -1, -1, -1}, p).linear_index(p) == 0);
  CHECK(make_site({-1, -1, -1, 0}, p).linear_index(p) == 1);
  CHECK(make_site({2, 2, 2, 2}, p).linear_index(p) == p.volume() - 1);
}

TEST_CASE("forward symbol matches its definition and cosine bounds") {
  const LatticeParams p = make_lattice(2, 3);
  for (int k = -p.L + 1; k <= p.L; ++k) {
    const double th = p.theta(k);
    const cplx expected = (1.0 - std::exp(cplx(0.0, -th))) / (cplx(0.0, 1.0) * p.delta);
    const cplx q = forward_symbol(th, p.delta);
    CHECK(std::abs(q - expected) < 1e-14 / p.delta);
    CHECK(std::norm(q) == doctest::Approx(laplacian_symbol(th, p.delta)).epsilon(1e-13));
    const double mom = k * p.eta;
    CHECK(laplacian_symbol(th, p.delta) >= 4.0 / (std::numbers::pi * std::numbers::pi) * mom * mom * (1 - 1e-14));
    CHECK(laplacian_symbol(th, p.delta) <= mom * mom * (1 + 1e-14));
  }
}

TEST_CASE("gamma matrices satisfy the Euclidean Clifford algebra") {
  for (int mu = 0; mu < 4; ++mu) {
    CHECK((gamma_euclidean(mu).adjoint() - gamma_euclidean(mu)).norm() < 1e-15);
    for (int nu = 0; nu < 4; ++nu) {
      const SpinorMatrix ac = gamma_euclidean(mu) * gamma_euclidean(nu) + gamma_euclidean(nu) * gamma_euclidean(mu);
      const SpinorMatrix expect = (mu == nu ? 2.0 : 0.0) * SpinorMatrix::Identity();
      CHECK((ac - expect).norm() < 1e-15);
    }
  }
  const SpinorMatrix pp = projector_plus();
  const SpinorMatrix pm = projector_minus();
  CHECK((pp * pp - pp).norm() < 1e-15);
  CHECK((pm * pm - pm).norm() < 1e-15);
  CHECK((pp * pm).norm() < 1e-15);
  CHECK((pp + pm - SpinorMatrix::Identity()).norm() < 1e-15);
}

TEST_CASE("Pauli matrices obey s_j s_k = delta_jk + i eps_jkl s_l") {
  const cplx I(0.0, 1.0);
  CHECK((pauli(1) * pauli(2) - I * pauli(3)).norm() < 1e-15);
  CHECK((pauli(2) * pauli(3) - I * pauli(1)).norm() < 1e-15);
  CHECK((pauli(3) * pauli(1) - I * pauli(2)).norm() < 1e-15);
  CHECK_THROWS_AS(pauli(4), std::out_of_range);
}

namespace {
LatticeField random_field(const LatticeParams& p, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  LatticeField f(p.volume());
  for (auto& v : f) v = cplx(g(rng), g(rng));
  return f;
}
}  // namespace

TEST_CASE("lattice Fourier transform round trips and obeys Parseval") {
  for (auto [M, N] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
    const LatticeParams p = make_lattice(M, N);
    const LatticeField f = random_field(p, 11u + M + N);
    const LatticeField F = lattice_fourier_forward(f, p);
    const LatticeField g = lattice_fourier_inverse(F, p);
    double err = 0.0;
    double nx = 0.0;
    double np_ = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(f[i] - g[i]));
      nx += std::norm(f[i]);
      np_ += std::norm(F[i]);
    }
    CHECK(err < 1e-12);
    // sum_x |f|^2 delta^4 = sum_p |F|^2 eta^4
    const double d4 = std::pow(p.delta, 4);
    const double e4 = std::pow(p.eta, 4);
    CHECK(nx * d4 == doctest::Approx(np_ * e4).epsilon(1e-12));
  }
}

TEST_CASE("Fourier transform of a delta is a constant plane wave") {
  const LatticeParams p = make_lattice(1, 2);
  LatticeField f(p.volume(), 0.0);
  const LatticeSite s = make_site({1, 0, -1, 2}, p);
  f[s.linear_index(p)] = 1.0;
  const LatticeField F = lattice_fourier_forward(f, p);
  const double norm = std::pow(p.delta, 4) / (4.0 * std::numbers::pi * std::numbers::pi);
  for (std::uint64_t i = 0; i < p.volume(); i += 5) {
    const MomentumPoint k = momentum_from_index(i, p);
    double phase = 0.0;
    for (int mu = 0; mu < 4; ++mu) phase -= k.k[mu] * s.j[mu] * std::numbers::pi / p.L;
    CHECK(std::abs(F[i] - norm * std::polar(1.0, phase)) < 1e-15);
  }
  CHECK_THROWS_AS(lattice_fourier_forward(LatticeField(3), p), std::invalid_argument);
}

TEST_CASE("tree sum is bitwise independent of thread count") {
  const std::size_t n = 100003;
  auto term = [](std::size_t i) { return cplx(std::sin(0.001 * i), 1.0 / (1.0 + i)); };
  const cplx serial = tree_sum(n, cplx(0.0), term, Exec::serial);
  for (int threads : {1, 2, 3, 7}) {
    omp_set_num_threads(threads);
    const cplx par = tree_sum(n, cplx(0.0), term, Exec::parallel);
    CHECK(par.real() == serial.real());
    CHECK(par.imag() == serial.imag());
  }
  omp_set_num_threads(1);
  double naive = 0.0;
  for (std::size_t i = 0; i < n; ++i) naive += term(i).real();
  CHECK(serial.real() == doctest::Approx(naive).epsilon(1e-13));
  CHECK(tree_sum(0, 0.0, [](std::size_t) { return 1.0; }) == 0.0);
}
