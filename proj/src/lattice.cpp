#include "qflat/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qflat {

std::uint64_t LatticeParams::volume() const {
  const std::uint64_t n = static_cast<std::uint64_t>(sites_per_axis());
  return n * n * n * n;
}

double LatticeParams::theta(int k) const { return std::numbers::pi * k / L; }

LatticeParams make_lattice(int M, int N) {
  if (M < 1 || N < 1) {
    throw std::invalid_argument("lattice requires M >= 1 and N >= 1, got M=" + std::to_string(M) +
                                " N=" + std::to_string(N));
  }
  LatticeParams p;
  p.M = M;
  p.N = N;
  p.L = M * N;
  const double sp = std::sqrt(std::numbers::pi);
  p.delta = sp / M;
  p.eta = sp / N;
  return p;
}

int wrap_coordinate(int j, const LatticeParams& params) {
  const int n = params.sites_per_axis();
  int r = ((j + params.L - 1) % n + n) % n;
  return r - params.L + 1;
}

Vec4 LatticeSite::position(const LatticeParams& params) const {
  return {j[0] * params.delta, j[1] * params.delta, j[2] * params.delta, j[3] * params.delta};
}

std::uint64_t LatticeSite::linear_index(const LatticeParams& params) const {
  const std::uint64_t n = static_cast<std::uint64_t>(params.sites_per_axis());
  std::uint64_t idx = 0;
  for (int mu = 0; mu < 4; ++mu) idx = idx * n + static_cast<std::uint64_t>(axis_index(j[mu], params));
  return idx;
}

namespace {
void check_range(const std::array<int, 4>& j, const LatticeParams& params, const char* what) {
  for (int mu = 0; mu < 4; ++mu) {
    if (j[mu] <= -params.L || j[mu] > params.L) {
      throw std::out_of_range(std::string(what) + " component " + std::to_string(mu) + " = " +
                              std::to_string(j[mu]) + " outside (-L, L] with L=" +
                              std::to_string(params.L));
    }
  }
}

std::array<int, 4> unpack(std::uint64_t index, const LatticeParams& params) {
  const std::uint64_t n = static_cast<std::uint64_t>(params.sites_per_axis());
  if (index >= params.volume()) throw std::out_of_range("lattice index out of range");
  std::array<int, 4> j{};
  for (int mu = 3; mu >= 0; --mu) {
    j[mu] = axis_coordinate(static_cast<int>(index % n), params);
    index /= n;
  }
  return j;
}
}  // namespace

LatticeSite make_site(const std::array<int, 4>& j, const LatticeParams& params) {
  check_range(j, params, "site");
  return LatticeSite{j};
}

LatticeSite site_from_index(std::uint64_t index, const LatticeParams& params) {
  return LatticeSite{unpack(index, params)};
}

LatticeSite shift_site(const LatticeSite& s, int mu, int step, const LatticeParams& params) {
  LatticeSite r = s;
  r.j[mu] = wrap_coordinate(s.j[mu] + step, params);
  return r;
}

LatticeSite nearest_site(const Vec4& x, const LatticeParams& params) {
  LatticeSite s;
  for (int mu = 0; mu < 4; ++mu) {
    s.j[mu] = wrap_coordinate(static_cast<int>(std::lround(x[mu] / params.delta)), params);
  }
  return s;
}

Vec4 MomentumPoint::momentum(const LatticeParams& params) const {
  return {k[0] * params.eta, k[1] * params.eta, k[2] * params.eta, k[3] * params.eta};
}

MomentumPoint make_momentum(const std::array<int, 4>& k, const LatticeParams& params) {
  check_range(k, params, "momentum");
  return MomentumPoint{k};
}

MomentumPoint momentum_from_index(std::uint64_t index, const LatticeParams& params) {
  return MomentumPoint{unpack(index, params)};
}

cplx forward_symbol(double theta, double delta) {
  const double s = std::sin(0.5 * theta);
  return cplx(std::sin(theta), -2.0 * s * s) / delta;
}

double laplacian_symbol(double theta, double delta) {
  const double s = std::sin(0.5 * theta);
  return 4.0 * s * s / (delta * delta);
}

std::array<cplx, 4> momentum_symbol_q(const MomentumPoint& p, const LatticeParams& params) {
  std::array<cplx, 4> q;
  for (int mu = 0; mu < 4; ++mu) q[mu] = forward_symbol(params.theta(p.k[mu]), params.delta);
  return q;
}

AxisTables make_axis_tables(const LatticeParams& params) {
  const int n = params.sites_per_axis();
  AxisTables t;
  t.laplacian.resize(n);
  t.q.resize(n);
  for (int i = 0; i < n; ++i) {
    const double th = params.theta(axis_coordinate(i, params));
    t.laplacian[i] = laplacian_symbol(th, params.delta);
    t.q[i] = forward_symbol(th, params.delta);
  }
  return t;
}

std::vector<cplx> phase_table(const LatticeParams& params) {
  const int n = params.sites_per_axis();
  const int period = 2 * params.L;
  std::vector<cplx> t(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const long prod = static_cast<long>(axis_coordinate(a, params)) * axis_coordinate(b, params);
      const long r = ((prod % period) + period) % period;
      const double ang = std::numbers::pi * static_cast<double>(r) / params.L;
      t[static_cast<std::size_t>(a) * n + b] = cplx(std::cos(ang), std::sin(ang));
    }
  }
  return t;
}

const Mat2& pauli(int i) {
  static const std::array<Mat2, 4> s = [] {
    std::array<Mat2, 4> m;
    const cplx I(0.0, 1.0);
    m[0] << 1.0, 0.0, 0.0, 1.0;
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] << 0.0, -I, I, 0.0;
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  if (i < 0 || i > 3) throw std::out_of_range("pauli index");
  return s[i];
}

SpinorMatrix block_matrix(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
  SpinorMatrix m;
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(0, 2) = b;
  m.block<2, 2>(2, 0) = c;
  m.block<2, 2>(2, 2) = d;
  return m;
}

const SpinorMatrix& gamma_euclidean(int mu) {
  static const std::array<SpinorMatrix, 4> g = [] {
    std::array<SpinorMatrix, 4> m;
    const cplx I(0.0, 1.0);
    const Mat2 z = Mat2::Zero();
    m[0] = block_matrix(pauli(0), z, z, -pauli(0));
    for (int j = 1; j <= 3; ++j) m[j] = block_matrix(z, -I * pauli(j), I * pauli(j), z);
    return m;
  }();
  if (mu < 0 || mu > 3) throw std::out_of_range("gamma index");
  return g[mu];
}

SpinorMatrix projector_plus() { return 0.5 * (SpinorMatrix::Identity() + gamma_euclidean(0)); }
SpinorMatrix projector_minus() { return 0.5 * (SpinorMatrix::Identity() - gamma_euclidean(0)); }

}  // namespace qflat
