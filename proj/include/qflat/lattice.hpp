#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qflat {

using cplx = std::complex<double>;
using Vec4 = std::array<double, 4>;
using SpinorMatrix = Eigen::Matrix<cplx, 4, 4>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;

// Periodic lattice with 2L sites per axis, L = M*N, spacing delta = sqrt(pi)/M
// and dual spacing eta = sqrt(pi)/N, so delta * eta * L = pi.
struct LatticeParams {
  int M = 1;
  int N = 1;
  int L = 1;
  double delta = 0.0;
  double eta = 0.0;

  int sites_per_axis() const { return 2 * L; }
  std::uint64_t volume() const;
  // Momentum angle p*delta for dual coordinate k in (-L, L].
  double theta(int k) const;
};

// Throws std::invalid_argument unless M, N >= 1.
LatticeParams make_lattice(int M, int N);

// Maps any integer to its representative in (-L, L].
int wrap_coordinate(int j, const LatticeParams& params);

// Axis storage index in [0, 2L) for a coordinate in (-L, L].
inline int axis_index(int j, const LatticeParams& params) { return j + params.L - 1; }
inline int axis_coordinate(int i, const LatticeParams& params) { return i - params.L + 1; }

// Site of the position lattice; components lie in (-L, L].
struct LatticeSite {
  std::array<int, 4> j{};
  Vec4 position(const LatticeParams& params) const;
  std::uint64_t linear_index(const LatticeParams& params) const;
};

// Throws std::out_of_range when a coordinate lies outside (-L, L].
LatticeSite make_site(const std::array<int, 4>& j, const LatticeParams& params);
LatticeSite site_from_index(std::uint64_t index, const LatticeParams& params);
LatticeSite shift_site(const LatticeSite& s, int mu, int step, const LatticeParams& params);
// Site nearest to a continuum point, wrapped into the box.
LatticeSite nearest_site(const Vec4& x, const LatticeParams& params);

// Dual-lattice momentum; components lie in (-L, L].
struct MomentumPoint {
  std::array<int, 4> k{};
  Vec4 momentum(const LatticeParams& params) const;
};

MomentumPoint make_momentum(const std::array<int, 4>& k, const LatticeParams& params);
MomentumPoint momentum_from_index(std::uint64_t index, const LatticeParams& params);

// Forward-difference symbol q(t) = (1 - exp(-i t delta)) / (i delta) at angle theta = t delta.
cplx forward_symbol(double theta, double delta);
std::array<cplx, 4> momentum_symbol_q(const MomentumPoint& p, const LatticeParams& params);
// (2 - 2 cos theta) / delta^2 = |q|^2.
double laplacian_symbol(double theta, double delta);

// Per-axis tables indexed by axis storage index.
struct AxisTables {
  std::vector<double> laplacian;  // (2 - 2cos) / delta^2
  std::vector<cplx> q;            // forward symbol
};
AxisTables make_axis_tables(const LatticeParams& params);

// exp(i k j pi / L) for storage indices of k and j.
std::vector<cplx> phase_table(const LatticeParams& params);

// Pauli matrices, index 0 is the identity.
const Mat2& pauli(int i);

// Euclidean gamma matrices: gamma_0 = diag(1, 1, -1, -1), gamma_j = [[0, -i s_j], [i s_j, 0]].
const SpinorMatrix& gamma_euclidean(int mu);
SpinorMatrix projector_plus();
SpinorMatrix projector_minus();

SpinorMatrix block_matrix(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d);

}  // namespace qflat
