#include "qflat/fourier.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace qflat {

namespace {

// Applies the 1D transform sum_b table(a, b) f(b) along each axis in turn.
LatticeField separable_transform(const LatticeField& in, const LatticeParams& params, bool conjugate,
                                 double scale) {
  if (in.size() != params.volume()) {
    throw std::invalid_argument("field has " + std::to_string(in.size()) + " entries, lattice has " +
                                std::to_string(params.volume()));
  }
  const std::size_t n = static_cast<std::size_t>(params.sites_per_axis());
  std::vector<cplx> table = phase_table(params);
  if (conjugate) {
    for (auto& t : table) t = std::conj(t);
  }
  LatticeField cur = in;
  LatticeField out(in.size());
  std::size_t stride = 1;
  for (int axis = 3; axis >= 0; --axis) {
    const std::size_t block = stride * n;
    const long outer = static_cast<long>(cur.size() / block);
#pragma omp parallel for
    for (long o = 0; o < outer; ++o) {
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = static_cast<std::size_t>(o) * block + s;
        for (std::size_t a = 0; a < n; ++a) {
          cplx acc = 0.0;
          for (std::size_t b = 0; b < n; ++b) acc += table[a * n + b] * cur[base + b * stride];
          out[base + a * stride] = acc;
        }
      }
    }
    cur.swap(out);
    stride = block;
  }
  for (auto& v : cur) v *= scale;
  return cur;
}

}  // namespace

LatticeField lattice_fourier_forward(const LatticeField& f, const LatticeParams& params) {
  const double d2 = params.delta * params.delta;
  const double scale = d2 * d2 / (4.0 * std::numbers::pi * std::numbers::pi);
  return separable_transform(f, params, true, scale);
}

LatticeField lattice_fourier_inverse(const LatticeField& F, const LatticeParams& params) {
  const double e2 = params.eta * params.eta;
  const double scale = e2 * e2 / (4.0 * std::numbers::pi * std::numbers::pi);
  return separable_transform(F, params, false, scale);
}

}  // namespace qflat
