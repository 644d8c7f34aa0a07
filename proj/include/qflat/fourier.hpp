#pragma once

#include <vector>

#include "qflat/lattice.hpp"

namespace qflat {

// Complex field over the 4D lattice in lexicographic site order.
using LatticeField = std::vector<cplx>;

// F(p) = (2 pi)^-2 sum_x exp(-i p x) f(x) delta^4.
LatticeField lattice_fourier_forward(const LatticeField& f, const LatticeParams& params);
// f(x) = (2 pi)^-2 sum_p exp(i p x) F(p) eta^4.
LatticeField lattice_fourier_inverse(const LatticeField& F, const LatticeParams& params);

}  // namespace qflat
