#pragma once

#include "qflat/lattice.hpp"

// Straightforward serial loops over the full dual lattice. They share no code with the
// tree-reduced kernels and serve as oracles and benchmark baselines.
namespace qflat::reference {

cplx scalar_propagator(const LatticeParams& params, double m, const LatticeSite& x);

// Each momentum inverted by a generic LU solve of the 4x4 symbol.
SpinorMatrix dirac_propagator(const LatticeParams& params, double m_dirac, const LatticeSite& x);

}  // namespace qflat::reference
