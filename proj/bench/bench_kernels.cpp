// Wall-clock comparison of the serial reference loops and the tree-reduced OpenMP kernels.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "qflat/dirac.hpp"
#include "qflat/reference.hpp"
#include "qflat/scalar.hpp"

namespace {

template <class F>
double seconds(F&& f, int repeats) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qflat;
  const int M = argc > 1 ? std::atoi(argv[1]) : 2;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const LatticeParams P = make_lattice(M, M);
  const LatticeSite x = nearest_site({1.0, 0.0, 0.0, 0.0}, P);
  std::printf("M=N=%d, %d threads, %llu sites\n", M, omp_get_max_threads(),
              static_cast<unsigned long long>(P.volume()));
  std::printf("%-34s %12s\n", "kernel", "seconds");
  volatile double sink = 0.0;
  auto row = [&](const char* name, double t) { std::printf("%-34s %12.6f\n", name, t); };
  row("scalar reference (serial)", seconds([&] { sink = sink + reference::scalar_propagator(P, 1.0, x).real(); }, repeats));
  row("scalar direct tree (serial)", seconds([&] { sink = sink + scalar_sum_direct(P, 1.0, x, Exec::serial).value.real(); }, repeats));
  row("scalar direct tree (parallel)", seconds([&] { sink = sink + scalar_sum_direct(P, 1.0, x, Exec::parallel).value.real(); }, repeats));
  row("scalar accelerated (parallel)", seconds([&] { sink = sink + scalar_sum_accelerated(P, 1.0, x).value.real(); }, repeats));
  row("dirac reference (serial)", seconds([&] { sink = sink + reference::dirac_propagator(P, 1.0, x)(0, 0).real(); }, repeats));
  row("dirac direct tree (parallel)", seconds([&] { sink = sink + dirac_sum_direct(P, 1.0, x).value(0, 0).real(); }, repeats));
  row("dirac accelerated (parallel)", seconds([&] { sink = sink + dirac_sum_accelerated(P, 1.0, x).value(0, 0).real(); }, repeats));
  return 0;
}
