// Serial vs parallel timings of the fiber-parallel kernels.
#include <chrono>
#include <cstdio>
#include <functional>

#include "bloch/bloch.hpp"

using namespace bloch;

namespace {

double seconds(const std::function<void()>& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<void(Exec)>& f) {
  const double s = seconds([&] { f(Exec::Serial); });
  const double p = seconds([&] { f(Exec::Parallel); });
  std::printf("%-34s %10.4f %10.4f %8.2fx\n", name, s, p, s / p);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");
  const OperatorSpec cos1 = preset("cos-1d");
  const OperatorSpec board = preset("checkerboard-2d");
  row("band_sweep checkerboard G=16 K=4", [&](Exec e) { band_sweep(board, 16, 4, 6, e); });
  row("band_sweep cos-1d G=512 K=24", [&](Exec e) { band_sweep(cos1, 512, 24, 6, e); });
  row("kernel_line cos-1d Q=64 P=16", [&](Exec e) { kernel_line(cos1, 0.5, 2, 64, 16, 16, e); });
  row("refined_spectrum cos-1d N=64", [&](Exec e) { refined_spectrum(cos1, {0.3}, 64, 12, -1, e); });
  row("homog_convergence cos-1d m<=16", [&](Exec e) {
    homog_convergence(cos1, Quasimomentum{{0.7}}, 0.5, {1, 2, 4, 8, 16}, 12, e);
  });
  return 0;
}
