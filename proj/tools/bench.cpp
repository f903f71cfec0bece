// dss_bench: timing comparison between the production kernels and their
// serial reference implementations, with a max-deviation cross-check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dss/metrics.hpp"
#include "dss/rx.hpp"
#include "dss/serial_ref.hpp"

using namespace dss;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_s();
    f();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

DualPolSymbolBlock random_block(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> amp(0, 3);
  std::uniform_int_distribution<int> sgn(0, 1);
  auto draw = [&] {
    return cplx((2 * amp(rng) + 1) * (sgn(rng) ? 1.0 : -1.0),
                (2 * amp(rng) + 1) * (sgn(rng) ? 1.0 : -1.0));
  };
  std::vector<cplx> p1(n), p2(n);
  for (std::size_t k = 0; k < n; ++k) {
    p1[k] = draw();
    p2[k] = draw();
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

}  // namespace

int main() {
  const std::size_t n = 4096;
  const int w = 32;
  const auto x = random_block(n, 7);

  std::printf("%-28s %12s %12s %9s %12s\n", "kernel", "serial_ms", "prod_ms",
              "speedup", "max_dev");

  {
    std::vector<double> a, b;
    const double ts = time_best_of(5, [&] { a = ref::windowed_energies(x, w); });
    const double tp =
        time_best_of(5, [&] { b = windowed_energies(x, EdiWindow(w)); });
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      dev = std::max(dev, std::fabs(a[i] - b[i]));
    std::printf("%-28s %12.3f %12.3f %8.2fx %12.3e\n", "windowed_energies",
                ts * 1e3, tp * 1e3, ts / tp, dev);
  }

  {
    double a = 0.0, b = 0.0;
    const double ts = time_best_of(5, [&] { a = ref::edi(x, w); });
    const double tp = time_best_of(5, [&] { b = edi(x, EdiWindow(w)); });
    std::printf("%-28s %12.3f %12.3f %8.2fx %12.3e\n", "edi", ts * 1e3, tp * 1e3,
                ts / tp, std::fabs(a - b));
  }

  {
    const auto small = random_block(1024, 11);
    DualPolSymbolBlock a, b;
    const double ts = time_best_of(3, [&] {
      a = ref::apply_dispersion(small, 17.0, 1550.0, 50.0, 205.0);
    });
    const double tp = time_best_of(3, [&] {
      b = apply_dispersion(small, 17.0, 1550.0, 50.0, 205.0);
    });
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dev = std::max(dev, std::abs(a.pol1[i] - b.pol1[i]));
      dev = std::max(dev, std::abs(a.pol2[i] - b.pol2[i]));
    }
    std::printf("%-28s %12.3f %12.3f %8.2fx %12.3e\n", "apply_dispersion (n=1024)",
                ts * 1e3, tp * 1e3, ts / tp, dev);
  }

  {
    std::vector<double> p_a = {0.45, 0.30, 0.17, 0.08};
    const auto c = Constellation2D::from_amplitude_distribution(
        PamAlphabet({1, 3, 5, 7}), p_a);
    auto noisy = x;
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 0.4);
    for (std::size_t k = 0; k < noisy.size(); ++k) {
      noisy.pol1[k] += cplx(g(rng), g(rng));
      noisy.pol2[k] += cplx(g(rng), g(rng));
    }
    double a = 0.0, b = 0.0;
    const double ts = time_best_of(3, [&] { a = ref::gmi_bmd(noisy, x, c); });
    const double tp = time_best_of(3, [&] { b = gmi_bmd(noisy, x, c); });
    std::printf("%-28s %12.3f %12.3f %8.2fx %12.3e\n", "gmi_bmd", ts * 1e3,
                tp * 1e3, ts / tp, std::fabs(a - b));
  }

  return 0;
}
