#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dss/metrics.hpp"
#include "dss/serial_ref.hpp"

using namespace dss;

namespace {

// block whose 4D symbol energies are the given values (all energy on pol1 real)
DualPolSymbolBlock energy_block(const std::vector<double>& energies) {
  std::vector<cplx> p1, p2;
  for (double e : energies) {
    p1.push_back(cplx(std::sqrt(e), 0));
    p2.push_back(cplx(0, 0));
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
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

double total_energy(const DualPolSymbolBlock& b) { return b.total_energy(); }

}  // namespace

TEST_CASE("window and schedule validation") {
  CHECK_THROWS(EdiWindow(0));
  CHECK_THROWS(EdiWindow(3));   // odd
  CHECK_THROWS(EdiWindow(-2));
  CHECK_NOTHROW(EdiWindow(2));
  CHECK_THROWS(DispersionSchedule(17, 1550, 80, 50, {}));
  CHECK_THROWS(DispersionSchedule(17, 1550, 80, 50, {1, 0}));   // not ascending
  CHECK_THROWS(DispersionSchedule(17, 1550, 80, 50, {0, 0}));   // duplicate
  CHECK_THROWS(DispersionSchedule(17, 1550, 80, 50, {-1, 0}));
  CHECK_NOTHROW(DispersionSchedule(17, 1550, 80, 50, {0, 1, 29}));
}

TEST_CASE("windowed energies hand case") {
  const auto x = energy_block({1, 2, 3, 4});
  const auto g = windowed_energies(x, EdiWindow(2));
  REQUIRE(g.size() == 2);
  CHECK(g[0] == doctest::Approx(6.0));
  CHECK(g[1] == doctest::Approx(9.0));

  // constant-energy block: constant sums
  const auto c = windowed_energies(energy_block({2, 2, 2, 2, 2}), EdiWindow(2));
  for (double v : c) CHECK(v == doctest::Approx(6.0));

  // precondition L_s >= w + 2
  CHECK_THROWS(windowed_energies(energy_block({1, 2, 3}), EdiWindow(2)));
}

TEST_CASE("edi hand case and basic properties") {
  CHECK(edi(energy_block({1, 2, 3, 4}), EdiWindow(2)) == doctest::Approx(0.3));
  CHECK(edi(energy_block({5, 5, 5, 5, 5, 5}), EdiWindow(2)) ==
        doctest::Approx(0.0));

  // scaling all symbols by c multiplies EDI by c^2
  auto x = random_block(64, 3);
  auto y = x;
  for (auto& v : y.pol1) v *= 3.0;
  for (auto& v : y.pol2) v *= 3.0;
  CHECK(edi(y, EdiWindow(4)) == doctest::Approx(9.0 * edi(x, EdiWindow(4))));

  // zero-energy block is rejected
  std::vector<cplx> z(8, cplx(0, 0));
  CHECK_THROWS(edi(DualPolSymbolBlock(z, z), EdiWindow(2)));
}

TEST_CASE("population variance convention") {
  // L_s=4 with w=2 gives a 2-element G=(g1,g2); EDI must equal
  // ((g1-g2)/2)^2 * 2/(g1+g2) exactly
  const auto x = energy_block({1, 5, 2, 7});
  const auto g = windowed_energies(x, EdiWindow(2));
  const double expect =
      std::pow((g[0] - g[1]) / 2.0, 2) * 2.0 / (g[0] + g[1]);
  CHECK(edi(x, EdiWindow(2)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("dispersion operator properties") {
  const auto x = random_block(108, 11);

  // z=0 is the identity
  const auto id = apply_dispersion(x, 17, 1550, 50, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK(std::abs(id.pol1[k] - x.pol1[k]) < 1e-14);
    CHECK(std::abs(id.pol2[k] - x.pol2[k]) < 1e-14);
  }

  // constant block only occupies the DC bin: unchanged
  std::vector<cplx> c1(32, cplx(1, 2)), c2(32, cplx(-3, 1));
  const DualPolSymbolBlock cb(c1, c2);
  const auto cd = apply_dispersion(cb, 17, 1550, 50, 500.0);
  for (std::size_t k = 0; k < cb.size(); ++k)
    CHECK(std::abs(cd.pol1[k] - cb.pol1[k]) < 1e-12);

  // energy conservation and inverse
  for (double z : {21.7, 205.0, 2400.0}) {
    const auto y = apply_dispersion(x, 17, 1550, 50, z);
    CHECK(total_energy(y) ==
          doctest::Approx(total_energy(x)).epsilon(1e-12));
    const auto back = apply_dispersion(y, 17, 1550, 50, -z);
    double dev = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      dev = std::max(dev, std::abs(back.pol1[k] - x.pol1[k]));
    CHECK(dev < 1e-12 * std::sqrt(total_energy(x)));
  }

  // composition in z
  const auto ab = apply_dispersion(apply_dispersion(x, 17, 1550, 50, 80.0), 17,
                                   1550, 50, 125.0);
  const auto once = apply_dispersion(x, 17, 1550, 50, 205.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    CHECK(std::abs(ab.pol1[k] - once.pol1[k]) < 1e-11);

  // D=0 is the identity
  const auto d0 = apply_dispersion(x, 0, 1550, 50, 1000.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    CHECK(std::abs(d0.pol1[k] - x.pol1[k]) < 1e-12);
}

TEST_CASE("d_edi definition consistency") {
  const auto x = random_block(108, 17);
  const EdiWindow w(2);

  // schedule {0} equals edi bit-for-bit
  CHECK(d_edi(x, w, DispersionSchedule(17, 1550, 80, 50, {0})) == edi(x, w));

  // singleton {N} equals edi of the dispersed block
  const auto disp = apply_dispersion(x, 17, 1550, 50, 5 * 80.0);
  CHECK(d_edi(x, w, DispersionSchedule(17, 1550, 80, 50, {5})) ==
        doctest::Approx(edi(disp, w)).epsilon(1e-14));

  // contiguous schedule is the mean of per-span EDIs (brute force)
  std::vector<int> idx;
  double sum = 0.0;
  for (int n = 0; n < 30; ++n) {
    idx.push_back(n);
    sum += edi(apply_dispersion(x, 17, 1550, 50, n * 80.0), w);
  }
  CHECK(d_edi(x, w, DispersionSchedule(17, 1550, 80, 50, idx)) ==
        doctest::Approx(sum / 30.0).epsilon(1e-12));
}

TEST_CASE("single-span d_edi variant") {
  const auto x = random_block(108, 23);
  const EdiWindow w(2);

  // explicit formula with the effective length
  const double leff = effective_length_km(0.2, 205.0);
  CHECK(leff == doctest::Approx(21.7).epsilon(0.02));
  const double expect =
      0.5 * (edi(x, w) + edi(apply_dispersion(x, 17, 1550, 50, leff), w));
  CHECK(d_edi_single_span(x, w, 17, 1550, 50, 0.2, 205.0) ==
        doctest::Approx(expect).epsilon(1e-14));

  // zero dispersion: reduces to plain EDI
  CHECK(d_edi_single_span(x, w, 0, 1550, 50, 0.2, 205.0) ==
        doctest::Approx(edi(x, w)).epsilon(1e-12));
}

TEST_CASE("edi is sign-independent, d_edi is not") {
  const auto x = random_block(108, 31);
  auto flipped = x;
  flipped.pol1[40] = cplx(-flipped.pol1[40].real(), flipped.pol1[40].imag());

  const EdiWindow w(2);
  CHECK(edi(flipped, w) == edi(x, w));  // exact: energies unchanged

  const DispersionSchedule sched(17, 1550, 80, 50, {0, 1});
  CHECK(std::abs(d_edi(flipped, w, sched) - d_edi(x, w, sched)) > 1e-9);
}

TEST_CASE("serial reference kernels agree with production kernels") {
  const auto x = random_block(200, 41);
  for (int w : {2, 8, 32}) {
    const auto a = ref::windowed_energies(x, w);
    const auto b = windowed_energies(x, EdiWindow(w));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    CHECK(ref::edi(x, w) == doctest::Approx(edi(x, EdiWindow(w))).epsilon(1e-12));
  }
  const auto a = ref::apply_dispersion(x, 17, 1550, 50, 205.0);
  const auto b = apply_dispersion(x, 17, 1550, 50, 205.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK(std::abs(a.pol1[k] - b.pol1[k]) < 1e-9);
    CHECK(std::abs(a.pol2[k] - b.pol2[k]) < 1e-9);
  }
}
