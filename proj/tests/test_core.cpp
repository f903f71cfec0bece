#include <doctest.h>

#include <cmath>

#include "dss/core.hpp"

using namespace dss;

TEST_CASE("dbm/mw conversions") {
  CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
  CHECK(dbm_to_mw(10.0) == doctest::Approx(10.0));
  CHECK(mw_to_dbm(dbm_to_mw(4.5)) == doctest::Approx(4.5));
}

TEST_CASE("dual-pol block energies") {
  DualPolSymbolBlock b({cplx(1, 1), cplx(3, -1)}, {cplx(-1, 0), cplx(0, 5)});
  CHECK(b.size() == 2);
  CHECK(b.symbol_energy(0) == doctest::Approx(3.0));
  CHECK(b.symbol_energy(1) == doctest::Approx(35.0));
  CHECK(b.total_energy() == doctest::Approx(38.0));
  CHECK_THROWS(DualPolSymbolBlock({cplx(1, 0)}, {}));
  CHECK_THROWS(DualPolSymbolBlock({}, {}));
}

TEST_CASE("power normalization") {
  SampledWaveform w;
  w.pol1 = {cplx(2, 0), cplx(0, 2)};
  w.pol2 = {cplx(2, 0), cplx(0, 2)};
  w.sample_rate_ghz = 100.0;
  auto out = normalize_power(w, 1.0);
  CHECK(out.mean_power_mw() == doctest::Approx(1.0));
  // scaling is a pure positive real factor: phase preserved
  CHECK(std::arg(out.pol1[1]) == doctest::Approx(std::arg(w.pol1[1])));

  SampledWaveform zero;
  zero.pol1 = {cplx(0, 0)};
  zero.pol2 = {cplx(0, 0)};
  CHECK_THROWS(normalize_power(zero, 1.0));
}

TEST_CASE("group-velocity dispersion from D") {
  // D=17 ps/nm/km at 1550 nm -> beta2 about -21.7 ps^2/km
  const double b2 = beta2_from_dispersion(17.0, 1550.0);
  CHECK(b2 == doctest::Approx(-17.0 * 1550.0 * 1550.0 /
                              (2.0 * M_PI * kSpeedOfLight)));
  CHECK(b2 == doctest::Approx(-21.68).epsilon(1e-3));
  CHECK(beta2_from_dispersion(0.0, 1550.0) == 0.0);
}

TEST_CASE("channel memory anchors") {
  CHECK(channel_memory(17.0, 1550.0, 55.0, 50.0, 205.0) == 76);
  CHECK(channel_memory(17.0, 1550.0, 15.125, 13.75, 2400.0) == 68);
  CHECK(channel_memory(17.0, 1550.0, 55.0, 50.0, 0.0) == 0);
  // memory grows monotonically with distance
  int prev = 0;
  for (double l : {100.0, 400.0, 1600.0, 6400.0}) {
    const int m = channel_memory(17.0, 1550.0, 55.0, 50.0, l);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("effective length") {
  const double le = effective_length_km(0.2, 205.0);
  CHECK(le > 21.5);
  CHECK(le < 22.0);
  // alpha -> 0 limit is the physical length
  CHECK(effective_length_km(1e-12, 205.0) == doctest::Approx(205.0));
  // long-fiber saturation at 1/alpha
  const double alpha = 0.2 * std::log(10.0) / 10.0;
  CHECK(effective_length_km(0.2, 1e5) == doctest::Approx(1.0 / alpha));
}
