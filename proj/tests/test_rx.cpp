#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dss/channel.hpp"
#include "dss/rx.hpp"

using namespace dss;

namespace {

DualPolSymbolBlock random_symbols(std::size_t n, std::uint64_t seed) {
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

// draw 2D symbols from the constellation's own distribution
DualPolSymbolBlock constellation_symbols(const Constellation2D& c, std::size_t n,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> dist(c.probs.begin(), c.probs.end());
  std::vector<cplx> p1(n), p2(n);
  for (std::size_t k = 0; k < n; ++k) {
    p1[k] = c.points[dist(rng)];
    p2[k] = c.points[dist(rng)];
  }
  return DualPolSymbolBlock(std::move(p1), std::move(p2));
}

DualPolSymbolBlock add_awgn(const DualPolSymbolBlock& x, double sigma2_per_2d,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(sigma2_per_2d / 2.0));
  auto y = x;
  for (std::size_t k = 0; k < y.size(); ++k) {
    y.pol1[k] += cplx(g(rng), g(rng));
    y.pol2[k] += cplx(g(rng), g(rng));
  }
  return y;
}

double max_symbol_dev(const DualPolSymbolBlock& a, const DualPolSymbolBlock& b) {
  double dev = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dev = std::max(dev, std::abs(a.pol1[k] - b.pol1[k]));
    dev = std::max(dev, std::abs(a.pol2[k] - b.pol2[k]));
  }
  return dev;
}

// Independent numerical-integration oracle for per-2D GMI over an AWGN
// channel: tensor Simpson grid in (re, im) around each transmitted point.
double gmi_2d_quadrature(const Constellation2D& c, double sigma2) {
  const int nq = 121;       // Simpson nodes per axis (odd)
  const double span = 7.0;  // +/- 7 sigma per real dimension
  const double sig = std::sqrt(sigma2 / 2.0);
  const double h = 2.0 * span * sig / (nq - 1);
  std::vector<double> node(nq), wgt(nq);
  for (int i = 0; i < nq; ++i) {
    node[i] = -span * sig + i * h;
    wgt[i] = (i == 0 || i == nq - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    wgt[i] *= h / 3.0;
  }

  double h_x = 0.0;
  for (double p : c.probs)
    if (p > 0) h_x -= p * std::log2(p);

  double loss = 0.0;
  for (std::size_t xi = 0; xi < c.points.size(); ++xi) {
    if (c.probs[xi] == 0.0) continue;
    double acc = 0.0;
    for (int a = 0; a < nq; ++a) {
      for (int b = 0; b < nq; ++b) {
        const cplx y = c.points[xi] + cplx(node[a], node[b]);
        const double pdf = std::exp(-(node[a] * node[a] + node[b] * node[b]) /
                                    (2.0 * sig * sig)) /
                           (2.0 * M_PI * sig * sig);
        // bitwise BMD loss at this y
        double term = 0.0;
        for (int bit = 0; bit < 6; ++bit) {
          const unsigned want = (c.labels[xi] >> (5 - bit)) & 1u;
          double num = 0.0, den = 0.0;
          for (std::size_t j = 0; j < c.points.size(); ++j) {
            const double q =
                c.probs[j] * std::exp(-std::norm(y - c.points[j]) / sigma2);
            num += q;
            if (((c.labels[j] >> (5 - bit)) & 1u) == want) den += q;
          }
          term += std::log2(num / den);
        }
        acc += wgt[a] * wgt[b] * pdf * term;
      }
    }
    loss += c.probs[xi] * acc;
  }
  return std::max(0.0, h_x - loss);
}

}  // namespace

TEST_CASE("extract and match") {
  const auto x = random_symbols(256, 3);
  // back to back
  CHECK(max_symbol_dev(extract_and_match(rrc_shape(x, 0.1, 2, 50.0), 0.0, 50.0, 0.1),
                       x) < 1e-9);

  // two disjoint channels: extract the second
  const auto x2 = random_symbols(256, 4);
  const auto mux = frequency_mux(
      {rrc_shape(x, 0.1, 8, 10.0), rrc_shape(x2, 0.1, 8, 10.0)}, {-15.0, 15.0});
  const auto got = extract_and_match(mux, 15.0, 10.0, 0.1);
  CHECK(max_symbol_dev(got, x2) < 1e-6);

  // band outside the grid
  CHECK_THROWS(extract_and_match(mux, 78.0, 10.0, 0.1));
}

TEST_CASE("cdc") {
  auto w = rrc_shape(random_symbols(256, 5), 0.1, 2, 50.0);
  FiberParams fiber;
  fiber.alpha_db_per_km = 0.0;
  fiber.gamma_w_km = 0.0;
  fiber.length_km = 205.0;
  const auto prop = ssfm_propagate(w, fiber, 0.5, 0);
  const auto comp = cdc(prop, 17.0, 1550.0, 205.0);
  double dev = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    dev = std::max(dev, std::abs(comp.pol1[k] - w.pol1[k]));
  CHECK(dev < 1e-9 * 10);

  // z then -z
  const auto twice = cdc(cdc(w, 17.0, 1550.0, 500.0), 17.0, 1550.0, -500.0);
  CHECK(max_symbol_dev(DualPolSymbolBlock(twice.pol1, twice.pol2),
                       DualPolSymbolBlock(w.pol1, w.pol2)) < 1e-12 * 10);

  // z=0 identity
  const auto id = cdc(w, 17.0, 1550.0, 0.0);
  CHECK(max_symbol_dev(DualPolSymbolBlock(id.pol1, id.pol2),
                       DualPolSymbolBlock(w.pol1, w.pol2)) < 1e-13);
}

TEST_CASE("genie equalizer") {
  const auto x = random_symbols(512, 7);

  // constant unitary polarization rotation
  const double th = 0.7;
  auto y = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    y.pol1[k] = std::cos(th) * x.pol1[k] + std::sin(th) * x.pol2[k];
    y.pol2[k] = -std::sin(th) * x.pol1[k] + std::cos(th) * x.pol2[k];
  }
  CHECK(max_symbol_dev(genie_equalize(y, x), x) < 1e-10);

  // identity and scalar gain
  CHECK(max_symbol_dev(genie_equalize(x, x), x) < 1e-12);
  auto half = x;
  for (auto& v : half.pol1) v *= 0.5;
  for (auto& v : half.pol2) v *= 0.5;
  CHECK(max_symbol_dev(genie_equalize(half, x), x) < 1e-12);

  // degenerate received block
  std::vector<cplx> z(16, cplx(0, 0));
  CHECK_THROWS_WITH(genie_equalize(DualPolSymbolBlock(z, z), random_symbols(16, 9)),
                    doctest::Contains("degenerate block"));
}

TEST_CASE("carrier phase recovery") {
  const auto x = random_symbols(2048, 11);

  // constant offset fully removed
  auto rot = x;
  for (auto& v : rot.pol1) v *= std::polar(1.0, 0.4);
  for (auto& v : rot.pol2) v *= std::polar(1.0, 0.4);
  CHECK(max_symbol_dev(cpr_data_aided(rot, x, 64), x) < 1e-9);

  // no rotation: unchanged
  CHECK(max_symbol_dev(cpr_data_aided(x, x, 64), x) < 1e-12);

  // slow sinusoidal phase: residual phase variance reduced > 10x
  auto slow = x;
  std::vector<double> phase(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    phase[k] = 0.2 * std::sin(2.0 * M_PI * k / 1024.0);
    slow.pol1[k] *= std::polar(1.0, phase[k]);
    slow.pol2[k] *= std::polar(1.0, phase[k]);
  }
  const auto fixed = cpr_data_aided(slow, x, 64);
  double var_before = 0.0, var_after = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    var_before += phase[k] * phase[k];
    const double r = std::arg(fixed.pol1[k] / x.pol1[k]);
    var_after += r * r;
  }
  CHECK(var_before / var_after > 10.0);

  // CPR on AWGN-only data costs at most 0.05 dB of SNR
  const auto noisy = add_awgn(x, 0.5, 13);
  const double snr_raw = snr_elec_db(noisy, x);
  const double snr_cpr = snr_elec_db(cpr_data_aided(noisy, x, 64), x);
  CHECK(snr_cpr >= snr_raw - 0.05);
}

TEST_CASE("electrical snr") {
  const auto x = random_symbols(100000, 17);

  CHECK(snr_elec_db(x, x) >= kSnrCapDb);

  // pure gain: MMSE scaling removes it
  auto twice = x;
  for (auto& v : twice.pol1) v *= 2.0;
  for (auto& v : twice.pol2) v *= 2.0;
  CHECK(snr_elec_db(twice, x) >= kSnrCapDb);

  // 1% relative noise -> 20 dB
  double p = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) p += x.symbol_energy(k);
  p /= (2.0 * x.size());  // per 2D
  const auto noisy = add_awgn(x, 0.01 * p, 19);
  CHECK(snr_elec_db(noisy, x) == doctest::Approx(20.0).epsilon(0.005));

  // invariant to global complex scaling of rx
  auto scaled = noisy;
  for (auto& v : scaled.pol1) v *= cplx(0.3, -1.2);
  for (auto& v : scaled.pol2) v *= cplx(0.3, -1.2);
  CHECK(snr_elec_db(scaled, x) == doctest::Approx(snr_elec_db(noisy, x)).epsilon(1e-9));
}

TEST_CASE("constellation construction") {
  const std::vector<double> p_a = {0.45, 0.30, 0.17, 0.08};
  const auto c = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), p_a);
  REQUIRE(c.points.size() == 64);
  double sum = 0.0;
  for (double p : c.probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // labels are distinct 6-bit words
  std::vector<bool> seen(64, false);
  for (unsigned l : c.labels) {
    REQUIRE(l < 64);
    CHECK(!seen[l]);
    seen[l] = true;
  }
  // per-bit marginals: each label bit is equiprobable under the sign bits and
  // matches the amplitude distribution on amplitude bits
  double p_sign1 = 0.0;
  for (std::size_t i = 0; i < 64; ++i)
    if (c.labels[i] >> 5) p_sign1 += c.probs[i];
  CHECK(p_sign1 == doctest::Approx(0.5).epsilon(1e-12));
  // entropy matches 2*(1 + H(P_a))
  const double h_pa = -(p_a[0] * std::log2(p_a[0]) + p_a[1] * std::log2(p_a[1]) +
                        p_a[2] * std::log2(p_a[2]) + p_a[3] * std::log2(p_a[3]));
  CHECK(c.entropy_bits_2d == doctest::Approx(2.0 * (1.0 + h_pa)).epsilon(1e-12));
}

TEST_CASE("gmi: noiseless saturation and low-snr floor") {
  // uniform 64-QAM: 12 bits per 4D
  const std::vector<double> uni = {0.25, 0.25, 0.25, 0.25};
  const auto c = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), uni);
  const auto x = constellation_symbols(c, 20000, 23);
  const auto tiny = add_awgn(x, 1e-6, 29);
  CHECK(gmi_bmd(tiny, x, c) == doctest::Approx(12.0).epsilon(0.001));

  // shaped constellation saturates at its own entropy
  const std::vector<double> p_a = {0.45, 0.30, 0.17, 0.08};
  const auto cs = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), p_a);
  const auto xs = constellation_symbols(cs, 20000, 31);
  CHECK(gmi_bmd(add_awgn(xs, 1e-6, 37), xs, cs) ==
        doctest::Approx(2.0 * cs.entropy_bits_2d).epsilon(0.001));

  // -20 dB: almost no information
  double p = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) p += x.symbol_energy(k);
  p /= (2.0 * x.size());
  CHECK(gmi_bmd(add_awgn(x, p * 100.0, 41), x, c) < 0.1);
}

TEST_CASE("gmi matches the quadrature oracle at 18 dB") {
  const std::vector<double> uni = {0.25, 0.25, 0.25, 0.25};
  const auto c = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), uni);
  double es = 0.0;
  for (std::size_t i = 0; i < 64; ++i) es += c.probs[i] * std::norm(c.points[i]);
  const double sigma2 = es / std::pow(10.0, 1.8);
  const auto x = constellation_symbols(c, 100000, 43);
  const double mc = gmi_bmd(add_awgn(x, sigma2, 47), x, c);
  const double oracle = 2.0 * gmi_2d_quadrature(c, sigma2);
  CHECK(mc == doctest::Approx(oracle).epsilon(0.02 / oracle));
}

TEST_CASE("gmi monotone in snr") {
  const std::vector<double> p_a = {0.45, 0.30, 0.17, 0.08};
  const auto c = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), p_a);
  const auto x = constellation_symbols(c, 100000, 53);
  double es = 0.0;
  for (std::size_t i = 0; i < 64; ++i) es += c.probs[i] * std::norm(c.points[i]);
  double prev = -1.0;
  for (int snr_db = 0; snr_db <= 24; ++snr_db) {
    const double sigma2 = es / std::pow(10.0, snr_db / 10.0);
    const double g = gmi_bmd(add_awgn(x, sigma2, 59 + snr_db), x, c);
    CHECK(g >= prev - 0.01);
    prev = g;
  }
}

TEST_CASE("serial gmi reference agrees") {
  const std::vector<double> p_a = {0.45, 0.30, 0.17, 0.08};
  const auto c = Constellation2D::from_amplitude_distribution(
      PamAlphabet({1, 3, 5, 7}), p_a);
  const auto x = constellation_symbols(c, 5000, 61);
  const auto y = add_awgn(x, 2.0, 67);
  CHECK(ref::gmi_bmd(y, x, c) == doctest::Approx(gmi_bmd(y, x, c)).epsilon(1e-12));
}
