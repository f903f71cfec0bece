#include "dss/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace dss {

namespace {

std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

fftw_plan get_plan(std::size_t n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  // Plan on a scratch buffer; FFTW_UNALIGNED lets us execute on arbitrary
  // caller buffers via the new-array interface.
  std::vector<std::complex<double>> scratch(n);
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch.data()),
      reinterpret_cast<fftw_complex*>(scratch.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  g_plans.emplace(key, p);
  return p;
}

void execute(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) throw std::invalid_argument("fft: empty input");
  fftw_plan p = get_plan(data.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
  execute(data, FFTW_FORWARD);
}

void fft_inverse(std::vector<std::complex<double>>& data) {
  execute(data, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= s;
}

double fft_bin_freq(std::size_t m, std::size_t n, double fs) {
  const double df = fs / static_cast<double>(n);
  if (m < (n + 1) / 2) return static_cast<double>(m) * df;
  return (static_cast<double>(m) - static_cast<double>(n)) * df;
}

}  // namespace dss
