#pragma once

// Plain serial reference implementations of the hot kernels. These stay
// deliberately naive (direct sums, O(n^2) DFT) and are used by the tests to
// cross-check the production kernels and by the benchmark target.

#include <vector>

#include "dss/core.hpp"
#include "dss/metrics.hpp"

namespace dss::ref {

// Direct O(L_s * w) evaluation of the sliding energy sums.
std::vector<double> windowed_energies(const DualPolSymbolBlock& x, int w);

double edi(const DualPolSymbolBlock& x, int w);

// Dispersion filter through a direct O(n^2) DFT.
DualPolSymbolBlock apply_dispersion(const DualPolSymbolBlock& x, double d_ps_nm_km,
                                    double lambda_nm, double baud_gbaud,
                                    double z_km);

}  // namespace dss::ref
