#pragma once

// EDI and D-EDI metrics over dual-polarization symbol blocks, plus the
// symbol-rate chromatic dispersion operator they rely on.
//
// EDI = Var[G^w] / E[G^w] with population variance, G^w the sliding sums of
// w+1 consecutive 4D symbol energies. D-EDI averages the EDI of digitally
// dispersed copies of the block at one sample per symbol (circular FFT of
// length L_s, no zero padding).

#include <vector>

#include "dss/core.hpp"

namespace dss {

struct EdiWindow {
  int w;  // even, >= 2
  explicit EdiWindow(int w_);
};

// EDI evaluation points along an ideal dispersive fiber. span_indices are
// multiples of l_d_km; index 0 is the transmitter output. The contiguous set
// {0..m_D} is the default; arbitrary subsampled sets are allowed.
struct DispersionSchedule {
  double d_ps_nm_km;
  double lambda_nm;
  double l_d_km;
  double baud_gbaud;  // symbol rate defining the FFT bin frequencies
  std::vector<int> span_indices;

  DispersionSchedule(double d, double lambda, double l_d, double baud,
                     std::vector<int> indices);
};

// Sliding sums of w+1 4D symbol energies; result has length L_s - w.
std::vector<double> windowed_energies(const DualPolSymbolBlock& x, const EdiWindow& w);

double edi(const DualPolSymbolBlock& x, const EdiWindow& w);

// Frequency-domain all-pass dispersion filter exp(j*D*lambda^2*pi*df^2*z/c)
// applied per polarization at symbol-rate sampling. Energy preserving.
DualPolSymbolBlock apply_dispersion(const DualPolSymbolBlock& x, double d_ps_nm_km,
                                    double lambda_nm, double baud_gbaud,
                                    double z_km);

// Mean of edi(dispersed copy at N*L_D km) over all N in the schedule.
double d_edi(const DualPolSymbolBlock& x, const EdiWindow& w,
             const DispersionSchedule& schedule);

// Single-span variant: average of the EDI at the transmitter output and the
// EDI after the span's effective length (1-exp(-alpha L))/alpha.
double d_edi_single_span(const DualPolSymbolBlock& x, const EdiWindow& w,
                         double d_ps_nm_km, double lambda_nm, double baud_gbaud,
                         double alpha_db_per_km, double length_km);

}  // namespace dss
