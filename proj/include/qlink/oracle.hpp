#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qlink/params.hpp"
#include "qlink/receiver.hpp"
#include "qlink/sender.hpp"

namespace qlink {

// Receiver branch amplitudes integrated without the equal-area
// approximation. Two-photon branch: c1 |m=1;1,1>, c2 |m=0;0,1>,
// c3 |m=0;1,0>, c4 |m=-1;0,0>. One-photon branch: d1 |m=1;1,0>, d2 |m=0;0,0>.
struct BranchAmplitudes {
  TimeGrid grid;
  std::vector<std::array<std::complex<double>, 4>> two_photon;
  std::vector<std::array<std::complex<double>, 2>> one_photon;
  std::array<std::complex<double>, 4> c_final{};
  std::array<std::complex<double>, 2> d_final{};
  double max_norm_drift = 0;  // worst deviation of either branch norm from 1
};

BranchAmplitudes integrate_branches(const PhotonModes& modes, const SystemParams& params,
                                    const PulseProfile& profile2, double t_d,
                                    double phi2, int n_out = 2001);

struct ApproximationReport {
  // populations ordered as (|gamma_12|^2, |gamma_01|^2, |gamma_m10|^2)
  std::array<double, 3> final_dev{};
  std::array<double, 3> max_dev{};
  double one_photon_final_dev = 0;
  // int f2^(1/2) |phi_I - phi_II| / int f2^(1/2) (phi_I + phi_II)
  double overlap_ratio = 0;
};

// Compares the exact branch populations with the closed-form solution on the
// same grid; the area samples must come from the identical configuration.
ApproximationReport approximation_report(const BranchAmplitudes& oracle,
                                         const AreaFunctions& area,
                                         const PhotonModes& modes,
                                         const PulseProfile& profile2, double t_d);

struct QuadratureReport {
  double max_deviation = 0;
  int n_samples = 0;
};

// Closed-form theta (erf) against direct adaptive quadrature at random times.
QuadratureReport quadrature_crosscheck(const SystemParams& params,
                                       const PulseProfile& profile1,
                                       int n_samples = 100, unsigned seed = 12345);

}  // namespace qlink
