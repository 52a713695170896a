#pragma once

#include <array>
#include <vector>

#include "qlink/params.hpp"

namespace qlink {

// Emitted two-photon mode functions of the sending node, evaluated
// analytically (erf closed form for the gaussian drive, cached cumulative
// quadrature for tabulated drives). This is the object downstream stages
// integrate against; sampled exports are produced from it on demand.
class PhotonModes {
 public:
  PhotonModes(const SystemParams& params, const PulseProfile& profile1);

  double alpha1() const { return alpha1_; }           // 4 G1^2 / k
  double theta_inf() const { return theta_inf_; }     // pulse-energy parameter at t=inf
  const PulseProfile& profile() const { return profile1_; }

  double theta(double t) const;
  double envelope(double t) const;   // f1(t)
  double phi_I(double t) const;      // first-photon amplitude, real >= 0
  double phi_II(double t) const;     // second-photon amplitude

  // Natural support window [center - 6T, center + 6T] for gaussian drives,
  // the tabulated range otherwise.
  double support_start() const;
  double support_end() const;

 private:
  PulseProfile profile1_;
  double alpha1_;
  double theta_inf_;
  std::vector<double> theta_grid_;  // tabulated drives only
  std::vector<double> theta_vals_;
};

PhotonModes photon_modes(const SystemParams& params, const PulseProfile& profile1);

double theta(double t, const SystemParams& params, const PulseProfile& profile1);

// (<sigma_-1>, <sigma_0>, <sigma_+1>) = (e^-theta, theta e^-theta, rest)
std::array<double, 3> populations(double t, const SystemParams& params,
                                  const PulseProfile& profile1);

// Asymptotic amplitudes (beta_-1, beta_0, beta_+1), all non-negative, unit norm.
std::array<double, 3> beta_coefficients(const SystemParams& params,
                                        const PulseProfile& profile1);

struct Wavepacket {
  TimeGrid grid;
  std::vector<double> phi_I;
  std::vector<double> phi_II;
};

// Samples the photon modes on the grid and checks the flux/norm identities.
// The grid must span at least [t0 - 5 T1, t0 + 5 T1].
Wavepacket photon_wavepackets(const SystemParams& params, const PulseProfile& profile1,
                              const TimeGrid& grid);
Wavepacket photon_wavepackets_serial(const SystemParams& params, const PulseProfile& profile1,
                                     const TimeGrid& grid);

// Mean photon number emitted in (-inf, t]; n_out(inf) = beta0^2 + 2 beta1^2.
double cumulative_flux(double t, const SystemParams& params, const PulseProfile& profile1);

struct SenderResult {
  double theta_inf = 0;
  TimeGrid grid;
  std::vector<std::array<double, 3>> populations;  // one triple per grid point
  std::array<double, 3> beta{};
};

SenderResult run_sender(const SystemParams& params, const PulseProfile& profile1,
                        const TimeGrid& grid);

}  // namespace qlink
