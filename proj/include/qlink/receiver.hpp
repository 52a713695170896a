#pragma once

#include <array>
#include <vector>

#include "qlink/params.hpp"
#include "qlink/sender.hpp"

namespace qlink {

// Effective Raman pulse areas eta(t), zeta(t) accumulated by the receiver
// drive against the incoming photon fluxes.
struct AreaFunctions {
  TimeGrid grid;
  std::vector<double> eta;
  std::vector<double> zeta;
  double eta_inf = 0;
  double zeta_inf = 0;
};

// t_d shifts the receiver envelope: f2 is evaluated at (t - t_d).
AreaFunctions area_functions(const PhotonModes& modes, const SystemParams& params,
                             const PulseProfile& profile2, double t_d,
                             const TimeGrid& grid);

// eta/zeta at arbitrary times (same definitions, direct quadrature).
std::array<double, 2> areas_at(const PhotonModes& modes, const SystemParams& params,
                               const PulseProfile& profile2, double t_d, double t);

struct ReceiverResult {
  // Final amplitudes of the closed-form solution (phi2 = pi/2, all real).
  double gamma_10 = 1;   // zero-photon branch, frozen
  double gamma_00 = 0;   // sin(eta/2)
  double gamma_11 = 0;   // cos(eta/2)
  double gamma_12 = 0;   // (1+cos zeta)/2
  double gamma_01 = 0;   // sin(zeta)/sqrt(2)
  double gamma_m10 = 0;  // (1-cos zeta)/2
  std::array<double, 2> absorbed{};   // |gamma_00(inf)|^2, |gamma_m10(inf)|^2
  std::array<double, 2> residuals{};  // |eta_inf - pi|, |zeta_inf - pi|
};

// Closed-form receiver amplitudes; valid only for phi2 = pi/2. Any other
// phase must go through the oracle integrator.
ReceiverResult gamma_closed_form(const SystemParams& params, const AreaFunctions& area);

// Amplitude trajectories evaluated from the area samples (for export).
struct GammaTrajectories {
  std::vector<double> gamma_00, gamma_11, gamma_12, gamma_01, gamma_m10;
};
GammaTrajectories gamma_trajectories(const AreaFunctions& area);

struct JointState {
  std::array<double, 3> beta{};  // coefficients of |m_F>_1 |-m_F>_2
  double entropy = 0;            // bits
  bool is_complete = false;      // both areas within tol of pi
};

JointState final_joint_state(const std::array<double, 3>& beta,
                             const ReceiverResult& recv, double tol = 1e-3);

// E = -sum beta^2 log2 beta^2 over the squared amplitudes, 0*log0 = 0.
// Inputs within norm_band of unit sum are renormalized; worse is an error.
double entanglement_entropy(const std::array<double, 3>& beta_sq,
                            double norm_band = 1e-6);

}  // namespace qlink
