#pragma once

#include <array>

#include "qlink/params.hpp"
#include "qlink/sender.hpp"

namespace qlink {

struct ReceiverPulsePlan {
  double delay = 0;             // f2 center offset relative to f1 center (us)
  double g2_abs = 0;            // |G2| (rad/us)
  double omega2_over_omega1 = 0;
  std::array<double, 2> residuals{};  // eta_inf - pi, zeta_inf - pi
  std::array<double, 2> bracket{};    // search interval used for the delay
};

// Root of D(t_d) = int f2^(1/2)(t - t_d) (phi_I - phi_II) dt, i.e. the delay
// at which both effective pulse areas coincide (the amplitude cancels).
double solve_delay(const PhotonModes& modes, double t2);

// |G2| = pi sqrt(k) / int f2^(1/2)(t - t_d) (phi_I + phi_II) dt; zeta is
// linear in |G2|, so this is exact.
double solve_amplitude(const PhotonModes& modes, double t2, double t_d, double k);

ReceiverPulsePlan solve_pulse(const PhotonModes& modes, const SystemParams& params,
                              double t2);

}  // namespace qlink
