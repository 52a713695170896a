#include "qlink/pulse_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qlink/quadrature.hpp"

namespace qlink {

namespace {

// f2 is a unit-peak gaussian of width t2 centered at (f1 center + t_d).
double f2_sqrt(const PhotonModes& modes, double t2, double t_d, double t) {
  const double x = (t - modes.profile().center - t_d) / t2;
  return std::exp(-0.5 * x * x);
}

double overlap(const PhotonModes& modes, double t2, double t_d, int sign) {
  const double lo = std::min(modes.support_start(),
                             modes.profile().center + t_d - 6.0 * t2);
  const double hi = std::max(modes.support_end(),
                             modes.profile().center + t_d + 6.0 * t2);
  return integrate(
      [&](double t) {
        return f2_sqrt(modes, t2, t_d, t) * (modes.phi_I(t) + sign * modes.phi_II(t));
      },
      lo, hi, 1e-12);
}

}  // namespace

double solve_delay(const PhotonModes& modes, double t2) {
  const auto beta = [&] {
    const double th = modes.theta_inf();
    return std::array<double, 2>{1.0 - std::exp(-th),
                                 1.0 - (1.0 + th) * std::exp(-th)};
  }();
  if (beta[0] < 1e-6 || beta[1] < 1e-6)
    throw std::invalid_argument("solve_delay: wavepacket is trivial (photon norms < 1e-6)");

  const double t1 = modes.profile().duration;
  double a = -5.0 * t2;
  double b = 10.0 * t2 + 5.0 * t1;
  const double scale = overlap(modes, t2, 0.0, +1);  // normalizes the residual
  if (scale <= 0.0)
    throw std::runtime_error("solve_delay: zero overlap between drive and photons");

  const auto d = [&](double td) { return overlap(modes, t2, td, -1) / scale; };
  double da = d(a);
  double db = d(b);
  if (std::abs(da) < 1e-12 && std::abs(db) < 1e-12)
    throw std::runtime_error("solve_delay: degenerate input, phi_I == phi_II");
  if (da * db > 0.0)
    throw std::runtime_error("solve_delay: no sign change in bracket; D(a)=" +
                             std::to_string(da) + " D(b)=" + std::to_string(db));

  // Bisection first, then a few secant refinements inside the bracket.
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double dm = d(m);
    if (std::abs(dm) < 1e-10 || (b - a) < 1e-14) return m;
    if (da * dm <= 0.0) {
      b = m;
      db = dm;
    } else {
      a = m;
      da = dm;
    }
  }
  return 0.5 * (a + b);
}

double solve_amplitude(const PhotonModes& modes, double t2, double t_d, double k) {
  const double ov = overlap(modes, t2, t_d, +1);
  if (ov <= 1e-12)
    throw std::runtime_error("solve_amplitude: zero overlap integral");
  return pi * std::sqrt(k) / ov;
}

ReceiverPulsePlan solve_pulse(const PhotonModes& modes, const SystemParams& params,
                              double t2) {
  ReceiverPulsePlan plan;
  plan.bracket = {-5.0 * t2, 10.0 * t2 + 5.0 * modes.profile().duration};
  plan.delay = solve_delay(modes, t2);
  plan.g2_abs = solve_amplitude(modes, t2, plan.delay, params.k);

  // G2 = g*Omega2/Delta, so the implied drive ratio follows directly.
  const double omega2 = plan.g2_abs * std::abs(params.delta) / params.g;
  plan.omega2_over_omega1 = (params.omega1 > 0) ? omega2 / params.omega1 : 0.0;

  const double pref = plan.g2_abs / std::sqrt(params.k);
  plan.residuals = {2.0 * pref * 0.5 *
                            (overlap(modes, t2, plan.delay, +1) +
                             overlap(modes, t2, plan.delay, -1)) -
                        pi,
                    pref * overlap(modes, t2, plan.delay, +1) - pi};
  return plan;
}

}  // namespace qlink
