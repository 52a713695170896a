#include "qlink/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlink/quadrature.hpp"

namespace qlink {

namespace {

double f2_sqrt(const PulseProfile& profile2, double t_d, double t) {
  if (profile2.shape == PulseShape::tabulated) {
    const double x = t - t_d;
    if (x < profile2.grid.front() || x > profile2.grid.back()) return 0.0;
    return std::sqrt(envelope_eval(profile2, x));
  }
  return std::sqrt(envelope_eval(profile2, t - t_d));
}

}  // namespace

AreaFunctions area_functions(const PhotonModes& modes, const SystemParams& params,
                             const PulseProfile& profile2, double t_d,
                             const TimeGrid& grid) {
  const double lo = std::min(modes.support_start(),
                             profile2.center + t_d - 6.0 * profile2.duration);
  const double lo_required = std::min(modes.profile().center - 5.0 * modes.profile().duration,
                                      profile2.center + t_d - 5.0 * profile2.duration);
  if (grid.start > lo_required + 1e-9)
    throw std::invalid_argument(
        "area_functions: grid does not cover the photon/drive support");

  const double g2 = std::abs(raman_coupling(params, Node::receiver));
  const double pref = g2 / std::sqrt(params.k);

  AreaFunctions area;
  area.grid = grid;
  const std::size_t n = static_cast<std::size_t>(grid.n_points);
  area.eta.resize(n);
  area.zeta.resize(n);

  // Cumulative quadrature, one panel per grid interval; any support ahead of
  // the grid goes into the starting value.
  double acc_eta = 0.0, acc_zeta = 0.0;
  if (lo < grid.start) {
    acc_eta = integrate(
        [&](double t) { return 2.0 * pref * f2_sqrt(profile2, t_d, t) * modes.phi_I(t); },
        lo, grid.start, 1e-11, 8);
    acc_zeta = integrate(
        [&](double t) {
          return pref * f2_sqrt(profile2, t_d, t) * (modes.phi_I(t) + modes.phi_II(t));
        },
        lo, grid.start, 1e-11, 8);
  }
  area.eta[0] = acc_eta;
  area.zeta[0] = acc_zeta;
  for (int i = 1; i < grid.n_points; ++i) {
    const double a = grid.time_at(i - 1);
    const double b = grid.time_at(i);
    acc_eta += integrate(
        [&](double t) { return 2.0 * pref * f2_sqrt(profile2, t_d, t) * modes.phi_I(t); },
        a, b, 1e-11, 2);
    acc_zeta += integrate(
        [&](double t) {
          return pref * f2_sqrt(profile2, t_d, t) * (modes.phi_I(t) + modes.phi_II(t));
        },
        a, b, 1e-11, 2);
    area.eta[static_cast<std::size_t>(i)] = acc_eta;
    area.zeta[static_cast<std::size_t>(i)] = acc_zeta;
  }

  // Tail beyond the grid (both integrands decay like the gaussians involved).
  const double hi = std::max(modes.support_end(),
                             profile2.center + t_d + 6.0 * profile2.duration);
  double tail_eta = 0.0, tail_zeta = 0.0;
  if (hi > grid.end) {
    tail_eta = integrate(
        [&](double t) { return 2.0 * pref * f2_sqrt(profile2, t_d, t) * modes.phi_I(t); },
        grid.end, hi, 1e-11, 8);
    tail_zeta = integrate(
        [&](double t) {
          return pref * f2_sqrt(profile2, t_d, t) * (modes.phi_I(t) + modes.phi_II(t));
        },
        grid.end, hi, 1e-11, 8);
  }
  area.eta_inf = acc_eta + tail_eta;
  area.zeta_inf = acc_zeta + tail_zeta;
  return area;
}

std::array<double, 2> areas_at(const PhotonModes& modes, const SystemParams& params,
                               const PulseProfile& profile2, double t_d, double t) {
  const double g2 = std::abs(raman_coupling(params, Node::receiver));
  const double pref = g2 / std::sqrt(params.k);
  const double lo = std::min(modes.support_start(),
                             profile2.center + t_d - 6.0 * profile2.duration);
  if (t <= lo) return {0.0, 0.0};
  const double eta = integrate(
      [&](double tp) { return 2.0 * pref * f2_sqrt(profile2, t_d, tp) * modes.phi_I(tp); },
      lo, t, 1e-11);
  const double zeta = integrate(
      [&](double tp) {
        return pref * f2_sqrt(profile2, t_d, tp) * (modes.phi_I(tp) + modes.phi_II(tp));
      },
      lo, t, 1e-11);
  return {eta, zeta};
}

ReceiverResult gamma_closed_form(const SystemParams& params, const AreaFunctions& area) {
  if (std::abs(params.phi2 - pi / 2.0) > 1e-12)
    throw std::invalid_argument(
        "gamma_closed_form: closed form holds only for phi2 = pi/2; "
        "use the oracle integrator for general phases");

  ReceiverResult r;
  r.gamma_00 = std::sin(area.eta_inf / 2.0);
  r.gamma_11 = std::cos(area.eta_inf / 2.0);
  r.gamma_12 = 0.5 * (1.0 + std::cos(area.zeta_inf));
  r.gamma_01 = std::sin(area.zeta_inf) / std::sqrt(2.0);
  r.gamma_m10 = 0.5 * (1.0 - std::cos(area.zeta_inf));
  r.absorbed = {r.gamma_00 * r.gamma_00, r.gamma_m10 * r.gamma_m10};
  r.residuals = {std::abs(area.eta_inf - pi), std::abs(area.zeta_inf - pi)};
  return r;
}

GammaTrajectories gamma_trajectories(const AreaFunctions& area) {
  GammaTrajectories g;
  const std::size_t n = area.eta.size();
  g.gamma_00.resize(n);
  g.gamma_11.resize(n);
  g.gamma_12.resize(n);
  g.gamma_01.resize(n);
  g.gamma_m10.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = area.eta[i], zeta = area.zeta[i];
    g.gamma_00[i] = std::sin(eta / 2.0);
    g.gamma_11[i] = std::cos(eta / 2.0);
    g.gamma_12[i] = 0.5 * (1.0 + std::cos(zeta));
    g.gamma_01[i] = std::sin(zeta) / std::sqrt(2.0);
    g.gamma_m10[i] = 0.5 * (1.0 - std::cos(zeta));
  }
  return g;
}

JointState final_joint_state(const std::array<double, 3>& beta,
                             const ReceiverResult& recv, double tol) {
  JointState js;
  js.is_complete = recv.residuals[0] < tol && recv.residuals[1] < tol;
  js.beta = beta;
  if (js.is_complete) {
    const std::array<double, 3> b2 = {beta[0] * beta[0], beta[1] * beta[1],
                                      beta[2] * beta[2]};
    js.entropy = entanglement_entropy(b2);
  } else {
    js.entropy = 0.0;
  }
  return js;
}

double entanglement_entropy(const std::array<double, 3>& beta_sq, double norm_band) {
  double sum = 0.0;
  for (double p : beta_sq) {
    if (p < 0.0) throw std::invalid_argument("entanglement_entropy: negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > norm_band)
    throw std::invalid_argument("entanglement_entropy: weights do not sum to 1 within band");
  double e = 0.0;
  for (double p : beta_sq) {
    const double q = p / sum;
    if (q > 0.0) e -= q * std::log2(q);
  }
  return e;
}

}  // namespace qlink
