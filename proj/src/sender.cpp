#include "qlink/sender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qlink/quadrature.hpp"

namespace qlink {

namespace {
constexpr double sqrt_pi = 1.7724538509055160272981674833411;
}

PhotonModes::PhotonModes(const SystemParams& params, const PulseProfile& profile1)
    : profile1_(profile1) {
  const double g1 = raman_coupling(params, Node::sender);
  alpha1_ = 4.0 * g1 * g1 / params.k;

  if (profile1_.shape == PulseShape::gaussian) {
    theta_inf_ = alpha1_ * profile1_.duration * sqrt_pi;
  } else {
    // Cumulative trapezoid of the tabulated envelope on a refined grid.
    const auto& g = profile1_.grid;
    const int refine = 16;
    theta_grid_.push_back(g.front());
    theta_vals_.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double h = (g[i] - g[i - 1]) / refine;
      for (int j = 1; j <= refine; ++j) {
        const double tl = g[i - 1] + (j - 1) * h;
        const double tr = g[i - 1] + j * h;
        acc += 0.5 * h * (envelope_eval(profile1_, tl) + envelope_eval(profile1_, tr));
        theta_grid_.push_back(tr);
        theta_vals_.push_back(alpha1_ * acc);
      }
    }
    theta_inf_ = theta_vals_.back();
  }
}

double PhotonModes::theta(double t) const {
  if (profile1_.shape == PulseShape::gaussian) {
    const double x = (t - profile1_.center) / profile1_.duration;
    return alpha1_ * profile1_.duration * (sqrt_pi / 2.0) * (1.0 + std::erf(x));
  }
  if (t <= theta_grid_.front()) return 0.0;
  if (t >= theta_grid_.back()) return theta_inf_;
  auto it = std::upper_bound(theta_grid_.begin(), theta_grid_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - theta_grid_.begin());
  const double w = (t - theta_grid_[i - 1]) / (theta_grid_[i] - theta_grid_[i - 1]);
  return theta_vals_[i - 1] + w * (theta_vals_[i] - theta_vals_[i - 1]);
}

double PhotonModes::envelope(double t) const {
  if (profile1_.shape == PulseShape::tabulated &&
      (t < profile1_.grid.front() || t > profile1_.grid.back()))
    return 0.0;
  return envelope_eval(profile1_, t);
}

double PhotonModes::phi_I(double t) const {
  return std::sqrt(alpha1_ * envelope(t) * std::exp(-theta(t)));
}

double PhotonModes::phi_II(double t) const {
  return std::sqrt(alpha1_ * envelope(t) * theta(t) * std::exp(-theta(t)));
}

double PhotonModes::support_start() const {
  if (profile1_.shape == PulseShape::tabulated) return profile1_.grid.front();
  return profile1_.center - 6.0 * profile1_.duration;
}

double PhotonModes::support_end() const {
  if (profile1_.shape == PulseShape::tabulated) return profile1_.grid.back();
  return profile1_.center + 6.0 * profile1_.duration;
}

PhotonModes photon_modes(const SystemParams& params, const PulseProfile& profile1) {
  return PhotonModes(params, profile1);
}

double theta(double t, const SystemParams& params, const PulseProfile& profile1) {
  return PhotonModes(params, profile1).theta(t);
}

std::array<double, 3> populations(double t, const SystemParams& params,
                                  const PulseProfile& profile1) {
  const double th = theta(t, params, profile1);
  const double p_m1 = std::exp(-th);
  const double p_0 = th * std::exp(-th);
  return {p_m1, p_0, 1.0 - p_m1 - p_0};
}

std::array<double, 3> beta_coefficients(const SystemParams& params,
                                        const PulseProfile& profile1) {
  const double th = PhotonModes(params, profile1).theta_inf();
  const double b_m1 = std::exp(-th / 2.0);
  const double b_0 = std::sqrt(th * std::exp(-th));
  const double b_p1 = std::sqrt(std::max(0.0, 1.0 - (1.0 + th) * std::exp(-th)));
  return {b_m1, b_0, b_p1};
}

namespace {

Wavepacket sample_wavepackets(const SystemParams& params, const PulseProfile& profile1,
                              const TimeGrid& grid, bool parallel) {
  if (grid.start > profile1.center - 5.0 * profile1.duration ||
      grid.end < profile1.center + 5.0 * profile1.duration)
    throw std::invalid_argument(
        "photon_wavepackets: grid must span [t0-5T1, t0+5T1]");

  const PhotonModes modes(params, profile1);
  Wavepacket wp;
  wp.grid = grid;
  const std::size_t n = static_cast<std::size_t>(grid.n_points);
  wp.phi_I.resize(n);
  wp.phi_II.resize(n);

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grid.n_points; ++i) {
      const double t = grid.time_at(i);
      wp.phi_I[static_cast<std::size_t>(i)] = modes.phi_I(t);
      wp.phi_II[static_cast<std::size_t>(i)] = modes.phi_II(t);
    }
  } else {
    for (int i = 0; i < grid.n_points; ++i) {
      const double t = grid.time_at(i);
      wp.phi_I[static_cast<std::size_t>(i)] = modes.phi_I(t);
      wp.phi_II[static_cast<std::size_t>(i)] = modes.phi_II(t);
    }
  }

  // Norm identities link the mode functions to the asymptotic amplitudes.
  const auto beta = beta_coefficients(params, profile1);
  const double want_I = beta[1] * beta[1] + beta[2] * beta[2];
  const double want_II = beta[2] * beta[2];
  const double got_I = integrate(
      [&](double t) { const double a = modes.phi_I(t); return a * a; },
      grid.start, grid.end, 1e-12);
  const double got_II = integrate(
      [&](double t) { const double a = modes.phi_II(t); return a * a; },
      grid.start, grid.end, 1e-12);
  if (std::abs(got_I - want_I) > 1e-6)
    throw std::runtime_error("photon_wavepackets: norm identity violated for phi_I "
                             "(int |phi_I|^2 != beta0^2+beta1^2); grid too narrow?");
  if (std::abs(got_II - want_II) > 1e-6)
    throw std::runtime_error("photon_wavepackets: norm identity violated for phi_II "
                             "(int |phi_II|^2 != beta1^2); grid too narrow?");
  return wp;
}

}  // namespace

Wavepacket photon_wavepackets(const SystemParams& params, const PulseProfile& profile1,
                              const TimeGrid& grid) {
  return sample_wavepackets(params, profile1, grid, true);
}

Wavepacket photon_wavepackets_serial(const SystemParams& params, const PulseProfile& profile1,
                                     const TimeGrid& grid) {
  return sample_wavepackets(params, profile1, grid, false);
}

double cumulative_flux(double t, const SystemParams& params, const PulseProfile& profile1) {
  const PhotonModes modes(params, profile1);
  const double lo = modes.support_start();
  if (t <= lo) return 0.0;
  return integrate(
      [&](double tp) {
        const double th = modes.theta(tp);
        return modes.alpha1() * modes.envelope(tp) * (1.0 + th) * std::exp(-th);
      },
      lo, std::min(t, modes.support_end()), 1e-12);
}

SenderResult run_sender(const SystemParams& params, const PulseProfile& profile1,
                        const TimeGrid& grid) {
  const PhotonModes modes(params, profile1);
  SenderResult res;
  res.theta_inf = modes.theta_inf();
  res.grid = grid;
  res.populations.resize(static_cast<std::size_t>(grid.n_points));
  for (int i = 0; i < grid.n_points; ++i) {
    const double th = modes.theta(grid.time_at(i));
    const double p_m1 = std::exp(-th);
    const double p_0 = th * std::exp(-th);
    res.populations[static_cast<std::size_t>(i)] = {p_m1, p_0, 1.0 - p_m1 - p_0};
  }
  res.beta = beta_coefficients(params, profile1);
  return res;
}

}  // namespace qlink
