#include "qlink/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "qlink/quadrature.hpp"

namespace qlink {

namespace {

using state_type = std::array<std::complex<double>, 6>;  // c1..c4, d1, d2

double f2_sqrt_shifted(const PulseProfile& profile2, double t_d, double t) {
  if (profile2.shape == PulseShape::tabulated) {
    const double x = t - t_d;
    if (x < profile2.grid.front() || x > profile2.grid.back()) return 0.0;
    return std::sqrt(envelope_eval(profile2, x));
  }
  return std::sqrt(envelope_eval(profile2, t - t_d));
}

// Coupled linear ODEs from the effective interaction Hamiltonian with the
// incoming field substituted for the cavity mode. The matrix is Hermitian;
// with phi2 = pi/2 and phi_I == phi_II the solution reduces to the
// sine/cosine closed forms (enforced by tests).
struct BranchOde {
  const PhotonModes& modes;
  const PulseProfile& profile2;
  double t_d;
  double kappa0;  // |G2| / sqrt(k)
  std::complex<double> eip;   // e^{+i phi2}
  std::complex<double> emip;  // e^{-i phi2}

  void operator()(const state_type& y, state_type& dydt, double t) const {
    const double kappa = kappa0 * f2_sqrt_shifted(profile2, t_d, t);
    const double fI = modes.phi_I(t);
    const double fII = modes.phi_II(t);
    const std::complex<double> i_(0.0, 1.0);
    const auto& c1 = y[0];
    const auto& c2 = y[1];
    const auto& c3 = y[2];
    const auto& c4 = y[3];
    const auto& d1 = y[4];
    const auto& d2 = y[5];
    dydt[0] = i_ * kappa * eip * (fI * c2 + fII * c3);
    dydt[1] = i_ * kappa * (emip * fI * c1 + eip * fII * c4);
    dydt[2] = i_ * kappa * (emip * fII * c1 + eip * fI * c4);
    dydt[3] = i_ * kappa * emip * (fII * c2 + fI * c3);
    dydt[4] = i_ * kappa * eip * fI * d2;
    dydt[5] = i_ * kappa * emip * fI * d1;
  }
};

double branch_norm_drift(const state_type& y) {
  const double n2 = std::norm(y[0]) + std::norm(y[1]) + std::norm(y[2]) + std::norm(y[3]);
  const double n1 = std::norm(y[4]) + std::norm(y[5]);
  return std::max(std::abs(n2 - 1.0), std::abs(n1 - 1.0));
}

}  // namespace

BranchAmplitudes integrate_branches(const PhotonModes& modes, const SystemParams& params,
                                    const PulseProfile& profile2, double t_d,
                                    double phi2, int n_out) {
  const double g2 = std::abs(raman_coupling(params, Node::receiver));
  BranchOde ode{modes, profile2, t_d, g2 / std::sqrt(params.k),
                std::polar(1.0, phi2), std::polar(1.0, -phi2)};

  const double t_lo = std::min(modes.support_start(),
                               profile2.center + t_d - 6.0 * profile2.duration);
  const double t_hi = std::max(modes.support_end(),
                               profile2.center + t_d + 6.0 * profile2.duration);

  BranchAmplitudes out;
  out.grid = make_grid(t_lo, t_hi, n_out, 1e-10);
  out.two_photon.reserve(static_cast<std::size_t>(n_out));
  out.one_photon.reserve(static_cast<std::size_t>(n_out));

  state_type y{};
  y[0] = 1.0;  // c1
  y[4] = 1.0;  // d1

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-12, 1e-12,
      odeint::runge_kutta_dopri5<state_type>());

  const auto times = out.grid.times();
  odeint::integrate_times(
      stepper, ode, y, times.begin(), times.end(), (t_hi - t_lo) / 1e4,
      [&](const state_type& s, double) {
        out.two_photon.push_back({s[0], s[1], s[2], s[3]});
        out.one_photon.push_back({s[4], s[5]});
        out.max_norm_drift = std::max(out.max_norm_drift, branch_norm_drift(s));
      });

  if (out.max_norm_drift > 1e-8)
    throw std::runtime_error("integrate_branches: branch norm drift beyond 1e-8");

  out.c_final = out.two_photon.back();
  out.d_final = out.one_photon.back();
  return out;
}

ApproximationReport approximation_report(const BranchAmplitudes& oracle,
                                         const AreaFunctions& area,
                                         const PhotonModes& modes,
                                         const PulseProfile& profile2, double t_d) {
  if (oracle.grid.n_points != area.grid.n_points ||
      std::abs(oracle.grid.start - area.grid.start) > 1e-12 ||
      std::abs(oracle.grid.end - area.grid.end) > 1e-12)
    throw std::invalid_argument("approximation_report: mismatched grids");

  ApproximationReport rep;
  const auto closed = gamma_trajectories(area);
  for (std::size_t i = 0; i < oracle.two_photon.size(); ++i) {
    const auto& c = oracle.two_photon[i];
    const std::array<double, 3> exact = {std::norm(c[0]),
                                         std::norm(c[1]) + std::norm(c[2]),
                                         std::norm(c[3])};
    const std::array<double, 3> approx = {closed.gamma_12[i] * closed.gamma_12[i],
                                          closed.gamma_01[i] * closed.gamma_01[i],
                                          closed.gamma_m10[i] * closed.gamma_m10[i]};
    for (int j = 0; j < 3; ++j) {
      const double dev = std::abs(exact[static_cast<std::size_t>(j)] -
                                  approx[static_cast<std::size_t>(j)]);
      rep.max_dev[static_cast<std::size_t>(j)] =
          std::max(rep.max_dev[static_cast<std::size_t>(j)], dev);
      if (i + 1 == oracle.two_photon.size())
        rep.final_dev[static_cast<std::size_t>(j)] = dev;
    }
  }
  const double d2_exact = std::norm(oracle.d_final[1]);
  const double s = std::sin(area.eta_inf / 2.0);
  rep.one_photon_final_dev = std::abs(d2_exact - s * s);

  const double lo = oracle.grid.start;
  const double hi = oracle.grid.end;
  const double num = integrate(
      [&](double t) {
        return f2_sqrt_shifted(profile2, t_d, t) *
               std::abs(modes.phi_I(t) - modes.phi_II(t));
      },
      lo, hi, 1e-10);
  const double den = integrate(
      [&](double t) {
        return f2_sqrt_shifted(profile2, t_d, t) * (modes.phi_I(t) + modes.phi_II(t));
      },
      lo, hi, 1e-10);
  rep.overlap_ratio = (den > 0) ? num / den : 0.0;
  return rep;
}

QuadratureReport quadrature_crosscheck(const SystemParams& params,
                                       const PulseProfile& profile1,
                                       int n_samples, unsigned seed) {
  if (profile1.shape != PulseShape::gaussian)
    throw std::invalid_argument("quadrature_crosscheck: gaussian profile required");

  const PhotonModes modes(params, profile1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(modes.support_start(), modes.support_end());

  QuadratureReport rep;
  rep.n_samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const double t = dist(rng);
    const double closed = modes.theta(t);
    const double quad = modes.alpha1() * integrate(
        [&](double tp) { return envelope_eval(profile1, tp); },
        modes.support_start() - 2.0 * profile1.duration, t, 1e-13);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(closed - quad));
  }
  return rep;
}

}  // namespace qlink
