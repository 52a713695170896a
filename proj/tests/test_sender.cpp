#include "doctest.h"

#include <cmath>
#include <random>

#include "qlink/quadrature.hpp"
#include "qlink/sender.hpp"

using namespace qlink;

namespace {

SystemParams paper_params() {
  ParamsIn in;
  in.g = 12;
  in.k = 3;
  in.gamma_sp = 5.87;
  in.omega1 = 7;
  in.omega2 = 28;
  in.delta_b_f = -12;
  in.delta_b_fp = 4;
  in.delta = 100;
  return build_params(in);
}

}  // namespace

TEST_CASE("theta closed form") {
  auto p = paper_params();
  auto f1 = gaussian_pulse(0.12, 0.0);
  PhotonModes modes(p, f1);

  CHECK(modes.alpha1() == doctest::Approx(two_pi * 0.9408).epsilon(1e-10));
  CHECK(modes.theta_inf() == doctest::Approx(1.2573).epsilon(1e-4));
  CHECK(modes.theta(-10.0) == doctest::Approx(0.0));
  // half-energy point at the pulse center
  CHECK(modes.theta(0.0) == doctest::Approx(modes.theta_inf() / 2.0).epsilon(1e-12));
  // monotone non-decreasing
  double prev = 0.0;
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    CHECK(modes.theta(t) >= prev - 1e-15);
    prev = modes.theta(t);
  }
}

TEST_CASE("theta closed form matches quadrature at random times") {
  auto p = paper_params();
  auto f1 = gaussian_pulse(0.12, 0.0);
  PhotonModes modes(p, f1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-0.7, 0.7);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    const double quad = modes.alpha1() *
        integrate([&](double tp) { return envelope_eval(f1, tp); }, -1.5, t, 1e-13);
    CHECK(std::abs(modes.theta(t) - quad) < 1e-9);
  }
}

TEST_CASE("populations") {
  auto p = paper_params();
  auto f1 = gaussian_pulse(0.12, 0.0);

  auto early = populations(-10.0, p, f1);
  CHECK(early[0] == doctest::Approx(1.0));
  CHECK(early[1] == doctest::Approx(0.0));

  auto mid = populations(0.0, p, f1);
  CHECK(mid[0] == doctest::Approx(0.533).epsilon(2e-3));
  CHECK(mid[1] == doctest::Approx(0.335).epsilon(2e-3));
  CHECK(mid[2] == doctest::Approx(0.132).epsilon(3e-3));

  // conservation and monotonicity of <sigma_-1> on a grid
  double prev_m1 = 1.0;
  for (double t = -0.6; t <= 0.6; t += 0.005) {
    auto pop = populations(t, p, f1);
    CHECK(std::abs(pop[0] + pop[1] + pop[2] - 1.0) < 1e-12);
    for (double v : pop) {
      CHECK(v >= -1e-15);
      CHECK(v <= 1.0 + 1e-15);
    }
    CHECK(pop[0] <= prev_m1 + 1e-15);
    prev_m1 = pop[0];
  }
}

TEST_CASE("sigma_0 peaks at e^-1 where theta = 1") {
  auto p = paper_params();
  for (double t1 : {0.75, 0.22, 0.12}) {
    auto f1 = gaussian_pulse(t1, 0.0);
    PhotonModes modes(p, f1);
    double max0 = 0.0, theta_at_max = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = -6.0 * t1 + i * (12.0 * t1 / 20000);
      auto pop = populations(t, p, f1);
      if (pop[1] > max0) {
        max0 = pop[1];
        theta_at_max = modes.theta(t);
      }
    }
    if (modes.theta_inf() >= 1.0) {
      CHECK(max0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
      CHECK(theta_at_max == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("beta coefficients against closed form and limits") {
  auto p = paper_params();
  auto beta = beta_coefficients(p, gaussian_pulse(0.12, 0.0));
  CHECK(beta[0] * beta[0] == doctest::Approx(0.2844).epsilon(2e-4));
  CHECK(beta[1] * beta[1] == doctest::Approx(0.3576).epsilon(2e-4));
  CHECK(beta[2] * beta[2] == doctest::Approx(0.3580).epsilon(2e-4));
  CHECK(beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2] ==
        doctest::Approx(1.0).epsilon(1e-12));

  auto b75 = beta_coefficients(p, gaussian_pulse(0.75, 0.0));
  CHECK(b75[0] * b75[0] == doctest::Approx(3.87e-4).epsilon(0.01));
  CHECK(b75[1] * b75[1] == doctest::Approx(3.04e-3).epsilon(0.01));
  CHECK(b75[2] * b75[2] == doctest::Approx(0.9966).epsilon(1e-3));
}

TEST_CASE("beta0^2 is maximized at theta_inf = 1") {
  // property of the x e^-x form
  const double at1 = 1.0 * std::exp(-1.0);
  for (double th : {0.2, 0.5, 0.9, 0.999, 1.001, 1.5, 3.0})
    CHECK(th * std::exp(-th) <= at1 + 1e-15);
}

TEST_CASE("photon wavepackets: identities and shape") {
  auto p = paper_params();
  auto f1 = gaussian_pulse(0.12, 0.0);
  auto grid = make_grid(-0.72, 0.72, 2000);
  auto wp = photon_wavepackets(p, f1, grid);
  PhotonModes modes(p, f1);

  // pointwise flux identity and the algebraic ratio
  for (int i = 0; i < grid.n_points; i += 37) {
    const double t = grid.time_at(i);
    auto pop = populations(t, p, f1);
    const double total = wp.phi_I[i] * wp.phi_I[i] + wp.phi_II[i] * wp.phi_II[i];
    CHECK(std::abs(total - modes.alpha1() * envelope_eval(f1, t) * (pop[0] + pop[1])) < 1e-10);
    CHECK(wp.phi_I[i] >= 0.0);
    CHECK(wp.phi_II[i] >= 0.0);
    if (wp.phi_I[i] > 1e-8)
      CHECK(wp.phi_II[i] / wp.phi_I[i] == doctest::Approx(std::sqrt(modes.theta(t))).epsilon(1e-9));
  }

  // integrals match the beta identities
  const double int_I = integrate(
      [&](double t) { return modes.phi_I(t) * modes.phi_I(t); }, -0.72, 0.72, 1e-12);
  const double int_II = integrate(
      [&](double t) { return modes.phi_II(t) * modes.phi_II(t); }, -0.72, 0.72, 1e-12);
  CHECK(int_I == doctest::Approx(0.7156).epsilon(1e-3));
  CHECK(int_II == doctest::Approx(0.3580).epsilon(1e-3));

  // photon I rises first
  std::size_t peak_I = 0, peak_II = 0;
  for (std::size_t i = 0; i < wp.phi_I.size(); ++i) {
    if (wp.phi_I[i] > wp.phi_I[peak_I]) peak_I = i;
    if (wp.phi_II[i] > wp.phi_II[peak_II]) peak_II = i;
  }
  CHECK(peak_I < peak_II);

  // too-narrow grid violates the norm identity
  CHECK_THROWS(photon_wavepackets(p, f1, make_grid(-0.3, 0.3, 500)));

  // parallel and serial sampling agree bit-for-bit
  auto wps = photon_wavepackets_serial(p, f1, grid);
  CHECK(wp.phi_I == wps.phi_I);
  CHECK(wp.phi_II == wps.phi_II);
}

TEST_CASE("cumulative flux") {
  auto p = paper_params();
  auto f1 = gaussian_pulse(0.12, 0.0);
  CHECK(cumulative_flux(-10.0, p, f1) == doctest::Approx(0.0));
  auto beta = beta_coefficients(p, f1);
  const double expected = beta[1] * beta[1] + 2.0 * beta[2] * beta[2];
  CHECK(expected == doctest::Approx(1.0736).epsilon(1e-3));
  CHECK(cumulative_flux(10.0, p, f1) == doctest::Approx(expected).epsilon(1e-8));
}
