#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qlink/params.hpp"

using namespace qlink;

namespace {

ParamsIn paper_in() {
  ParamsIn in;
  in.g = 12;
  in.k = 3;
  in.gamma_sp = 5.87;
  in.omega1 = 7;
  in.omega2 = 28;
  in.delta_b_f = -12;
  in.delta_b_fp = 4;
  in.delta = 100;
  return in;
}

}  // namespace

TEST_CASE("build_params converts 2pi*MHz to rad/us") {
  auto p = build_params(paper_in());
  CHECK(p.g == doctest::Approx(75.398223686).epsilon(1e-9));
  CHECK(p.delta == doctest::Approx(100 * two_pi));

  // unit round-trip to 12 significant digits
  CHECK(to_cycles_mhz(p.g) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(to_cycles_mhz(p.gamma_sp) == doctest::Approx(5.87).epsilon(1e-12));
}

TEST_CASE("build_params rejects bad inputs") {
  auto in = paper_in();
  in.delta = 0;
  CHECK_THROWS_AS(build_params(in), std::invalid_argument);
  in = paper_in();
  in.k = -3;
  CHECK_THROWS_AS(build_params(in), std::invalid_argument);
}

TEST_CASE("raman coupling") {
  auto p = build_params(paper_in());
  const double g1 = raman_coupling(p, Node::sender);
  CHECK(g1 == doctest::Approx(two_pi * 0.84).epsilon(1e-12));
  CHECK(g1 == doctest::Approx(5.27787565803).epsilon(1e-9));

  // Omega2 = 4 Omega1 gives G2 = 4 G1
  CHECK(raman_coupling(p, Node::receiver) == doctest::Approx(4.0 * g1).epsilon(1e-12));

  auto in = paper_in();
  in.omega1 = 0;
  CHECK(raman_coupling(build_params(in), Node::sender) == 0.0);
}

TEST_CASE("cooperativity") {
  auto p = build_params(paper_in());
  CHECK(cooperativity(p) == doctest::Approx(32.7).epsilon(0.01));
  auto in = paper_in();
  in.g *= 2;
  CHECK(cooperativity(build_params(in)) == doctest::Approx(4 * cooperativity(p)).epsilon(1e-12));
}

TEST_CASE("envelope evaluation") {
  auto prof = gaussian_pulse(0.12, 0.0);
  CHECK(envelope_eval(prof, 0.0) == 1.0);
  CHECK(envelope_eval(prof, 0.12) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(envelope_eval(prof, 100.0) == doctest::Approx(0.0));
  // symmetry about the center
  for (double x : {0.01, 0.05, 0.3})
    CHECK(envelope_eval(prof, x) == envelope_eval(prof, -x));

  auto tab = tabulated_pulse({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK(envelope_eval(tab, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(envelope_eval(tab, 3.0), std::out_of_range);
}

TEST_CASE("regime diagnostics on the reference parameter set") {
  auto p = build_params(paper_in());
  auto f1 = gaussian_pulse(0.12, 0.0);
  auto grid = make_grid(-0.6, 0.6, 2001);
  auto rep = validate_regime(p, f1, grid);
  CHECK(rep.all_pass());

  // k*T1 = 2.26: below the x10 threshold but above factor 2 -> marginal
  bool found = false;
  for (const auto& c : rep.checks) {
    CHECK(c.margin > 0.0);
    CHECK(c.pass == (c.status != CheckStatus::violated));
    if (c.name.find("adiabatic") != std::string::npos) {
      found = true;
      CHECK(c.status == CheckStatus::marginal);
      CHECK(c.lhs == doctest::Approx(two_pi * 3 * 0.12).epsilon(1e-12));
    }
  }
  CHECK(found);
}

TEST_CASE("regime diagnostics flag violations") {
  auto in = paper_in();
  in.delta = 1;  // violates |Delta| >> Omega1
  auto p = build_params(in);
  auto f1 = gaussian_pulse(0.12, 0.0);
  auto grid = make_grid(-0.6, 0.6, 2001);
  auto rep = validate_regime(p, f1, grid);
  CHECK_FALSE(rep.all_pass());

  // Omega1 scaled so |G1| = 2k fails the leakage check
  in = paper_in();
  in.omega1 = 2.0 * in.k * in.delta / in.g;
  rep = validate_regime(build_params(in), f1, grid);
  bool leakage_failed = false;
  for (const auto& c : rep.checks)
    if (c.name.find("leakage") != std::string::npos) leakage_failed = (c.margin < 1.0);
  CHECK(leakage_failed);
}
