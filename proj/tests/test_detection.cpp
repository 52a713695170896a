#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qlink/detection.hpp"

using namespace qlink;

namespace {

JointState complete_state(const std::array<double, 3>& beta_sq) {
  JointState js;
  js.beta = {std::sqrt(beta_sq[0]), std::sqrt(beta_sq[1]), std::sqrt(beta_sq[2])};
  js.entropy = entanglement_entropy(beta_sq, 1e-3);
  js.is_complete = true;
  return js;
}

}  // namespace

TEST_CASE("deterministic mappings") {
  DetectorModel ideal{1.0, 0.0, 99};
  // all population in m_F=+1 at the sender -> receiver always m=-1 -> D1
  auto rec = simulate_readout({0.0, 0.0, 1.0}, ideal, 5000);
  CHECK(rec.n_minus == 5000);
  CHECK(rec.n_plus == 0);
  CHECK(rec.n_silent == 0);

  DetectorModel blind{0.0, 0.0, 99};
  auto rec0 = simulate_readout({0.2, 0.3, 0.5}, blind, 5000);
  CHECK(rec0.n_plus == 0);
  CHECK(rec0.n_minus == 0);
  CHECK(rec0.n_silent == 5000);
  CHECK(rec0.n_second_stage == 0);
}

TEST_CASE("count invariants and seed determinism") {
  DetectorModel det{0.8, 0.001, 1234};
  auto a = simulate_readout({0.31, 0.36, 0.33}, det, 100000);
  CHECK(a.n_plus + a.n_minus + a.n_silent == a.n_trials);
  CHECK(a.n_second_stage <= a.n_silent);

  auto b = simulate_readout({0.31, 0.36, 0.33}, det, 100000);
  CHECK(a.n_plus == b.n_plus);
  CHECK(a.n_minus == b.n_minus);
  CHECK(a.n_second_stage == b.n_second_stage);

  // parallel kernel agrees with the serial reference exactly
  auto s = simulate_readout_serial({0.31, 0.36, 0.33}, det, 100000);
  CHECK(a.n_plus == s.n_plus);
  CHECK(a.n_minus == s.n_minus);
  CHECK(a.n_silent == s.n_silent);
  CHECK(a.n_second_stage == s.n_second_stage);

  DetectorModel other{0.8, 0.001, 1235};
  auto c = simulate_readout({0.31, 0.36, 0.33}, other, 100000);
  CHECK(a.n_plus != c.n_plus);  // different seed, different stream
}

TEST_CASE("readout statistics converge to the state weights") {
  DetectorModel ideal{1.0, 0.0, 2024};
  const std::array<double, 3> beta_sq = {0.31, 0.36, 0.33};
  const std::uint64_t n = 1000000;
  auto rec = simulate_readout(beta_sq, ideal, n);

  // n_plus/n counts receiver m=+1 events, i.e. sender beta^2_{-1}
  const double p = 0.31;
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(rec.n_plus) / n - p) < 4 * se);

  auto est = estimate_ratio(rec);
  const double want = 0.31 / 0.33;
  CHECK(std::abs(est.ratio - want) < 3 * est.se);
  CHECK(est.se > 0.0);
  CHECK(est.se < 0.01);
}

TEST_CASE("expected ratio is efficiency-invariant") {
  const std::array<double, 3> beta_sq = {0.31, 0.36, 0.33};
  const std::uint64_t n = 1000000;
  auto full = simulate_readout(beta_sq, DetectorModel{1.0, 0.0, 7}, n);
  auto half = simulate_readout(beta_sq, DetectorModel{0.5, 0.0, 7}, n);
  auto ef = estimate_ratio(full);
  auto eh = estimate_ratio(half);
  CHECK(std::abs(ef.ratio - eh.ratio) < 3 * std::sqrt(ef.se * ef.se + eh.se * eh.se));
}

TEST_CASE("ratio estimator arithmetic and errors") {
  CountRecord rec;
  rec.n_trials = 1000;
  rec.n_plus = 310;
  rec.n_minus = 330;
  rec.n_silent = 360;
  auto est = estimate_ratio(rec);
  CHECK(est.ratio == doctest::Approx(310.0 / 330.0).epsilon(1e-12));
  CHECK(est.se > 0.0);

  rec.n_plus = 330;
  rec.n_minus = 330;
  CHECK(estimate_ratio(rec).ratio == doctest::Approx(1.0));

  rec.n_plus = 0;
  CHECK(estimate_ratio(rec).ratio == doctest::Approx(0.0));

  rec.n_minus = 0;
  CHECK_THROWS_AS(estimate_ratio(rec), std::invalid_argument);
}

TEST_CASE("two-node correlation never violates anticorrelation") {
  auto js = complete_state({0.31, 0.36, 0.33});
  DetectorModel ideal{1.0, 0.0, 31337};
  auto rec = simulate_two_node_correlation(js, ideal, 200000);
  CHECK(rec.violation_count == 0);
  CHECK(rec.coincidences == rec.n_trials);  // ideal detectors see every pair
  CHECK(rec.lost == 0);

  // thinned detectors lose pairs but never create violations
  DetectorModel half{0.5, 0.0, 31337};
  auto rec2 = simulate_two_node_correlation(js, half, 200000);
  CHECK(rec2.violation_count == 0);
  const double yield = static_cast<double>(rec2.coincidences) / rec2.n_trials;
  CHECK(yield == doctest::Approx(0.25).epsilon(0.02));

  // m=0 trials produce correlated second-stage pairs
  CHECK(rec.silent_pairs > 0);

  // serial reference agrees exactly
  auto recs = simulate_two_node_correlation_serial(js, half, 200000);
  CHECK(rec2.coincidences == recs.coincidences);
  CHECK(rec2.lost == recs.lost);
  CHECK(rec2.silent_pairs == recs.silent_pairs);

  JointState incomplete = js;
  incomplete.is_complete = false;
  CHECK_THROWS(simulate_two_node_correlation(incomplete, ideal, 10));
}

TEST_CASE("fidelity estimate") {
  DetectorModel ideal{1.0, 0.0, 555};
  // long-pulse row: nearly everything ends in receiver m=-1
  auto rec = simulate_readout(
      {0.00065 / 1.00045, 0.0048 / 1.00045, 0.995 / 1.00045}, ideal, 1000000);
  auto est = fidelity_estimate(rec, -1, ideal);
  CHECK(est.fidelity == doctest::Approx(0.990).epsilon(5e-3));

  // perfect preparation
  auto perfect = simulate_readout({0.0, 0.0, 1.0}, ideal, 10000);
  CHECK(fidelity_estimate(perfect, -1, ideal).fidelity == doctest::Approx(1.0));
  // orthogonal preparation
  CHECK(fidelity_estimate(perfect, +1, ideal).fidelity == doctest::Approx(0.0));

  CHECK_THROWS(fidelity_estimate(perfect, -1, DetectorModel{0.0, 0.0, 1}));
  CHECK_THROWS(fidelity_estimate(perfect, 5, ideal));
}

TEST_CASE("invalid inputs") {
  DetectorModel ideal{1.0, 0.0, 1};
  CHECK_THROWS(simulate_readout({0.5, 0.2, 0.2}, ideal, 100));
  CHECK_THROWS(simulate_readout({0.31, 0.36, 0.33}, ideal, 0));
  CHECK_THROWS(simulate_readout({0.31, 0.36, 0.33}, DetectorModel{1.5, 0.0, 1}, 100));
}
