#pragma once

#include <array>
#include <cstdint>

#include "qlink/receiver.hpp"

namespace qlink {

struct DetectorModel {
  double efficiency = 1.0;  // per detector
  double dark_prob = 0.0;   // dark count per measurement window per detector
  std::uint64_t seed = 0;
};

struct CountRecord {
  std::uint64_t n_plus = 0;          // sigma+ clicks at D2
  std::uint64_t n_minus = 0;         // sigma- clicks at D1
  std::uint64_t n_silent = 0;        // no discriminated click in stage one
  std::uint64_t n_second_stage = 0;  // clicks in the m=0 follow-up pulse
  std::uint64_t n_trials = 0;
};

// beta_sq is indexed by the sender's m_F in order (-1, 0, +1); the receiver
// occupies the mirrored state -m_F, so P(receiver m=-1) = beta_sq[2] etc.
CountRecord simulate_readout(const std::array<double, 3>& beta_sq,
                             const DetectorModel& det, std::uint64_t n_trials);
CountRecord simulate_readout_serial(const std::array<double, 3>& beta_sq,
                                    const DetectorModel& det, std::uint64_t n_trials);

struct RatioEstimate {
  double ratio = 0;
  double se = 0;
};

// ratio = n_plus/n_minus. Standard error by first-order propagation of the
// multinomial variances: se = r * sqrt((1-p+)/n+ + (1-p-)/n- + 2/n) with
// p+- = n+-/n, using cov(n+, n-) = -n p+ p-.
RatioEstimate estimate_ratio(const CountRecord& rec);

struct CoincidenceRecord {
  std::uint64_t n_trials = 0;
  std::uint64_t coincidences = 0;      // both nodes registered correlated outcomes
  std::uint64_t silent_pairs = 0;      // m=0 trials with both second-stage clicks
  std::uint64_t lost = 0;              // at least one photon went undetected
  std::uint64_t violation_count = 0;   // polarized clicks breaking anticorrelation
};

CoincidenceRecord simulate_two_node_correlation(const JointState& joint,
                                                const DetectorModel& det,
                                                std::uint64_t n_trials);
CoincidenceRecord simulate_two_node_correlation_serial(const JointState& joint,
                                                       const DetectorModel& det,
                                                       std::uint64_t n_trials);

struct FidelityEstimate {
  double fidelity = 0;
  double se = 0;
};

// target_m selects the receiver Zeeman state (-1, 0 or +1); the estimated
// diagonal weight p is efficiency-corrected click rate, and F = p^2.
FidelityEstimate fidelity_estimate(const CountRecord& rec, int target_m,
                                   const DetectorModel& det);

}  // namespace qlink
