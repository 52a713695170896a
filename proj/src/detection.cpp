#include "qlink/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlink/rng.hpp"

namespace qlink {

namespace {

void check_distribution(const std::array<double, 3>& beta_sq) {
  double sum = 0.0;
  for (double p : beta_sq) {
    if (p < 0.0 || p > 1.0 + 1e-12)
      throw std::invalid_argument("detection: invalid probability entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("detection: beta^2 does not sum to 1");
}

void check_detector(const DetectorModel& det) {
  if (det.efficiency < 0.0 || det.efficiency > 1.0 || det.dark_prob < 0.0 ||
      det.dark_prob > 1.0)
    throw std::invalid_argument("detection: detector probabilities must be in [0,1]");
}

// Receiver state for one trial: -1, 0 or +1 (the mirror of the sender m_F).
int sample_receiver_state(const std::array<double, 3>& beta_sq, double u) {
  if (u < beta_sq[2]) return -1;
  if (u < beta_sq[2] + beta_sq[1]) return 0;
  return +1;
}

struct TrialOutcome {
  bool plus = false;    // discriminated D2 click
  bool minus = false;   // discriminated D1 click
  bool second = false;  // undiscriminated second-stage click
};

TrialOutcome run_trial(const std::array<double, 3>& beta_sq, const DetectorModel& det,
                       TrialRng& rng) {
  const int m = sample_receiver_state(beta_sq, rng.uniform());
  bool d1 = false, d2 = false;
  if (m == -1) d1 = rng.bernoulli(det.efficiency);
  if (m == +1) d2 = rng.bernoulli(det.efficiency);
  if (det.dark_prob > 0.0) {
    d1 = d1 || rng.bernoulli(det.dark_prob);
    d2 = d2 || rng.bernoulli(det.dark_prob);
  }

  TrialOutcome out;
  // A simultaneous D1+D2 event is ambiguous and discarded to stage two.
  out.plus = d2 && !d1;
  out.minus = d1 && !d2;
  if (!out.plus && !out.minus) {
    bool click = (m == 0) && rng.bernoulli(det.efficiency);
    if (det.dark_prob > 0.0) click = click || rng.bernoulli(det.dark_prob);
    out.second = click;
  }
  return out;
}

CountRecord readout_impl(const std::array<double, 3>& beta_sq, const DetectorModel& det,
                         std::uint64_t n_trials, bool parallel) {
  check_distribution(beta_sq);
  check_detector(det);
  if (n_trials < 1) throw std::invalid_argument("simulate_readout: n_trials >= 1 required");

  std::uint64_t plus = 0, minus = 0, second = 0;
  const std::int64_t n = static_cast<std::int64_t>(n_trials);

#pragma omp parallel for schedule(static) reduction(+ : plus, minus, second) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    TrialRng rng(det.seed, static_cast<std::uint64_t>(i));
    const TrialOutcome out = run_trial(beta_sq, det, rng);
    plus += out.plus ? 1 : 0;
    minus += out.minus ? 1 : 0;
    second += out.second ? 1 : 0;
  }

  CountRecord rec;
  rec.n_trials = n_trials;
  rec.n_plus = plus;
  rec.n_minus = minus;
  rec.n_silent = n_trials - plus - minus;
  rec.n_second_stage = second;
  return rec;
}

CoincidenceRecord correlation_impl(const JointState& joint, const DetectorModel& det,
                                   std::uint64_t n_trials, bool parallel) {
  if (!joint.is_complete)
    throw std::invalid_argument("simulate_two_node_correlation: joint state incomplete");
  check_detector(det);
  const std::array<double, 3> beta_sq = {joint.beta[0] * joint.beta[0],
                                         joint.beta[1] * joint.beta[1],
                                         joint.beta[2] * joint.beta[2]};
  check_distribution(beta_sq);

  std::uint64_t coinc = 0, silent = 0, lost = 0, violations = 0;
  const std::int64_t n = static_cast<std::int64_t>(n_trials);

#pragma omp parallel for schedule(static) reduction(+ : coinc, silent, lost, violations) \
    if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    TrialRng rng(det.seed, static_cast<std::uint64_t>(i));
    double u = rng.uniform();
    int m_a;  // sender node state
    if (u < beta_sq[0]) m_a = -1;
    else if (u < beta_sq[0] + beta_sq[1]) m_a = 0;
    else m_a = +1;
    const int m_b = -m_a;

    if (m_a == 0) {
      const bool ca = rng.bernoulli(det.efficiency);
      const bool cb = rng.bernoulli(det.efficiency);
      if (ca && cb) {
        silent += 1;
        coinc += 1;
      } else {
        lost += 1;
      }
      continue;
    }
    // Polarized emission: state +1 -> sigma+ (D2), state -1 -> sigma- (D1).
    const bool ca = rng.bernoulli(det.efficiency);
    const bool cb = rng.bernoulli(det.efficiency);
    if (ca && cb) {
      // With ideal optics the polarizations are fixed by the states; a
      // violation would need m_a and m_b of equal sign, which Eq.-level
      // anticorrelation forbids.
      if (m_a + m_b == 0) coinc += 1;
      else violations += 1;
    } else {
      lost += 1;
    }
  }

  CoincidenceRecord rec;
  rec.n_trials = n_trials;
  rec.coincidences = coinc;
  rec.silent_pairs = silent;
  rec.lost = lost;
  rec.violation_count = violations;
  return rec;
}

}  // namespace

CountRecord simulate_readout(const std::array<double, 3>& beta_sq,
                             const DetectorModel& det, std::uint64_t n_trials) {
  return readout_impl(beta_sq, det, n_trials, true);
}

CountRecord simulate_readout_serial(const std::array<double, 3>& beta_sq,
                                    const DetectorModel& det, std::uint64_t n_trials) {
  return readout_impl(beta_sq, det, n_trials, false);
}

RatioEstimate estimate_ratio(const CountRecord& rec) {
  if (rec.n_minus == 0) throw std::invalid_argument("estimate_ratio: n_minus is zero");
  RatioEstimate est;
  est.ratio = static_cast<double>(rec.n_plus) / static_cast<double>(rec.n_minus);
  if (rec.n_plus == 0) {
    // One-sided: 1-sigma upper bound from a single expected count.
    est.se = 1.0 / static_cast<double>(rec.n_minus);
    return est;
  }
  const double np = static_cast<double>(rec.n_plus);
  const double nm = static_cast<double>(rec.n_minus);
  const double n = static_cast<double>(rec.n_trials);
  const double pp = np / n;
  const double pm = nm / n;
  est.se = est.ratio * std::sqrt((1.0 - pp) / np + (1.0 - pm) / nm + 2.0 / n);
  return est;
}

CoincidenceRecord simulate_two_node_correlation(const JointState& joint,
                                                const DetectorModel& det,
                                                std::uint64_t n_trials) {
  return correlation_impl(joint, det, n_trials, true);
}

CoincidenceRecord simulate_two_node_correlation_serial(const JointState& joint,
                                                       const DetectorModel& det,
                                                       std::uint64_t n_trials) {
  return correlation_impl(joint, det, n_trials, false);
}

FidelityEstimate fidelity_estimate(const CountRecord& rec, int target_m,
                                   const DetectorModel& det) {
  if (det.efficiency <= 0.0)
    throw std::invalid_argument("fidelity_estimate: zero detector efficiency");
  std::uint64_t count = 0;
  switch (target_m) {
    case +1: count = rec.n_plus; break;
    case -1: count = rec.n_minus; break;
    case 0: count = rec.n_second_stage; break;
    default: throw std::invalid_argument("fidelity_estimate: target_m must be -1, 0 or +1");
  }
  const double n = static_cast<double>(rec.n_trials);
  if (n <= 0) throw std::invalid_argument("fidelity_estimate: empty record");
  const double p = std::min(1.0, static_cast<double>(count) / (n * det.efficiency));
  FidelityEstimate est;
  est.fidelity = p * p;
  const double se_p = std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n) / det.efficiency;
  est.se = 2.0 * p * se_p;
  return est;
}

}  // namespace qlink
