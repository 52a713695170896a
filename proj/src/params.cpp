#include "qlink/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlink {

SystemParams build_params(const ParamsIn& in) {
  if (in.delta == 0.0)
    throw std::invalid_argument("build_params: delta must be nonzero (Raman coupling divides by it)");
  if (in.g <= 0 || in.k <= 0 || in.gamma_sp <= 0)
    throw std::invalid_argument("build_params: g, k, gamma_sp must be strictly positive");
  if (in.omega1 < 0 || in.omega2 < 0)
    throw std::invalid_argument("build_params: omega1, omega2 must be non-negative");

  SystemParams p;
  p.g = in.g * two_pi;
  p.k = in.k * two_pi;
  p.gamma_sp = in.gamma_sp * two_pi;
  p.omega1 = in.omega1 * two_pi;
  p.omega2 = in.omega2 * two_pi;
  p.delta = in.delta * two_pi;
  p.delta_b_f = in.delta_b_f * two_pi;
  p.delta_b_fp = in.delta_b_fp * two_pi;
  p.phi2 = in.phi2;
  return p;
}

double raman_coupling(const SystemParams& p, Node node) {
  const double omega = (node == Node::sender) ? p.omega1 : p.omega2;
  return p.g * omega / p.delta;
}

double cooperativity(const SystemParams& p) {
  return 4.0 * p.g * p.g / (p.k * p.gamma_sp);
}

PulseProfile gaussian_pulse(double duration, double center) {
  if (duration <= 0) throw std::invalid_argument("gaussian_pulse: duration must be positive");
  PulseProfile prof;
  prof.shape = PulseShape::gaussian;
  prof.duration = duration;
  prof.center = center;
  return prof;
}

PulseProfile tabulated_pulse(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw std::invalid_argument("tabulated_pulse: grid/values must have equal size >= 2");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("tabulated_pulse: grid must be sorted");
  for (double v : values)
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("tabulated_pulse: envelope values must lie in [0,1]");
  PulseProfile prof;
  prof.shape = PulseShape::tabulated;
  prof.grid = std::move(grid);
  prof.values = std::move(values);
  prof.center = 0.5 * (prof.grid.front() + prof.grid.back());
  prof.duration = prof.grid.back() - prof.grid.front();
  return prof;
}

double envelope_eval(const PulseProfile& profile, double t) {
  if (profile.shape == PulseShape::gaussian) {
    const double x = (t - profile.center) / profile.duration;
    return std::exp(-x * x);
  }
  const auto& g = profile.grid;
  const auto& v = profile.values;
  if (t < g.front() || t > g.back())
    throw std::out_of_range("envelope_eval: t outside tabulated range");
  auto it = std::upper_bound(g.begin(), g.end(), t);
  if (it == g.end()) return v.back();
  const std::size_t i = static_cast<std::size_t>(it - g.begin());
  const double w = (t - g[i - 1]) / (g[i] - g[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) t[static_cast<std::size_t>(i)] = time_at(i);
  return t;
}

TimeGrid make_grid(double start, double end, int n_points, double adaptive_tol) {
  if (!(start < end)) throw std::invalid_argument("make_grid: start must precede end");
  if (n_points < 2) throw std::invalid_argument("make_grid: need at least 2 points");
  if (adaptive_tol <= 0) throw std::invalid_argument("make_grid: adaptive_tol must be positive");
  return TimeGrid{start, end, n_points, adaptive_tol};
}

bool DiagnosticsReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

bool DiagnosticsReport::any_marginal() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::marginal) return true;
  return false;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::marginal: return "marginal";
    default: return "violated";
  }
}

namespace {

// margin is lhs/rhs where rhs already includes the threshold factor.
// Marginal band: the underlying inequality still holds by >= factor 2.
DiagCheck make_check(std::string name, double lhs, double rhs, double marginal_ratio) {
  DiagCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = (rhs > 0) ? lhs / rhs : 0.0;
  if (c.margin >= 1.0)
    c.status = CheckStatus::pass;
  else if (c.margin >= marginal_ratio)
    c.status = CheckStatus::marginal;
  else
    c.status = CheckStatus::violated;
  c.pass = (c.status != CheckStatus::violated);
  return c;
}

}  // namespace

DiagnosticsReport validate_regime(const SystemParams& p, const PulseProfile& f1,
                                  const TimeGrid& grid) {
  DiagnosticsReport rep;
  const double g1 = std::abs(raman_coupling(p, Node::sender));

  // |G1| < k : two-photon Rabi cycling slower than photon leakage.
  rep.checks.push_back(make_check("photon_leakage |G1|<k", p.k, g1, 0.5));

  // C_c >> 1, threshold 10, marginal down to 2.
  rep.checks.push_back(make_check("cooperativity C>>1", cooperativity(p), 10.0, 0.2));

  // |Delta| >> k, gamma_sp, Omega1, Zeeman splittings; threshold 10.
  const double hier = std::max({p.k, p.gamma_sp, p.omega1,
                                std::abs(p.delta_b_f), std::abs(p.delta_b_fp)});
  rep.checks.push_back(make_check("detuning_hierarchy |Delta|>>rates", std::abs(p.delta),
                                  10.0 * hier, 0.2));

  // Adiabatic limit k*T1 >> 1; threshold 10, marginal down to 2.
  rep.checks.push_back(make_check("adiabatic k*T1>>1", p.k * f1.duration, 10.0, 0.2));

  // Slow variation: |d f1^(1/2)/dt| << |Delta| f1^(1/2), wherever f1 > 1e-6.
  double worst = 0.0;  // max of |df^(1/2)/dt| / (|Delta| f^(1/2))
  const double dt = grid.dt();
  for (int i = 1; i + 1 < grid.n_points; ++i) {
    const double t = grid.time_at(i);
    const double f = envelope_eval(f1, t);
    if (f <= 1e-6) continue;
    const double sm = std::sqrt(envelope_eval(f1, t - dt));
    const double sp = std::sqrt(envelope_eval(f1, t + dt));
    const double deriv = std::abs(sp - sm) / (2.0 * dt);
    worst = std::max(worst, deriv / (std::abs(p.delta) * std::sqrt(f)));
  }
  // Pass when the envelope varies at least 10x slower than Delta.
  const double slow_margin = (worst > 0) ? 1.0 / (10.0 * worst) : 1e12;
  rep.checks.push_back(make_check("slow_variation dOmega/dt<<Delta*Omega", slow_margin, 1.0, 0.2));

  return rep;
}

}  // namespace qlink
