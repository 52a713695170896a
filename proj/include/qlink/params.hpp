#pragma once

#include <string>
#include <vector>

namespace qlink {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double pi = 3.1415926535897932384626433832795;

enum class Node { sender, receiver };

// Internal unit convention: angular frequencies in rad/us, times in us.
// Inputs are quoted in units of 2pi*MHz and converted exactly once here
// (x * 2pi rad/us, since 1 MHz = 1/us).
struct SystemParams {
  double g;           // atom-cavity coupling
  double k;           // cavity decay rate
  double gamma_sp;    // spontaneous decay rate
  double omega1;      // peak Rabi frequency, sender drive
  double omega2;      // peak Rabi frequency, receiver drive
  double delta;       // one-photon detuning (signed)
  double delta_b_f;   // ground-state Zeeman splitting (signed)
  double delta_b_fp;  // excited-state Zeeman splitting (signed)
  double phi2;        // receiver-drive phase (rad)
};

// Raw inputs in 2pi*MHz (phi2 in rad, passed through unchanged).
struct ParamsIn {
  double g = 0;
  double k = 0;
  double gamma_sp = 0;
  double omega1 = 0;
  double omega2 = 0;
  double delta = 0;
  double delta_b_f = 0;
  double delta_b_fp = 0;
  double phi2 = pi / 2;
};

SystemParams build_params(const ParamsIn& in);

// Inverse of the build_params conversion, for I/O formatting.
inline double to_cycles_mhz(double rad_per_us) { return rad_per_us / two_pi; }

// Effective Raman coupling G = g*Omega/Delta for the selected node.
double raman_coupling(const SystemParams& p, Node node);

// 4 g^2 / (k gamma_sp)
double cooperativity(const SystemParams& p);

enum class PulseShape { gaussian, tabulated };

// Dimensionless drive envelope f(t) with peak value 1.
struct PulseProfile {
  PulseShape shape = PulseShape::gaussian;
  double duration = 0;  // T
  double center = 0;    // t0
  std::vector<double> grid;    // tabulated only
  std::vector<double> values;  // tabulated only
};

PulseProfile gaussian_pulse(double duration, double center = 0.0);
PulseProfile tabulated_pulse(std::vector<double> grid, std::vector<double> values);

double envelope_eval(const PulseProfile& profile, double t);

struct TimeGrid {
  double start = 0;
  double end = 0;
  int n_points = 2;
  double adaptive_tol = 1e-10;

  double dt() const { return (end - start) / (n_points - 1); }
  double time_at(int i) const { return start + i * dt(); }
  std::vector<double> times() const;
};

TimeGrid make_grid(double start, double end, int n_points, double adaptive_tol = 1e-10);

enum class CheckStatus { pass, marginal, violated };

struct DiagCheck {
  std::string name;
  double lhs = 0;     // quantity that should dominate
  double rhs = 0;     // quantity it is compared against (incl. threshold factor)
  double margin = 0;  // lhs/rhs; >= 1 means the check passes at full threshold
  CheckStatus status = CheckStatus::violated;
  bool pass = false;  // true unless violated (marginal counts as pass)
};

struct DiagnosticsReport {
  std::vector<DiagCheck> checks;
  bool all_pass() const;
  bool any_marginal() const;
};

const char* to_string(CheckStatus s);

// Checks the operating-regime hierarchy: photon leakage faster than the
// effective Rabi cycling, high cooperativity, far-off-resonance hierarchy,
// adiabatic limit k*T1 and slow envelope variation. ">>" is taken as a
// factor of 10; a check holding by at least a factor 2 but less than 10 is
// reported as marginal rather than violated.
DiagnosticsReport validate_regime(const SystemParams& p, const PulseProfile& f1,
                                  const TimeGrid& grid);

}  // namespace qlink
