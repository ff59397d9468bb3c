#pragma once

#include <array>
#include <string>
#include <vector>

namespace spdc {

// Raw tally of a counting run; rates in 1/s, window in s.
struct CountRecord {
  double n_s = 0.0;
  double n_i = 0.0;
  double n_c = 0.0;
  double tau_c_s = 0.0;
  double pump_power_mw = 0.0;
  double duration_s = 1.0;
};

struct CurvePoint {
  double phi1_deg = 0.0;
  double phi2_deg = 0.0;
  double rate_hz = 0.0;
  double duration_s = 1.0;
};

// Polarization-analyzer scan at fixed phi2 (half-wave-plate angles).
struct CorrelationCurve {
  std::vector<CurvePoint> points;
  std::string basis;  // e.g. "HV" or "45"
};

struct VisibilityFit {
  double visibility = 0.0;
  double mean_rate = 0.0;  // fitted offset R_bar
  double phase_deg = 0.0;  // phi_0 of R_bar (1 - V cos 4(phi1 - phi_0))
  double residual_rms = 0.0;
  bool phase_defined = true;  // false for a (near-)constant curve
};

struct CorrectedVisibility {
  double value = 0.0;
  bool clamped = false;  // accidental floor over-subtracted, clamped to 1
};

struct EfficiencyRatios {
  double overall = 0.0;  // n_c / sqrt(n_s n_i)
  double arm_s = 0.0;    // n_c / n_i
  double arm_i = 0.0;    // n_c / n_s
};

struct Correlation {
  double value = 0.0;  // E in [-1, 1]
  double sigma = 0.0;  // Poisson standard error
};

struct BellResult {
  std::array<Correlation, 4> correlations;  // E(a,b), E(a,b'), E(a',b), E(a',b')
  double s = 0.0;
  double sigma_s = 0.0;
};

// Accidental coincidence rate n_s n_i tau_c (1 - eta).
double accidental_rate(double n_s, double n_i, double tau_c_s, double eta);

EfficiencyRatios efficiency_ratio(const CountRecord& rec);

// Least-squares line through the origin over records with
// pump_power <= cutoff; returns coincidences per second per mW.
double power_slope(const std::vector<CountRecord>& records,
                   double power_cutoff_mw);

// Linear least squares of R(phi1) = R_bar (1 - V cos 4(phi1 - phi_0)) in
// the basis {1, cos 4 phi1, sin 4 phi1}. Requires >= 4 distinct angles.
VisibilityFit sincos_fit(const CorrelationCurve& curve);

// Flat-floor accidental subtraction, V_corr = V R_bar / (R_bar - n_acc).
CorrectedVisibility corrected_visibility(const VisibilityFit& fit,
                                         double n_acc_hz);

// E = (n_pp + n_mm - n_pm - n_mp) / total with propagated Poisson error.
Correlation correlation_e(double n_pp, double n_pm, double n_mp, double n_mm);

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), errors added in quadrature.
BellResult chsh_s(const std::array<Correlation, 4>& correlations);

// psi-minus two-analyzer model in half-wave-plate angles:
//   R = R_bar (1 - V cos 4(phi1 - phi2)).
double model_coincidence_rate(double phi1_deg, double phi2_deg, double v,
                              double mean_rate_hz);

}  // namespace spdc
