#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spdc/coincidence.hpp"

namespace spdc {

// Event-level Monte-Carlo source model. Pairs arrive as a Poisson process
// with zero relative timing jitter; each photon survives its arm with the
// arm efficiency; uncorrelated background events are added per arm. Two
// detections count as a coincidence when they fall within a window of
// total width tau_c (|dt| <= tau_c / 2), matching the accidental-rate
// formula n_s n_i tau_c.
struct SimConfig {
  double pair_rate_per_mw = 0.0;  // generated pairs, 1/s/mW
  double pump_power_mw = 0.0;
  double eta_s = 1.0;
  double eta_i = 1.0;
  double background_s_hz = 0.0;
  double background_i_hz = 0.0;
  double tau_c_s = 0.0;
  double dead_time_s = 0.0;  // non-paralyzable, 0 = off
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimOutput {
  double n_s = 0.0;          // observed singles rate, 1/s
  double n_i = 0.0;
  double n_c = 0.0;          // coincidence rate, 1/s
  double n_acc_tally = 0.0;  // coincidences not from a common pair, 1/s
  long long coincidences = 0;
  long long accidentals = 0;
};

SimOutput simulate_counts(const SimConfig& cfg);

// One simulate_counts per power with independently derived sub-seeds;
// output ordered as the input powers.
std::vector<std::pair<double, SimOutput>> simulate_power_sweep(
    const SimConfig& cfg, const std::vector<double>& powers_mw);

// Polarization-correlation scan: per setting the coincidence count is
// Poisson with mean duration * (model rate + accidental floor).
CorrelationCurve simulate_correlation_scan(
    const SimConfig& cfg, double visibility,
    const std::vector<std::pair<double, double>>& angles_deg);

// Mean fringe rate implied by the config throughput (analyzers pass half
// of each arm on average): R_bar = pair_rate eta_s eta_i / 2.
double scan_mean_rate(const SimConfig& cfg);

// Accidental floor from the implied analyzed singles rates.
double scan_accidental_floor(const SimConfig& cfg);

}  // namespace spdc
