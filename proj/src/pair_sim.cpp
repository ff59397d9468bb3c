#include "spdc/pair_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spdc/rng.hpp"

namespace spdc {

namespace {

struct Event {
  double t;
  long long pair_id;  // -1 for background
};

// Poisson stream of tagged events over [0, duration).
void append_stream(std::vector<Event>& out, Rng& rng, double rate,
                   double duration, long long pair_id) {
  if (rate <= 0.0) return;
  double t = rng.exponential(rate);
  while (t < duration) {
    out.push_back({t, pair_id});
    t += rng.exponential(rate);
  }
}

void merge_sorted(std::vector<Event>& a, std::vector<Event>& b) {
  std::vector<Event> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(),
             std::back_inserter(merged),
             [](const Event& x, const Event& y) { return x.t < y.t; });
  a.swap(merged);
}

// Non-paralyzable detector dead time.
void apply_dead_time(std::vector<Event>& events, double dead_time) {
  if (dead_time <= 0.0 || events.empty()) return;
  std::vector<Event> kept;
  kept.reserve(events.size());
  double last = -1.0;
  for (const Event& e : events) {
    if (last < 0.0 || e.t - last >= dead_time) {
      kept.push_back(e);
      last = e.t;
    }
  }
  events.swap(kept);
}

}  // namespace

void SimConfig::validate() const {
  if (pair_rate_per_mw < 0.0 || pump_power_mw < 0.0 || background_s_hz < 0.0 ||
      background_i_hz < 0.0 || tau_c_s < 0.0 || dead_time_s < 0.0)
    throw std::invalid_argument("rates and times must be non-negative");
  if (eta_s < 0.0 || eta_s > 1.0 || eta_i < 0.0 || eta_i > 1.0)
    throw std::invalid_argument("arm efficiencies must lie in [0, 1]");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("duration must be positive");
}

SimOutput simulate_counts(const SimConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const double pair_rate = cfg.pair_rate_per_mw * cfg.pump_power_mw;

  // Draw order is fixed: pair stream with both survival trials per pair,
  // then the two background streams.
  std::vector<Event> arm_s, arm_i;
  if (pair_rate > 0.0) {
    long long id = 0;
    double t = rng.exponential(pair_rate);
    while (t < cfg.duration_s) {
      const bool keep_s = rng.bernoulli(cfg.eta_s);
      const bool keep_i = rng.bernoulli(cfg.eta_i);
      if (keep_s) arm_s.push_back({t, id});
      if (keep_i) arm_i.push_back({t, id});
      ++id;
      t += rng.exponential(pair_rate);
    }
  }
  std::vector<Event> bg;
  append_stream(bg, rng, cfg.background_s_hz, cfg.duration_s, -1);
  merge_sorted(arm_s, bg);
  bg.clear();
  append_stream(bg, rng, cfg.background_i_hz, cfg.duration_s, -1);
  merge_sorted(arm_i, bg);

  apply_dead_time(arm_s, cfg.dead_time_s);
  apply_dead_time(arm_i, cfg.dead_time_s);

  // Greedy earliest-match pairing within |dt| <= tau_c / 2.
  const double half_window = cfg.tau_c_s / 2.0;
  long long n_c = 0, n_acc = 0;
  std::size_t j = 0;
  for (const Event& es : arm_s) {
    while (j < arm_i.size() && arm_i[j].t < es.t - half_window) ++j;
    if (j < arm_i.size() && std::fabs(arm_i[j].t - es.t) <= half_window) {
      ++n_c;
      if (es.pair_id < 0 || arm_i[j].pair_id < 0 ||
          es.pair_id != arm_i[j].pair_id)
        ++n_acc;
      ++j;  // each event matched at most once
    }
  }

  SimOutput out;
  out.n_s = static_cast<double>(arm_s.size()) / cfg.duration_s;
  out.n_i = static_cast<double>(arm_i.size()) / cfg.duration_s;
  out.n_c = static_cast<double>(n_c) / cfg.duration_s;
  out.n_acc_tally = static_cast<double>(n_acc) / cfg.duration_s;
  out.coincidences = n_c;
  out.accidentals = n_acc;
  return out;
}

std::vector<std::pair<double, SimOutput>> simulate_power_sweep(
    const SimConfig& cfg, const std::vector<double>& powers_mw) {
  if (powers_mw.empty())
    throw std::invalid_argument("power sweep needs at least one power");
  std::vector<std::pair<double, SimOutput>> out;
  out.reserve(powers_mw.size());
  for (std::size_t i = 0; i < powers_mw.size(); ++i) {
    SimConfig run = cfg;
    run.pump_power_mw = powers_mw[i];
    run.seed = Rng::derive_seed(cfg.seed, i);
    out.emplace_back(powers_mw[i], simulate_counts(run));
  }
  return out;
}

double scan_mean_rate(const SimConfig& cfg) {
  return 0.5 * cfg.pair_rate_per_mw * cfg.pump_power_mw * cfg.eta_s *
         cfg.eta_i;
}

double scan_accidental_floor(const SimConfig& cfg) {
  const double pair_rate = cfg.pair_rate_per_mw * cfg.pump_power_mw;
  const double n_s = 0.5 * pair_rate * cfg.eta_s + cfg.background_s_hz;
  const double n_i = 0.5 * pair_rate * cfg.eta_i + cfg.background_i_hz;
  return n_s * n_i * cfg.tau_c_s;
}

CorrelationCurve simulate_correlation_scan(
    const SimConfig& cfg, double visibility,
    const std::vector<std::pair<double, double>>& angles_deg) {
  cfg.validate();
  if (visibility < 0.0 || visibility > 1.0)
    throw std::invalid_argument("visibility must lie in [0, 1]");
  if (angles_deg.empty())
    throw std::invalid_argument("correlation scan needs angles");

  Rng rng(cfg.seed);
  const double mean = scan_mean_rate(cfg);
  const double floor = scan_accidental_floor(cfg);

  CorrelationCurve curve;
  curve.basis = "scan";
  for (const auto& [phi1, phi2] : angles_deg) {
    const double rate =
        model_coincidence_rate(phi1, phi2, visibility, mean) + floor;
    const long long counts = rng.poisson(rate * cfg.duration_s);
    curve.points.push_back(
        {phi1, phi2, static_cast<double>(counts) / cfg.duration_s,
         cfg.duration_s});
  }
  return curve;
}

}  // namespace spdc
