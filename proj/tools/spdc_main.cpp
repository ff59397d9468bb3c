// Command-line front end: phase-matched emission sweeps, collection-mode
// design, count statistics, visibility fits, CHSH evaluation and the
// Monte-Carlo source simulator.
//
// Exit codes: 0 success, 1 usage/config error, 2 computation error.
// stdout carries data only in table mode; diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdc/coincidence.hpp"
#include "spdc/crystal_io.hpp"
#include "spdc/mode_design.hpp"
#include "spdc/pair_sim.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/units.hpp"

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// temp + rename so partially written outputs never appear under --out
void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string sanitize_csv(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

struct CommonOpts {
  std::string crystal_path;
  std::string config_path;
  std::string out_path;
  std::string format = "table";
};

// Merged parameter lookup: command line > config block > default.
class Params {
 public:
  Params(const json& block) : block_(block) {}

  double num(CLI::Option* opt, const std::string& key, double fallback) const {
    if (opt && opt->count() > 0) return opt->as<double>();
    if (block_.contains(key)) return block_.at(key).get<double>();
    return fallback;
  }
  std::string str(CLI::Option* opt, const std::string& key,
                  const std::string& fallback) const {
    if (opt && opt->count() > 0) return opt->as<std::string>();
    if (block_.contains(key)) return block_.at(key).get<std::string>();
    return fallback;
  }
  bool has(CLI::Option* opt, const std::string& key) const {
    return (opt && opt->count() > 0) || block_.contains(key);
  }

 private:
  const json& block_;
};

void emit(const CommonOpts& common, const std::string& csv_or_json,
          const std::string& table) {
  if (common.format == "table") {
    std::cout << table;
    return;
  }
  if (common.out_path.empty())
    throw UsageError("--out is required for csv/json output");
  write_atomic(common.out_path, csv_or_json);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::size_t min_cols) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (lineno == 1 && !fields.empty() &&
        fields[0].find_first_not_of("-+.0123456789eE") != std::string::npos &&
        fields[0] != "+" && fields[0] != "-")
      continue;  // header
    if (fields.size() < min_cols) {
      std::ostringstream msg;
      msg << path << ": line " << lineno << ": expected at least " << min_cols
          << " columns, got " << fields.size();
      throw UsageError(msg.str());
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_num(const std::string& s, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("malformed number '" + s + "' in " + ctx);
  }
}

spdc::CrystalSpec need_crystal(const CommonOpts& common) {
  if (common.crystal_path.empty())
    throw UsageError("--crystal <file> is required for this command");
  return spdc::load_crystal(common.crystal_path);
}

// ---------------------------------------------------------------- angles

int cmd_angles(const CommonOpts& common, const spdc::CrystalSpec& crystal,
               const Params& p, CLI::Option* o_pump, CLI::Option* o_theta,
               CLI::Option* o_lmin, CLI::Option* o_lmax, CLI::Option* o_step,
               CLI::Option* o_phi, CLI::Option* o_pol) {
  spdc::PumpConfig pump;
  pump.lambda_um = spdc::nm_to_um(p.num(o_pump, "pump_nm", 351.1));
  pump.theta_p_rad = spdc::deg2rad(
      p.num(o_theta, "theta_p_deg", spdc::rad2deg(crystal.cut_angle_rad)));
  pump.power_mw = 465.0;
  pump.waist_um = 82.0;
  pump.validate();

  const double lo = spdc::nm_to_um(p.num(o_lmin, "lambda_min_nm", 690.0));
  const double hi = spdc::nm_to_um(p.num(o_lmax, "lambda_max_nm", 710.0));
  const double step = spdc::nm_to_um(p.num(o_step, "step_nm", 0.5));
  const double phi = spdc::deg2rad(p.num(o_phi, "phi_deg", 180.0));
  const std::string pol_s = p.str(o_pol, "pol", "o");
  if (pol_s != "o" && pol_s != "e")
    throw UsageError("--pol must be 'o' or 'e'");
  const spdc::Polarization pol = pol_s == "o"
                                     ? spdc::Polarization::Ordinary
                                     : spdc::Polarization::Extraordinary;

  const auto rows = spdc::sweep_emission(crystal, pump, lo, hi, step, phi, pol);

  std::ostringstream csv, tbl;
  const char* header =
      "lambda_nm,theta_i_ext_deg,theta_s_ext_deg,dtheta_dlambda_deg_per_nm,"
      "status\n";
  csv << header;
  tbl << header;
  json jrows = json::array();
  for (const auto& r : rows) {
    const std::string status = r.ok ? "ok" : sanitize_csv(r.status);
    std::ostringstream line;
    line << fmt6(spdc::um_to_nm(r.lambda_um)) << ','
         << fmt6(spdc::rad2deg(r.theta_i_ext)) << ','
         << fmt6(spdc::rad2deg(r.theta_s_ext)) << ','
         << fmt6(r.dtheta_dlambda_deg_per_nm) << ',' << status << '\n';
    csv << line.str();
    tbl << line.str();
    jrows.push_back({{"lambda_nm", spdc::um_to_nm(r.lambda_um)},
                     {"theta_i_ext_deg", spdc::rad2deg(r.theta_i_ext)},
                     {"theta_s_ext_deg", spdc::rad2deg(r.theta_s_ext)},
                     {"dtheta_dlambda_deg_per_nm", r.dtheta_dlambda_deg_per_nm},
                     {"status", status}});
  }
  emit(common, common.format == "json" ? jrows.dump(2) + "\n" : csv.str(),
       tbl.str());
  return 0;
}

// ---------------------------------------------------------------- design

int cmd_design(const CommonOpts& common, const spdc::CrystalSpec& crystal,
               const Params& p, CLI::Option* o_pump, CLI::Option* o_theta,
               CLI::Option* o_bw, CLI::Option* o_margin, CLI::Option* o_wf,
               CLI::Option* o_f, CLI::Option* o_ovr) {
  spdc::PumpConfig pump;
  pump.lambda_um = spdc::nm_to_um(p.num(o_pump, "pump_nm", 351.1));
  pump.theta_p_rad = spdc::deg2rad(
      p.num(o_theta, "theta_p_deg", spdc::rad2deg(crystal.cut_angle_rad)));
  pump.power_mw = 465.0;
  pump.waist_um = 82.0;
  pump.validate();

  const auto d = spdc::design_collection(
      crystal, pump, p.num(o_bw, "bandwidth_nm", 4.0),
      p.num(o_margin, "margin", 1.0), p.num(o_wf, "fiber_waist_um", 2.3),
      p.num(o_f, "focal_mm", 11.0), p.num(o_ovr, "dtheta_override", 0.0));

  json rep = {
      {"input",
       {{"pump_nm", spdc::um_to_nm(pump.lambda_um)},
        {"theta_p_deg", spdc::rad2deg(pump.theta_p_rad)},
        {"bandwidth_fwhm_nm", d.dlambda_fwhm_nm},
        {"margin", d.margin}}},
      {"dtheta_dlambda_deg_per_nm", d.dtheta_dlambda_deg_per_nm},
      {"theta_d_raw_deg", spdc::rad2deg(d.theta_d_raw_rad)},
      {"theta_d_chosen_deg", spdc::rad2deg(d.theta_d_chosen_rad)},
      {"mode",
       {{"w0_um", d.mode.w0_um},
        {"zr_mm", d.mode.zr_mm},
        {"lambda_nm", spdc::um_to_nm(d.mode.lambda_um)}}},
      {"pump_waist_um", d.pump_waist_um},
      {"walkoff_pump_um", d.walkoff_pump_um},
      {"walkoff_signal_um", d.walkoff_signal_um},
      {"walkoff_ratio", d.walkoff_ratio},
      {"walkoff_exceeds_waist", d.walkoff_ratio > 1.0},
      {"fiber",
       {{"w_f_um", d.fiber.w_f_um},
        {"f_mm", d.fiber.f_mm},
        {"magnification", d.fiber.magnification},
        {"object_distance_mm", d.fiber.object_distance_mm},
        {"image_distance_mm", d.fiber.image_distance_mm}}}};

  std::ostringstream tbl;
  tbl << "collection design at " << fmt6(spdc::um_to_nm(d.mode.lambda_um))
      << " nm\n"
      << "  dtheta/dlambda   " << fmt6(d.dtheta_dlambda_deg_per_nm)
      << " deg/nm\n"
      << "  theta_D raw      " << fmt6(spdc::rad2deg(d.theta_d_raw_rad))
      << " deg\n"
      << "  theta_D chosen   " << fmt6(spdc::rad2deg(d.theta_d_chosen_rad))
      << " deg (margin " << fmt6(d.margin) << ")\n"
      << "  waist w0         " << fmt6(d.mode.w0_um) << " um\n"
      << "  Rayleigh z_r     " << fmt6(d.mode.zr_mm) << " mm\n"
      << "  pump waist w_p   " << fmt6(d.pump_waist_um) << " um\n"
      << "  walk-off (pump)  " << fmt6(d.walkoff_pump_um) << " um\n"
      << "  walk-off (deg.)  " << fmt6(d.walkoff_signal_um) << " um\n"
      << "  fiber: M " << fmt6(d.fiber.magnification) << ", d_obj "
      << fmt6(d.fiber.object_distance_mm) << " mm, d_img "
      << fmt6(d.fiber.image_distance_mm) << " mm\n";
  if (d.walkoff_ratio > 1.0)
    tbl << "  note: transverse walk-off exceeds the receiving waist (ratio "
        << fmt6(d.walkoff_ratio)
        << "); a smaller bandwidth enlarges the waist\n";
  emit(common, rep.dump(2) + "\n", tbl.str());
  return 0;
}

// ----------------------------------------------------------------- stats

int cmd_stats(const CommonOpts& common, const Params& p, CLI::Option* o_in,
              CLI::Option* o_cutoff, CLI::Option* o_tau, CLI::Option* o_eta) {
  const std::string in = p.str(o_in, "in", "");
  if (in.empty()) throw UsageError("stats: --in <counts.csv> is required");
  const double cutoff = p.num(o_cutoff, "power_cutoff_mw", 1e30);
  const double tau_s = p.num(o_tau, "tau_ns", 6.8) * 1e-9;
  const double eta = p.num(o_eta, "eta", 0.0);

  // power_mw,singles_s,singles_i,coincidences (rates, 1/s)
  const auto rows = read_csv(in, 4);
  if (rows.empty()) throw UsageError(in + ": no data rows");
  std::vector<spdc::CountRecord> recs;
  json per_row = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = in + " row " + std::to_string(i + 1);
    spdc::CountRecord r;
    r.pump_power_mw = to_num(rows[i][0], ctx);
    r.n_s = to_num(rows[i][1], ctx);
    r.n_i = to_num(rows[i][2], ctx);
    r.n_c = to_num(rows[i][3], ctx);
    r.tau_c_s = tau_s;
    recs.push_back(r);
    const auto eff = spdc::efficiency_ratio(r);
    per_row.push_back(
        {{"power_mw", r.pump_power_mw},
         {"eta_overall", eff.overall},
         {"eta_arm_s", eff.arm_s},
         {"eta_arm_i", eff.arm_i},
         {"accidentals_hz",
          spdc::accidental_rate(r.n_s, r.n_i, tau_s, eta)}});
  }
  const double slope = spdc::power_slope(recs, cutoff);

  json rep = {{"slope_hz_per_mw", slope},
              {"power_cutoff_mw", cutoff},
              {"tau_c_ns", tau_s * 1e9},
              {"eta", eta},
              {"rows", per_row}};
  std::ostringstream tbl;
  tbl << "power_mw  eta_overall  eta_arm_s  eta_arm_i  accidentals_hz\n";
  for (const auto& r : per_row)
    tbl << fmt6(r["power_mw"].get<double>()) << "  "
        << fmt6(r["eta_overall"].get<double>()) << "  "
        << fmt6(r["eta_arm_s"].get<double>()) << "  "
        << fmt6(r["eta_arm_i"].get<double>()) << "  "
        << fmt6(r["accidentals_hz"].get<double>()) << "\n";
  tbl << "low-power slope: " << fmt6(slope) << " coincidences/s/mW\n";
  emit(common, rep.dump(2) + "\n", tbl.str());
  return 0;
}

// ------------------------------------------------------------------- fit

int cmd_fit(const CommonOpts& common, const Params& p, CLI::Option* o_in,
            CLI::Option* o_acc) {
  const std::string in = p.str(o_in, "in", "");
  if (in.empty()) throw UsageError("fit: --in <curve.csv> is required");

  // phi1_deg,phi2_deg,rate_hz,duration_s
  const auto rows = read_csv(in, 4);
  spdc::CorrelationCurve curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = in + " row " + std::to_string(i + 1);
    curve.points.push_back({to_num(rows[i][0], ctx), to_num(rows[i][1], ctx),
                            to_num(rows[i][2], ctx), to_num(rows[i][3], ctx)});
  }
  const auto fit = spdc::sincos_fit(curve);

  json rep = {{"visibility", fit.visibility},
              {"mean_rate_hz", fit.mean_rate},
              {"phase_deg", fit.phase_deg},
              {"phase_defined", fit.phase_defined},
              {"residual_rms_hz", fit.residual_rms}};
  std::ostringstream tbl;
  tbl << "visibility    " << fmt6(fit.visibility) << "\n"
      << "mean rate     " << fmt6(fit.mean_rate) << " 1/s\n"
      << "phase         "
      << (fit.phase_defined ? fmt6(fit.phase_deg) + " deg" : "undefined")
      << "\n"
      << "residual rms  " << fmt6(fit.residual_rms) << " 1/s\n";
  if (p.has(o_acc, "accidentals_hz")) {
    const double acc = p.num(o_acc, "accidentals_hz", 0.0);
    const auto corr = spdc::corrected_visibility(fit, acc);
    rep["accidentals_hz"] = acc;
    rep["corrected_visibility"] = corr.value;
    rep["corrected_clamped"] = corr.clamped;
    tbl << "corrected V   " << fmt6(corr.value)
        << (corr.clamped ? " (clamped)" : "") << "\n";
  }
  emit(common, rep.dump(2) + "\n", tbl.str());
  return 0;
}

// ------------------------------------------------------------------ bell

int cmd_bell(const CommonOpts& common, const Params& p, CLI::Option* o_in) {
  const std::string in = p.str(o_in, "in", "");
  if (in.empty()) throw UsageError("bell: --in <outcomes.csv> is required");

  // a_deg,b_deg,out_a,out_b,counts with out in {+,-}
  const auto rows = read_csv(in, 5);
  std::map<std::pair<double, double>, std::map<std::string, double>> table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = in + " row " + std::to_string(i + 1);
    const double a = to_num(rows[i][0], ctx), b = to_num(rows[i][1], ctx);
    const std::string key = rows[i][2] + rows[i][3];
    if (key != "++" && key != "+-" && key != "-+" && key != "--")
      throw UsageError(ctx + ": outcome labels must be '+' or '-'");
    table[{a, b}][key] += to_num(rows[i][4], ctx);
  }
  std::vector<double> a_set, b_set;
  for (const auto& [key, _] : table) {
    if (std::find(a_set.begin(), a_set.end(), key.first) == a_set.end())
      a_set.push_back(key.first);
    if (std::find(b_set.begin(), b_set.end(), key.second) == b_set.end())
      b_set.push_back(key.second);
  }
  std::sort(a_set.begin(), a_set.end());
  std::sort(b_set.begin(), b_set.end());
  if (a_set.size() != 2 || b_set.size() != 2)
    throw UsageError("bell input must contain exactly 2 settings per arm");

  std::ostringstream missing;
  auto corr = [&](double a, double b) -> spdc::Correlation {
    auto it = table.find({a, b});
    std::map<std::string, double> cnt =
        it == table.end() ? std::map<std::string, double>{} : it->second;
    for (const char* k : {"++", "+-", "-+", "--"})
      if (!cnt.count(k)) missing << "  (" << a << ", " << b << ", " << k
                                 << ")\n";
    if (!missing.str().empty()) return {};
    return spdc::correlation_e(cnt["++"], cnt["+-"], cnt["-+"], cnt["--"]);
  };
  // sign pattern S = E(a,b) - E(a,b') + E(a',b) + E(a',b')
  std::array<spdc::Correlation, 4> es = {
      corr(a_set[0], b_set[0]), corr(a_set[0], b_set[1]),
      corr(a_set[1], b_set[0]), corr(a_set[1], b_set[1])};
  if (!missing.str().empty())
    throw UsageError("bell input is missing outcome rows:\n" + missing.str());
  const auto bell = spdc::chsh_s(es);

  json rep = {{"a_deg", {a_set[0], a_set[1]}},
              {"b_deg", {b_set[0], b_set[1]}},
              {"E",
               {{"ab", bell.correlations[0].value},
                {"ab_prime", bell.correlations[1].value},
                {"a_prime_b", bell.correlations[2].value},
                {"a_prime_b_prime", bell.correlations[3].value}}},
              {"S", bell.s},
              {"sigma_S", bell.sigma_s}};
  std::ostringstream tbl;
  tbl << "E(a,b)   = " << fmt6(bell.correlations[0].value) << " +- "
      << fmt6(bell.correlations[0].sigma) << "\n"
      << "E(a,b')  = " << fmt6(bell.correlations[1].value) << " +- "
      << fmt6(bell.correlations[1].sigma) << "\n"
      << "E(a',b)  = " << fmt6(bell.correlations[2].value) << " +- "
      << fmt6(bell.correlations[2].sigma) << "\n"
      << "E(a',b') = " << fmt6(bell.correlations[3].value) << " +- "
      << fmt6(bell.correlations[3].sigma) << "\n"
      << "S        = " << fmt6(bell.s) << " +- " << fmt6(bell.sigma_s) << "\n";
  emit(common, rep.dump(2) + "\n", tbl.str());
  return 0;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(const CommonOpts& common, const Params& p, CLI::Option* o_seed,
                 CLI::Option* o_rate, CLI::Option* o_power, CLI::Option* o_es,
                 CLI::Option* o_ei, CLI::Option* o_bs, CLI::Option* o_bi,
                 CLI::Option* o_tau, CLI::Option* o_dead, CLI::Option* o_dur,
                 CLI::Option* o_sweep, CLI::Option* o_scan, CLI::Option* o_v,
                 CLI::Option* o_phi2) {
  if (!p.has(o_seed, "seed"))
    throw UsageError("simulate: --seed is required (runs are deterministic)");
  spdc::SimConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(p.num(o_seed, "seed", 0));
  cfg.pair_rate_per_mw = p.num(o_rate, "rate_per_mw", 900.0);
  cfg.pump_power_mw = p.num(o_power, "power_mw", 100.0);
  cfg.eta_s = p.num(o_es, "eta_s", 1.0);
  cfg.eta_i = p.num(o_ei, "eta_i", 1.0);
  cfg.background_s_hz = p.num(o_bs, "background_s_hz", 0.0);
  cfg.background_i_hz = p.num(o_bi, "background_i_hz", 0.0);
  cfg.tau_c_s = p.num(o_tau, "tau_ns", 6.8) * 1e-9;
  cfg.dead_time_s = p.num(o_dead, "dead_ns", 0.0) * 1e-9;
  cfg.duration_s = p.num(o_dur, "duration_s", 1.0);
  cfg.validate();

  const std::string sweep = p.str(o_sweep, "sweep_powers_mw", "");
  if (!sweep.empty()) {
    std::vector<double> powers;
    std::stringstream ss(sweep);
    std::string tok;
    while (std::getline(ss, tok, ','))
      powers.push_back(to_num(tok, "--sweep"));
    const auto results = spdc::simulate_power_sweep(cfg, powers);
    std::ostringstream csv, tbl;
    const char* header = "power_mw,singles_s,singles_i,coincidences\n";
    csv << header;
    tbl << header;
    for (const auto& [power, out] : results) {
      std::ostringstream line;
      line << fmt6(power) << ',' << fmt6(out.n_s) << ',' << fmt6(out.n_i)
           << ',' << fmt6(out.n_c) << '\n';
      csv << line.str();
      tbl << line.str();
    }
    emit(common, csv.str(), tbl.str());
    return 0;
  }

  const double scan_step = p.num(o_scan, "scan_step_deg", 0.0);
  if (scan_step > 0.0) {
    const double v = p.num(o_v, "visibility", 0.96);
    const double phi2 = p.num(o_phi2, "phi2_deg", 0.0);
    std::vector<std::pair<double, double>> angles;
    for (double phi1 = 0.0; phi1 < 180.0; phi1 += scan_step)
      angles.emplace_back(phi1, phi2);
    const auto curve = spdc::simulate_correlation_scan(cfg, v, angles);
    std::ostringstream csv, tbl;
    const char* header = "phi1_deg,phi2_deg,rate_hz,duration_s\n";
    csv << header;
    tbl << header;
    for (const auto& pt : curve.points) {
      std::ostringstream line;
      line << fmt6(pt.phi1_deg) << ',' << fmt6(pt.phi2_deg) << ','
           << fmt6(pt.rate_hz) << ',' << fmt6(pt.duration_s) << '\n';
      csv << line.str();
      tbl << line.str();
    }
    std::cerr << "scan mean rate " << spdc::scan_mean_rate(cfg)
              << " 1/s, accidental floor " << spdc::scan_accidental_floor(cfg)
              << " 1/s\n";
    emit(common, csv.str(), tbl.str());
    return 0;
  }

  const auto out = spdc::simulate_counts(cfg);
  json rep = {{"n_s_hz", out.n_s},
              {"n_i_hz", out.n_i},
              {"n_c_hz", out.n_c},
              {"n_acc_hz", out.n_acc_tally}};
  std::ostringstream tbl;
  tbl << "singles_s      " << fmt6(out.n_s) << " 1/s\n"
      << "singles_i      " << fmt6(out.n_i) << " 1/s\n"
      << "coincidences   " << fmt6(out.n_c) << " 1/s\n"
      << "accidentals    " << fmt6(out.n_acc_tally) << " 1/s\n";
  emit(common, rep.dump(2) + "\n", tbl.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"type-II down-conversion source design and analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--crystal", common.crystal_path, "crystal JSON file");
  app.add_option("--config", common.config_path, "run configuration JSON");
  app.add_option("--out", common.out_path, "output file (csv/json formats)");
  app.add_option("--format", common.format, "csv | json | table")
      ->check(CLI::IsMember({"csv", "json", "table"}));

  auto* angles = app.add_subcommand("angles", "emission-angle sweep");
  auto* a_pump = angles->add_option("--pump-nm")->description("pump wavelength, nm");
  auto* a_theta = angles->add_option("--theta-p-deg")->description("pump to optic axis");
  auto* a_lmin = angles->add_option("--lambda-min-nm")->description("sweep start");
  auto* a_lmax = angles->add_option("--lambda-max-nm")->description("sweep end");
  auto* a_step = angles->add_option("--step-nm")->description("sweep step");
  auto* a_phi = angles->add_option("--phi-deg")->description("emission azimuth");
  auto* a_pol = angles->add_option("--pol")->description("idler polarization: o | e");

  auto* design = app.add_subcommand("design", "collection-mode design");
  auto* d_pump = design->add_option("--pump-nm")->description("pump wavelength, nm");
  auto* d_theta = design->add_option("--theta-p-deg")->description("pump to optic axis");
  auto* d_bw = design->add_option("--bandwidth-nm")->description("collection FWHM");
  auto* d_margin = design->add_option("--margin")->description("divergence margin (0,1]");
  auto* d_wf = design->add_option("--fiber-waist-um")->description("fiber mode waist");
  auto* d_f = design->add_option("--focal-mm")->description("coupling lens focal length");
  auto* d_ovr =
      design->add_option("--dtheta-override")->description("use this deg/nm derivative");

  auto* stats = app.add_subcommand("stats", "count-rate statistics");
  auto* s_in = stats->add_option("--in")->description("counts CSV");
  auto* s_cut = stats->add_option("--power-cutoff-mw")->description("slope fit cutoff");
  auto* s_tau = stats->add_option("--tau-ns")->description("coincidence window");
  auto* s_eta = stats->add_option("--eta")->description("efficiency for accidentals");

  auto* fit = app.add_subcommand("fit", "sin/cos visibility fit");
  auto* f_in = fit->add_option("--in")->description("correlation curve CSV");
  auto* f_acc = fit->add_option("--accidentals")->description("accidental rate, 1/s");

  auto* bell = app.add_subcommand("bell", "CHSH evaluation");
  auto* b_in = bell->add_option("--in")->description("16-row outcome CSV");

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo count generator");
  auto* m_seed = sim->add_option("--seed")->description("RNG seed (required)");
  auto* m_rate = sim->add_option("--rate-per-mw")->description("pair rate, 1/s/mW");
  auto* m_power = sim->add_option("--power-mw")->description("pump power");
  auto* m_es = sim->add_option("--eta-s")->description("signal arm efficiency");
  auto* m_ei = sim->add_option("--eta-i")->description("idler arm efficiency");
  auto* m_bs = sim->add_option("--background-s")->description("background rate, arm s");
  auto* m_bi = sim->add_option("--background-i")->description("background rate, arm i");
  auto* m_tau = sim->add_option("--tau-ns")->description("coincidence window");
  auto* m_dead = sim->add_option("--dead-ns")->description("detector dead time");
  auto* m_dur = sim->add_option("--duration-s")->description("simulated duration");
  auto* m_sweep =
      sim->add_option("--sweep")->description("comma-separated powers for a sweep CSV");
  auto* m_scan = sim->add_option("--scan-step-deg")->description("phi1 step for a scan");
  auto* m_v = sim->add_option("--visibility")->description("scan fringe visibility");
  auto* m_phi2 = sim->add_option("--phi2-deg")->description("scan analyzer-2 angle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    json config;
    if (!common.config_path.empty()) {
      std::ifstream in(common.config_path);
      if (!in) throw UsageError("cannot open config: " + common.config_path);
      config = json::parse(in);
      if (common.crystal_path.empty() && config.contains("crystal"))
        common.crystal_path = config["crystal"].get<std::string>();
      if (common.out_path.empty() && config.contains("out"))
        common.out_path = config["out"].get<std::string>();
      if (common.format == "table" && config.contains("format"))
        common.format = config["format"].get<std::string>();
    }
    auto block = [&](const char* name) -> json {
      return config.contains(name) ? config[name] : json::object();
    };

    if (angles->parsed()) {
      const json b = block("angles");
      Params p(b);
      return cmd_angles(common, need_crystal(common), p, a_pump, a_theta,
                        a_lmin, a_lmax, a_step, a_phi, a_pol);
    }
    if (design->parsed()) {
      const json b = block("design");
      Params p(b);
      return cmd_design(common, need_crystal(common), p, d_pump, d_theta, d_bw,
                        d_margin, d_wf, d_f, d_ovr);
    }
    if (stats->parsed()) {
      const json b = block("stats");
      Params p(b);
      return cmd_stats(common, p, s_in, s_cut, s_tau, s_eta);
    }
    if (fit->parsed()) {
      const json b = block("fit");
      Params p(b);
      return cmd_fit(common, p, f_in, f_acc);
    }
    if (bell->parsed()) {
      const json b = block("bell");
      Params p(b);
      return cmd_bell(common, p, b_in);
    }
    if (sim->parsed()) {
      const json b = block("simulate");
      Params p(b);
      return cmd_simulate(common, p, m_seed, m_rate, m_power, m_es, m_ei, m_bs,
                          m_bi, m_tau, m_dead, m_dur, m_sweep, m_scan, m_v,
                          m_phi2);
    }
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 2;
  }
}
