#include "spdc/phasematch.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spdc {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kScanMaxRad = deg2rad(20.0);
constexpr double kScanStepRad = deg2rad(0.05);
constexpr double kBisectTolRad = 1e-10;

Eigen::Vector3d optic_axis(const PumpConfig& pump) {
  return {std::sin(pump.theta_p_rad), 0.0, std::cos(pump.theta_p_rad)};
}

Eigen::Vector3d unit_dir(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

double angle_to_axis(const Eigen::Vector3d& u, const Eigen::Vector3d& axis) {
  return std::acos(std::clamp(u.dot(axis), -1.0, 1.0));
}

double photon_index(const CrystalSpec& crystal, double lambda_um,
                    Polarization pol, double theta_axis_rad) {
  return pol == Polarization::Ordinary
             ? index(crystal, lambda_um, Polarization::Ordinary)
             : index_e_theta(crystal, lambda_um, theta_axis_rad);
}

struct MismatchParts {
  double residual;
  double n_i;
  Eigen::Vector3d k_s;
  double lambda_s;
};

MismatchParts mismatch_parts(const CrystalSpec& crystal,
                             const PumpConfig& pump,
                             const EmissionQuery& query, double theta_i_int) {
  const Eigen::Vector3d axis = optic_axis(pump);
  const double n_p = index_e_theta(crystal, pump.lambda_um, pump.theta_p_rad);
  const Eigen::Vector3d k_p(0.0, 0.0, kTwoPi / pump.lambda_um * n_p);

  const Eigen::Vector3d u_i = unit_dir(theta_i_int, query.phi_i_rad);
  const double n_i = photon_index(crystal, query.lambda_i_um, query.idler_pol,
                                  angle_to_axis(u_i, axis));
  const Eigen::Vector3d k_i = kTwoPi / query.lambda_i_um * n_i * u_i;

  const Eigen::Vector3d k_s = k_p - k_i;
  const double lambda_s =
      conjugate_wavelength(pump.lambda_um, query.lambda_i_um);
  const Eigen::Vector3d u_s = k_s.normalized();
  const double n_s = photon_index(crystal, lambda_s,
                                  conjugate(query.idler_pol),
                                  angle_to_axis(u_s, axis));
  return {k_s.norm() - kTwoPi / lambda_s * n_s, n_i, k_s, lambda_s};
}

}  // namespace

void PumpConfig::validate() const {
  if (!(lambda_um > 0.0)) throw std::invalid_argument("pump wavelength <= 0");
  if (!(theta_p_rad > 0.0 && theta_p_rad < kPi / 2.0))
    throw std::invalid_argument("pump angle must lie in (0, 90) degrees");
  if (power_mw < 0.0) throw std::invalid_argument("pump power < 0");
  if (!(waist_um > 0.0)) throw std::invalid_argument("pump waist <= 0");
}

double conjugate_wavelength(double lambda_p_um, double lambda_i_um) {
  if (!(lambda_i_um > lambda_p_um)) {
    std::ostringstream msg;
    msg << "idler wavelength " << lambda_i_um
        << " um must exceed pump wavelength " << lambda_p_um << " um";
    throw std::domain_error(msg.str());
  }
  return 1.0 / (1.0 / lambda_p_um - 1.0 / lambda_i_um);
}

double momentum_mismatch(const CrystalSpec& crystal, const PumpConfig& pump,
                         const EmissionQuery& query, double theta_i_int_rad) {
  return mismatch_parts(crystal, pump, query, theta_i_int_rad).residual;
}

EmissionSolution solve_emission(const CrystalSpec& crystal,
                                const PumpConfig& pump,
                                const EmissionQuery& query) {
  auto f = [&](double th) {
    return momentum_mismatch(crystal, pump, query, th);
  };

  double lo = 1e-6;
  double f_lo = f(lo);
  double res_min = f_lo, res_max = f_lo;
  double hi = lo;
  bool bracketed = false;
  for (double th = lo + kScanStepRad; th <= kScanMaxRad; th += kScanStepRad) {
    const double f_th = f(th);
    res_min = std::min(res_min, f_th);
    res_max = std::max(res_max, f_th);
    if (f_lo * f_th <= 0.0) {
      hi = th;
      bracketed = true;
      break;
    }
    lo = th;
    f_lo = f_th;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "no phase matching: residual keeps one sign over internal angles "
           "(0, 20] deg; extrema [" << res_min << ", " << res_max
        << "] 1/um";
    throw std::runtime_error(msg.str());
  }

  while (hi - lo > kBisectTolRad) {
    const double mid = 0.5 * (lo + hi);
    if (f_lo * f(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f(lo);
    }
  }
  const double root = 0.5 * (lo + hi);
  const MismatchParts parts = mismatch_parts(crystal, pump, query, root);

  EmissionSolution sol;
  sol.theta_i_int = root;
  sol.theta_i_ext = refract_external(parts.n_i, root);
  sol.lambda_s_um = parts.lambda_s;
  sol.residual = parts.residual;
  sol.theta_s_int = std::acos(
      std::clamp(parts.k_s.normalized().z(), -1.0, 1.0));
  sol.phi_s = std::atan2(parts.k_s.y(), parts.k_s.x());
  const double n_s =
      parts.k_s.norm() * parts.lambda_s / kTwoPi;  // index seen by the signal
  sol.theta_s_ext = refract_external(n_s, sol.theta_s_int);
  return sol;
}

double dtheta_dlambda(const CrystalSpec& crystal, const PumpConfig& pump,
                      double lambda_um, double phi_rad, Polarization idler_pol,
                      double step_um) {
  if (!(step_um > 0.0)) throw std::invalid_argument("step must be positive");
  EmissionQuery q{lambda_um, phi_rad, idler_pol};
  q.lambda_i_um = lambda_um + step_um;
  const double up = solve_emission(crystal, pump, q).theta_i_ext;
  q.lambda_i_um = lambda_um - step_um;
  const double dn = solve_emission(crystal, pump, q).theta_i_ext;
  const double rad_per_um = (up - dn) / (2.0 * step_um);
  return rad2deg(rad_per_um) * 1e-3;  // deg per nm
}

ConeIntersection intersection_geometry(const CrystalSpec& crystal,
                                       const PumpConfig& pump) {
  const double lambda_deg = 2.0 * pump.lambda_um;  // degenerate wavelength

  auto polar = [&](double phi, Polarization pol) {
    return solve_emission(crystal, pump, EmissionQuery{lambda_deg, phi, pol});
  };
  // Difference of the two degenerate cone polar angles at one azimuth.
  auto gap = [&](double phi) {
    return polar(phi, Polarization::Extraordinary).theta_i_int -
           polar(phi, Polarization::Ordinary).theta_i_int;
  };

  double lo = deg2rad(1.0), hi = kPi - deg2rad(1.0);
  double g_lo, g_hi;
  try {
    g_lo = gap(lo);
    g_hi = gap(hi);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("cones do not intersect: ") +
                             e.what());
  }
  if (g_lo * g_hi > 0.0)
    throw std::runtime_error(
        "cones do not intersect: polar-angle gap has one sign over "
        "azimuths (1, 179) deg");
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g_lo * gap(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      g_lo = gap(lo);
    }
  }
  const double phi_x = 0.5 * (lo + hi);

  ConeIntersection ci;
  ci.azimuth_rad = phi_x;
  ci.polar_ext_rad = polar(phi_x, Polarization::Extraordinary).theta_i_ext;
  ci.direction_plus = unit_dir(ci.polar_ext_rad, phi_x);
  ci.direction_minus = unit_dir(ci.polar_ext_rad, -phi_x);

  // Tangents of the two external cone curves at the crossing.
  const double dphi = 1e-4;
  auto ext_dir = [&](double phi, Polarization pol) {
    return unit_dir(polar(phi, pol).theta_i_ext, phi);
  };
  auto tangent = [&](Polarization pol) {
    Eigen::Vector3d t = ext_dir(phi_x + dphi, pol) - ext_dir(phi_x - dphi, pol);
    return t.normalized();
  };
  const double c = std::fabs(
      tangent(Polarization::Ordinary).dot(tangent(Polarization::Extraordinary)));
  ci.tangent_angle_rad = std::acos(std::clamp(c, 0.0, 1.0));
  return ci;
}

std::vector<SweepRow> sweep_emission(const CrystalSpec& crystal,
                                     const PumpConfig& pump, double lambda_lo,
                                     double lambda_hi, double step_um,
                                     double phi_rad, Polarization idler_pol) {
  if (!(step_um > 0.0)) throw std::invalid_argument("sweep step must be > 0");
  if (!(lambda_hi >= lambda_lo))
    throw std::invalid_argument("empty sweep range");

  std::vector<SweepRow> rows;
  const int n = static_cast<int>(std::round((lambda_hi - lambda_lo) / step_um));
  for (int i = 0; i <= n; ++i) {
    SweepRow row;
    row.lambda_um = lambda_lo + i * step_um;
    try {
      const EmissionSolution sol = solve_emission(
          crystal, pump, EmissionQuery{row.lambda_um, phi_rad, idler_pol});
      row.theta_i_ext = sol.theta_i_ext;
      row.theta_s_ext = sol.theta_s_ext;
      row.dtheta_dlambda_deg_per_nm =
          dtheta_dlambda(crystal, pump, row.lambda_um, phi_rad, idler_pol);
      row.ok = true;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.ok = false;
      row.status = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spdc
