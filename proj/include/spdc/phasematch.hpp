#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spdc/crystal.hpp"

namespace spdc {

// Plane-wave pump propagating along +z inside the crystal; the optic axis
// lies in the x-z plane at cut_angle_rad (= Theta_p) from +z. Azimuths are
// measured about +z with phi = 0 along +x, i.e. in the plane containing
// pump and optic axis.
struct PumpConfig {
  double lambda_um = 0.0;
  double theta_p_rad = 0.0;  // pump direction to optic axis
  double power_mw = 0.0;
  double waist_um = 0.0;

  void validate() const;
};

struct EmissionQuery {
  double lambda_i_um = 0.0;  // idler wavelength, > pump wavelength
  double phi_i_rad = 0.0;
  Polarization idler_pol = Polarization::Extraordinary;
};

struct EmissionSolution {
  double theta_i_int = 0.0;
  double theta_i_ext = 0.0;
  double theta_s_int = 0.0;
  double theta_s_ext = 0.0;
  double phi_s = 0.0;
  double lambda_s_um = 0.0;
  double residual = 0.0;  // wavenumber mismatch at the root, 1/um
};

// Degenerate o/e cone crossing (external directions). The two crossing
// directions are mirror images across the pump / optic-axis plane.
struct ConeIntersection {
  Eigen::Vector3d direction_plus;   // azimuth in (0, pi)
  Eigen::Vector3d direction_minus;  // mirrored, azimuth in (-pi, 0)
  double azimuth_rad = 0.0;         // of direction_plus
  double polar_ext_rad = 0.0;       // external angle to the pump beam
  double tangent_angle_rad = 0.0;   // angle between the cone curves
};

struct SweepRow {
  double lambda_um = 0.0;
  double theta_i_ext = 0.0;
  double theta_s_ext = 0.0;
  double dtheta_dlambda_deg_per_nm = 0.0;
  bool ok = false;
  std::string status;  // "ok" or the failure message
};

// Signal wavelength from energy conservation, 1/l_s = 1/l_p - 1/l_i.
double conjugate_wavelength(double lambda_p_um, double lambda_i_um);

// Wavenumber mismatch |k_p - k_i| - k_s at a trial internal idler polar
// angle. Zero exactly at phase matching. Units 1/um.
double momentum_mismatch(const CrystalSpec& crystal, const PumpConfig& pump,
                         const EmissionQuery& query, double theta_i_int_rad);

// Bracket scan over internal polar angles (0, 20] deg at 0.05 deg
// resolution, then bisection to |dtheta| < 1e-10 rad. Throws
// std::runtime_error when no sign change exists in the scan range.
EmissionSolution solve_emission(const CrystalSpec& crystal,
                                const PumpConfig& pump,
                                const EmissionQuery& query);

// Central finite difference of the external idler polar angle with respect
// to the idler wavelength at fixed azimuth. Returned in degrees per nm.
double dtheta_dlambda(const CrystalSpec& crystal, const PumpConfig& pump,
                      double lambda_um, double phi_rad,
                      Polarization idler_pol = Polarization::Ordinary,
                      double step_um = 1e-4);

// Locates the degenerate o/e cone crossing and the angle between the cone
// tangent curves there. Throws std::runtime_error when the cones do not
// intersect.
ConeIntersection intersection_geometry(const CrystalSpec& crystal,
                                       const PumpConfig& pump);

// One row per wavelength over [lambda_lo, lambda_hi] (um) at step_um;
// solver failures are flagged in the status column, not dropped.
std::vector<SweepRow> sweep_emission(const CrystalSpec& crystal,
                                     const PumpConfig& pump, double lambda_lo,
                                     double lambda_hi, double step_um,
                                     double phi_rad,
                                     Polarization idler_pol =
                                         Polarization::Ordinary);

}  // namespace spdc
