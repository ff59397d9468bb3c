#include "spdc/mode_design.hpp"

#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {
const double kFwhmFactor = std::sqrt(2.0 * std::log(2.0));

void require_positive(double v, const char* what) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(what) + " must be positive");
}
}  // namespace

double angular_width_from_bandwidth(double dlambda_nm,
                                    double dtheta_deg_per_nm) {
  if (dlambda_nm < 0.0)
    throw std::invalid_argument("bandwidth must be non-negative");
  require_positive(std::fabs(dtheta_deg_per_nm), "dtheta/dlambda");
  return deg2rad(std::fabs(dtheta_deg_per_nm) * dlambda_nm);
}

double divergence_from_bandwidth(double dlambda_fwhm_nm,
                                 double dtheta_deg_per_nm) {
  require_positive(dlambda_fwhm_nm, "bandwidth");
  require_positive(std::fabs(dtheta_deg_per_nm), "dtheta/dlambda");
  return deg2rad(dlambda_fwhm_nm / kFwhmFactor * std::fabs(dtheta_deg_per_nm));
}

double bandwidth_from_divergence(double theta_d_rad,
                                 double dtheta_deg_per_nm) {
  require_positive(theta_d_rad, "divergence");
  require_positive(std::fabs(dtheta_deg_per_nm), "dtheta/dlambda");
  return rad2deg(theta_d_rad) * kFwhmFactor / std::fabs(dtheta_deg_per_nm);
}

double gaussian_intensity(double theta_rad, double theta_d_rad) {
  require_positive(theta_d_rad, "divergence");
  const double r = theta_rad / theta_d_rad;
  return std::exp(-2.0 * r * r);
}

TargetMode mode_from_divergence(double theta_d_rad, double lambda_um) {
  require_positive(theta_d_rad, "divergence");
  require_positive(lambda_um, "wavelength");
  TargetMode m;
  m.theta_d_rad = theta_d_rad;
  m.lambda_um = lambda_um;
  m.w0_um = lambda_um / (kPi * theta_d_rad);
  m.zr_mm = kPi * m.w0_um * m.w0_um / lambda_um * 1e-3;
  return m;
}

FiberCoupler fiber_conjugation(double w0_um, double w_f_um, double f_mm) {
  require_positive(w0_um, "collection waist");
  require_positive(w_f_um, "fiber waist");
  require_positive(f_mm, "focal length");
  FiberCoupler fc;
  fc.w_f_um = w_f_um;
  fc.f_mm = f_mm;
  fc.magnification = w0_um / w_f_um;
  fc.object_distance_mm = f_mm * (1.0 + 1.0 / fc.magnification);
  fc.image_distance_mm = f_mm * (1.0 + fc.magnification);
  return fc;
}

CollectionDesign design_collection(const CrystalSpec& crystal,
                                   const PumpConfig& pump,
                                   double dlambda_fwhm_nm, double margin,
                                   double fiber_waist_um, double focal_mm,
                                   double dtheta_override_deg_per_nm) {
  require_positive(dlambda_fwhm_nm, "bandwidth");
  if (!(margin > 0.0 && margin <= 1.0))
    throw std::invalid_argument("margin must lie in (0, 1]");

  const double lambda_deg = 2.0 * pump.lambda_um;
  CollectionDesign d;
  d.dlambda_fwhm_nm = dlambda_fwhm_nm;
  d.margin = margin;
  // Derivative of the ordinary-polarized emission branch in the optic-axis
  // plane on the far side (azimuth 180 deg), which matches the published
  // design value for this geometry.
  d.dtheta_dlambda_deg_per_nm =
      dtheta_override_deg_per_nm > 0.0
          ? dtheta_override_deg_per_nm
          : std::fabs(dtheta_dlambda(crystal, pump, lambda_deg, kPi,
                                     Polarization::Ordinary));
  d.theta_d_raw_rad =
      divergence_from_bandwidth(dlambda_fwhm_nm, d.dtheta_dlambda_deg_per_nm);
  d.theta_d_chosen_rad = margin * d.theta_d_raw_rad;
  d.mode = mode_from_divergence(d.theta_d_chosen_rad, lambda_deg);
  d.pump_waist_um = d.mode.w0_um;
  d.walkoff_pump_um =
      walkoff_displacement_um(crystal, pump.lambda_um, pump.theta_p_rad);
  d.walkoff_signal_um =
      walkoff_displacement_um(crystal, lambda_deg, pump.theta_p_rad);
  d.walkoff_ratio = d.walkoff_pump_um / d.mode.w0_um;
  d.fiber = fiber_conjugation(d.mode.w0_um, fiber_waist_um, focal_mm);
  return d;
}

}  // namespace spdc
