#pragma once

#include "spdc/crystal.hpp"
#include "spdc/phasematch.hpp"

namespace spdc {

// Gaussian collection mode aligned with an emission direction; the waist
// sits in the conversion crystal.
struct TargetMode {
  double theta_d_rad = 0.0;  // 1/e^2 half-divergence
  double w0_um = 0.0;        // waist, w0 = lambda / (pi theta_D)
  double zr_mm = 0.0;        // Rayleigh length, z_r = pi w0^2 / lambda
  double lambda_um = 0.0;
};

// Geometric imaging of the collection waist onto the fiber mode.
struct FiberCoupler {
  double w_f_um = 0.0;  // fiber mode waist
  double f_mm = 0.0;    // coupling lens focal length
  double magnification = 0.0;
  double object_distance_mm = 0.0;  // lens to collection waist
  double image_distance_mm = 0.0;   // lens to fiber facet
};

struct CollectionDesign {
  double dlambda_fwhm_nm = 0.0;
  double dtheta_dlambda_deg_per_nm = 0.0;
  double theta_d_raw_rad = 0.0;     // straight bandwidth -> divergence value
  double theta_d_chosen_rad = 0.0;  // after the pump-divergence margin
  double margin = 1.0;
  TargetMode mode;
  double pump_waist_um = 0.0;  // set equal to mode.w0_um
  double walkoff_pump_um = 0.0;
  double walkoff_signal_um = 0.0;
  double walkoff_ratio = 0.0;  // pump-wavelength walk-off / w0
  FiberCoupler fiber;
};

// Eq.-style angular width: Delta_alpha = |dtheta/dlambda| * Delta_lambda.
double angular_width_from_bandwidth(double dlambda_nm,
                                    double dtheta_deg_per_nm);

// Divergence for a Gaussian spectrum of the given FWHM:
//   theta_D = Delta_lambda_FWHM / sqrt(2 ln 2) * |dtheta/dlambda|.
double divergence_from_bandwidth(double dlambda_fwhm_nm,
                                 double dtheta_deg_per_nm);

// Exact inverse of divergence_from_bandwidth.
double bandwidth_from_divergence(double theta_d_rad,
                                 double dtheta_deg_per_nm);

// I(theta)/I(0) = exp(-2 theta^2 / theta_D^2).
double gaussian_intensity(double theta_rad, double theta_d_rad);

TargetMode mode_from_divergence(double theta_d_rad, double lambda_um);

// Thin-lens waist imaging: M = w0/w_f, d_obj = f (1 + 1/M),
// d_img = f (1 + M). M = 1 returns the 2f-2f conjugation.
FiberCoupler fiber_conjugation(double w0_um, double w_f_um, double f_mm);

// Full design chain at the degenerate wavelength. The margin in (0, 1]
// scales the raw divergence down to absorb pump angular spread.
// dtheta_override_deg_per_nm > 0 replaces the computed derivative.
CollectionDesign design_collection(const CrystalSpec& crystal,
                                   const PumpConfig& pump,
                                   double dlambda_fwhm_nm, double margin,
                                   double fiber_waist_um = 2.3,
                                   double focal_mm = 11.0,
                                   double dtheta_override_deg_per_nm = 0.0);

}  // namespace spdc
