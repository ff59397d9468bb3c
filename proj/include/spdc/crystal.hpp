#pragma once

#include <string>

#include "spdc/units.hpp"

namespace spdc {

enum class Polarization { Ordinary, Extraordinary };

inline Polarization conjugate(Polarization p) {
  return p == Polarization::Ordinary ? Polarization::Extraordinary
                                     : Polarization::Ordinary;
}

// One principal index of a uniaxial crystal,
//   n^2(lambda) = a + b / (lambda^2 - c) - d * lambda^2,  lambda in um.
struct SellmeierSet {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double lambda_min_um = 0.0;  // validity range
  double lambda_max_um = 0.0;

  // Throws std::domain_error outside [lambda_min_um, lambda_max_um].
  double index(double lambda_um) const;
};

// Negative uniaxial crystal cut for collinear pumping: the inward face
// normal (= pump direction) makes cut_angle_rad with the optic axis.
struct CrystalSpec {
  std::string name;
  SellmeierSet ordinary;
  SellmeierSet extraordinary;
  double length_mm = 0.0;
  double cut_angle_rad = 0.0;

  void validate() const;  // throws std::invalid_argument on bad fields
};

// Principal refractive index for the given polarization.
double index(const CrystalSpec& spec, double lambda_um, Polarization pol);

// Effective extraordinary index at angle theta to the optic axis:
//   1/n(theta)^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
double index_e_theta(const CrystalSpec& spec, double lambda_um,
                     double theta_rad);

// Walk-off angle rho of the extraordinary ray, |rho| with
//   tan(rho) = (n(theta)^2 / 2) * sin(2 theta) * (1/n_e^2 - 1/n_o^2).
double walkoff_angle(const CrystalSpec& spec, double lambda_um,
                     double theta_rad);

// Transverse displacement over the full crystal length, in um.
double walkoff_displacement_um(const CrystalSpec& spec, double lambda_um,
                               double theta_rad);

// Snell refraction at the exit face (internal -> external angle, both
// measured from the face normal). Throws std::domain_error past the
// total-internal-reflection limit.
double refract_external(double n_internal, double theta_int_rad);

// Inverse of refract_external.
double refract_internal(double n_internal, double theta_ext_rad);

}  // namespace spdc
