#include "spdc/crystal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spdc {

double SellmeierSet::index(double lambda_um) const {
  if (lambda_um < lambda_min_um) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_um << " um below Sellmeier validity bound "
        << lambda_min_um << " um";
    throw std::domain_error(msg.str());
  }
  if (lambda_um > lambda_max_um) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_um << " um above Sellmeier validity bound "
        << lambda_max_um << " um";
    throw std::domain_error(msg.str());
  }
  const double l2 = lambda_um * lambda_um;
  const double n2 = a + b / (l2 - c) - d * l2;
  if (!(n2 > 1.0)) {
    std::ostringstream msg;
    msg << "Sellmeier evaluation gave n^2 = " << n2 << " at " << lambda_um
        << " um";
    throw std::domain_error(msg.str());
  }
  return std::sqrt(n2);
}

void CrystalSpec::validate() const {
  if (!(length_mm > 0.0))
    throw std::invalid_argument("crystal length must be positive");
  if (!(cut_angle_rad > 0.0 && cut_angle_rad < kPi / 2.0))
    throw std::invalid_argument("cut angle must lie in (0, 90) degrees");
  for (const SellmeierSet* s : {&ordinary, &extraordinary}) {
    if (!(s->lambda_max_um > s->lambda_min_um && s->lambda_min_um > 0.0))
      throw std::invalid_argument("bad Sellmeier validity range");
    // lambda^2 - c must stay positive over the whole range
    if (s->lambda_min_um * s->lambda_min_um <= s->c)
      throw std::invalid_argument(
          "Sellmeier pole lies inside the validity range");
  }
}

double index(const CrystalSpec& spec, double lambda_um, Polarization pol) {
  const SellmeierSet& s =
      pol == Polarization::Ordinary ? spec.ordinary : spec.extraordinary;
  return s.index(lambda_um);
}

double index_e_theta(const CrystalSpec& spec, double lambda_um,
                     double theta_rad) {
  const double no = spec.ordinary.index(lambda_um);
  const double ne = spec.extraordinary.index(lambda_um);
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

double walkoff_angle(const CrystalSpec& spec, double lambda_um,
                     double theta_rad) {
  const double no = spec.ordinary.index(lambda_um);
  const double ne = spec.extraordinary.index(lambda_um);
  const double nt = index_e_theta(spec, lambda_um, theta_rad);
  const double tanrho = 0.5 * nt * nt * std::sin(2.0 * theta_rad) *
                        (1.0 / (ne * ne) - 1.0 / (no * no));
  return std::atan(std::fabs(tanrho));
}

double walkoff_displacement_um(const CrystalSpec& spec, double lambda_um,
                               double theta_rad) {
  const double rho = walkoff_angle(spec, lambda_um, theta_rad);
  return spec.length_mm * 1e3 * std::tan(rho);
}

double refract_external(double n_internal, double theta_int_rad) {
  const double s = n_internal * std::sin(theta_int_rad);
  if (s > 1.0) {
    std::ostringstream msg;
    msg << "total internal reflection: n sin(theta) = " << s;
    throw std::domain_error(msg.str());
  }
  return std::asin(s);
}

double refract_internal(double n_internal, double theta_ext_rad) {
  return std::asin(std::sin(theta_ext_rad) / n_internal);
}

}  // namespace spdc
