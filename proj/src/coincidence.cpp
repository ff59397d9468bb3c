#include "spdc/coincidence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spdc/units.hpp"

namespace spdc {

double accidental_rate(double n_s, double n_i, double tau_c_s, double eta) {
  if (n_s < 0.0 || n_i < 0.0 || tau_c_s < 0.0)
    throw std::invalid_argument("rates and window must be non-negative");
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("efficiency must lie in [0, 1]");
  return n_s * n_i * tau_c_s * (1.0 - eta);
}

EfficiencyRatios efficiency_ratio(const CountRecord& rec) {
  if (!(rec.n_s > 0.0 && rec.n_i > 0.0))
    throw std::domain_error("efficiency ratio undefined for zero singles");
  return {rec.n_c / std::sqrt(rec.n_s * rec.n_i), rec.n_c / rec.n_i,
          rec.n_c / rec.n_s};
}

double power_slope(const std::vector<CountRecord>& records,
                   double power_cutoff_mw) {
  double sxy = 0.0, sxx = 0.0;
  int n = 0;
  for (const CountRecord& r : records) {
    if (r.pump_power_mw > power_cutoff_mw) continue;
    sxy += r.pump_power_mw * r.n_c;
    sxx += r.pump_power_mw * r.pump_power_mw;
    ++n;
  }
  if (n < 2)
    throw std::invalid_argument(
        "power slope needs at least 2 records below the cutoff");
  if (!(sxx > 0.0)) throw std::invalid_argument("all powers are zero");
  return sxy / sxx;
}

VisibilityFit sincos_fit(const CorrelationCurve& curve) {
  std::vector<CurvePoint> pts = curve.points;
  std::sort(pts.begin(), pts.end(), [](const CurvePoint& a,
                                       const CurvePoint& b) {
    return a.phi1_deg < b.phi1_deg;
  });
  std::set<double> distinct;
  for (const CurvePoint& p : pts) distinct.insert(p.phi1_deg);
  if (distinct.size() < 4)
    throw std::invalid_argument("sin/cos fit needs >= 4 distinct angles");

  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double x = 4.0 * deg2rad(pts[i].phi1_deg);
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(x);
    design(i, 2) = std::sin(x);
    y(i) = pts[i].rate_hz;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                        Eigen::ComputeThinU |
                                            Eigen::ComputeThinV);
  const double smin = svd.singularValues()(2);
  const double smax = svd.singularValues()(0);
  if (smin < 1e-10 * smax) {
    const Eigen::Vector3d null_dir = svd.matrixV().col(2);
    int worst = 0;
    null_dir.cwiseAbs().maxCoeff(&worst);
    static const char* kBasis[] = {"constant", "cos(4 phi1)", "sin(4 phi1)"};
    std::ostringstream msg;
    msg << "degenerate design matrix: angles do not constrain the "
        << kBasis[worst] << " basis direction";
    throw std::runtime_error(msg.str());
  }
  const Eigen::Vector3d p = svd.solve(y);

  VisibilityFit fit;
  fit.mean_rate = p(0);
  const double amp = std::hypot(p(1), p(2));
  fit.visibility = fit.mean_rate != 0.0 ? amp / fit.mean_rate : 0.0;
  fit.phase_defined = amp > 1e-12 * std::max(1.0, std::fabs(fit.mean_rate));
  // R_bar (1 - V cos 4(phi - phi0)) => cos coeff -V R_bar cos(4 phi0)
  fit.phase_deg =
      fit.phase_defined ? rad2deg(std::atan2(-p(2), -p(1)) / 4.0) : 0.0;
  fit.residual_rms = std::sqrt((design * p - y).squaredNorm() / n);
  return fit;
}

CorrectedVisibility corrected_visibility(const VisibilityFit& fit,
                                         double n_acc_hz) {
  if (n_acc_hz < 0.0)
    throw std::invalid_argument("accidental rate must be non-negative");
  if (fit.mean_rate <= n_acc_hz)
    throw std::domain_error(
        "accidental rate reaches the mean coincidence rate");
  CorrectedVisibility cv;
  cv.value = fit.visibility * fit.mean_rate / (fit.mean_rate - n_acc_hz);
  if (cv.value > 1.0) {
    cv.value = 1.0;
    cv.clamped = true;
  }
  return cv;
}

Correlation correlation_e(double n_pp, double n_pm, double n_mp, double n_mm) {
  for (double v : {n_pp, n_pm, n_mp, n_mm})
    if (v < 0.0) throw std::invalid_argument("negative count");
  const double total = n_pp + n_pm + n_mp + n_mm;
  if (!(total > 0.0))
    throw std::domain_error("correlation undefined for zero total counts");
  Correlation e;
  e.value = (n_pp + n_mm - n_pm - n_mp) / total;
  // Poisson propagation of E = (A - B) / (A + B) with A = n_pp + n_mm.
  const double a = n_pp + n_mm, b = n_pm + n_mp;
  e.sigma = std::sqrt((1.0 - e.value) * (1.0 - e.value) * a +
                      (1.0 + e.value) * (1.0 + e.value) * b) /
            total;
  return e;
}

BellResult chsh_s(const std::array<Correlation, 4>& correlations) {
  BellResult r;
  r.correlations = correlations;
  r.s = correlations[0].value - correlations[1].value +
        correlations[2].value + correlations[3].value;
  double var = 0.0;
  for (const Correlation& c : correlations) var += c.sigma * c.sigma;
  r.sigma_s = std::sqrt(var);
  return r;
}

double model_coincidence_rate(double phi1_deg, double phi2_deg, double v,
                              double mean_rate_hz) {
  if (v < 0.0 || v > 1.0)
    throw std::invalid_argument("visibility must lie in [0, 1]");
  if (mean_rate_hz < 0.0)
    throw std::invalid_argument("mean rate must be non-negative");
  return mean_rate_hz *
         (1.0 - v * std::cos(4.0 * deg2rad(phi1_deg - phi2_deg)));
}

}  // namespace spdc
