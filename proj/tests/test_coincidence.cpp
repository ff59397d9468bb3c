#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spdc/coincidence.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {
CorrelationCurve synthetic_curve(double v, double mean, double phase_deg,
                                 int n_points) {
  CorrelationCurve curve;
  for (int k = 0; k < n_points; ++k) {
    const double phi = 180.0 * k / n_points;
    curve.points.push_back(
        {phi, phase_deg, model_coincidence_rate(phi, phase_deg, v, mean), 1.0});
  }
  return curve;
}
}  // namespace

TEST_CASE("accidental rate") {
  // hand arithmetic: 4.2e5 * 4.2e5 * 6.8e-9 * 0.786
  CHECK(accidental_rate(420e3, 420e3, 6.8e-9, 0.214) ==
        doctest::Approx(942.82272).epsilon(1e-12));
  CHECK(std::fabs(accidental_rate(420e3, 420e3, 6.8e-9, 0.214) - 943.0) < 1.0);
  CHECK(accidental_rate(420e3, 420e3, 6.8e-9, 1.0) == 0.0);
  CHECK(accidental_rate(420e3, 420e3, 0.0, 0.214) == 0.0);
  CHECK_THROWS_AS(accidental_rate(1.0, 1.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(accidental_rate(1.0, 1.0, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(accidental_rate(-1.0, 1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("efficiency ratios") {
  CountRecord rec;
  rec.n_s = 420e3;
  rec.n_i = 420e3;
  rec.n_c = 120e3;
  const EfficiencyRatios r = efficiency_ratio(rec);
  CHECK(r.overall == doctest::Approx(120e3 / 420e3).epsilon(1e-14));
  CHECK(r.arm_s == doctest::Approx(r.overall).epsilon(1e-14));
  CHECK(r.arm_i == doctest::Approx(r.overall).epsilon(1e-14));

  rec.n_s = 400e3;
  rec.n_i = 441e3;
  const EfficiencyRatios r2 = efficiency_ratio(rec);
  CHECK(r2.overall ==
        doctest::Approx(120e3 / std::sqrt(400e3 * 441e3)).epsilon(1e-14));
  CHECK(r2.arm_s == doctest::Approx(120e3 / 441e3).epsilon(1e-14));
  CHECK(r2.arm_i == doctest::Approx(120e3 / 400e3).epsilon(1e-14));

  rec.n_s = 0.0;
  CHECK_THROWS_AS(efficiency_ratio(rec), std::domain_error);
}

TEST_CASE("power slope through the origin") {
  std::vector<CountRecord> recs;
  for (double p : {50.0, 100.0, 200.0, 400.0}) {
    CountRecord r;
    r.pump_power_mw = p;
    r.n_c = 900.0 * p;
    recs.push_back(r);
  }
  CHECK(power_slope(recs, 1e9) == doctest::Approx(900.0).epsilon(1e-12));

  SUBCASE("cutoff removes saturated points") {
    CountRecord sat;
    sat.pump_power_mw = 465.0;
    sat.n_c = 0.8 * 900.0 * 465.0;  // bends below the line
    recs.push_back(sat);
    CHECK(power_slope(recs, 1e9) < 900.0);
    CHECK(power_slope(recs, 400.0) == doctest::Approx(900.0).epsilon(1e-12));
  }

  SUBCASE("least-squares optimality: perturbing the slope raises the cost") {
    recs[1].n_c += 5000.0;  // off the line, so the fit is non-trivial
    const double s = power_slope(recs, 1e9);
    auto cost = [&](double m) {
      double c = 0.0;
      for (const CountRecord& r : recs) {
        const double e = r.n_c - m * r.pump_power_mw;
        c += e * e;
      }
      return c;
    };
    CHECK(cost(s) < cost(s * 1.001));
    CHECK(cost(s) < cost(s * 0.999));
  }

  CHECK_THROWS_AS(power_slope(recs, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(power_slope({}, 1e9), std::invalid_argument);
}

TEST_CASE("sin/cos visibility fit") {
  SUBCASE("noiseless recovery at the reference operating point") {
    const VisibilityFit fit = sincos_fit(synthetic_curve(0.96, 42092.09, 0.0, 16));
    CHECK(fit.visibility == doctest::Approx(0.96).epsilon(1e-10));
    CHECK(fit.mean_rate == doctest::Approx(42092.09).epsilon(1e-10));
    CHECK(fit.phase_deg == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(fit.residual_rms < 1e-6);
    CHECK(fit.phase_defined);
  }

  SUBCASE("randomized exact recovery") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> uv(0.05, 1.0), um(1e2, 1e5),
        uph(-22.0, 22.0);
    for (int i = 0; i < 100; ++i) {
      const double v = uv(gen), m = um(gen), ph = uph(gen);
      const VisibilityFit fit = sincos_fit(synthetic_curve(v, m, ph, 12));
      CHECK(fit.visibility == doctest::Approx(v).epsilon(1e-9));
      CHECK(fit.mean_rate == doctest::Approx(m).epsilon(1e-9));
      CHECK(fit.phase_deg == doctest::Approx(ph).epsilon(1e-6));
    }
  }

  SUBCASE("flat curve: zero visibility, phase undefined") {
    CorrelationCurve flat;
    for (double phi : {0.0, 30.0, 60.0, 105.0, 150.0})
      flat.points.push_back({phi, 0.0, 1234.0, 1.0});
    const VisibilityFit fit = sincos_fit(flat);
    CHECK(fit.visibility == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK_FALSE(fit.phase_defined);
  }

  SUBCASE("point order does not matter") {
    CorrelationCurve fwd = synthetic_curve(0.7, 1000.0, 5.0, 9);
    CorrelationCurve rev = fwd;
    std::reverse(rev.points.begin(), rev.points.end());
    CHECK(sincos_fit(fwd).visibility ==
          doctest::Approx(sincos_fit(rev).visibility).epsilon(1e-12));
  }

  SUBCASE("too few distinct angles") {
    CorrelationCurve c;
    for (double phi : {0.0, 45.0, 90.0, 45.0})
      c.points.push_back({phi, 0.0, 100.0, 1.0});
    CHECK_THROWS_AS(sincos_fit(c), std::invalid_argument);
  }

  SUBCASE("degenerate angle set names the unconstrained direction") {
    // phi at multiples of 45 deg makes sin(4 phi) vanish identically
    CorrelationCurve c;
    for (double phi : {0.0, 45.0, 90.0, 135.0, 180.0})
      c.points.push_back({phi, 0.0, 100.0, 1.0});
    CHECK_THROWS_WITH_AS(sincos_fit(c), doctest::Contains("sin(4 phi1)"),
                         std::runtime_error);
  }
}

TEST_CASE("accidental-corrected visibility") {
  SUBCASE("reference fixture pairs") {
    VisibilityFit fit;
    fit.visibility = 0.960;
    fit.mean_rate = 42092.09;  // solves 0.960 -> 0.982 at a 943/s floor
    const CorrectedVisibility a = corrected_visibility(fit, 943.0);
    CHECK(a.value == doctest::Approx(0.982).epsilon(1e-3 / 0.982));
    CHECK(std::fabs(a.value - 0.982) < 1e-3);
    CHECK_FALSE(a.clamped);

    fit.visibility = 0.945;
    fit.mean_rate = 50450.5;  // second basis
    const CorrectedVisibility b = corrected_visibility(fit, 943.0);
    CHECK(std::fabs(b.value - 0.963) < 1e-3);
    CHECK_FALSE(b.clamped);
  }

  SUBCASE("zero floor is the identity") {
    VisibilityFit fit;
    fit.visibility = 0.87;
    fit.mean_rate = 5e4;
    CHECK(corrected_visibility(fit, 0.0).value == doctest::Approx(0.87));
  }

  SUBCASE("over-subtraction clamps at 1 and flags it") {
    VisibilityFit fit;
    fit.visibility = 0.99;
    fit.mean_rate = 1000.0;
    const CorrectedVisibility cv = corrected_visibility(fit, 500.0);
    CHECK(cv.value == 1.0);
    CHECK(cv.clamped);
  }

  SUBCASE("floor at or above the mean rate is a domain error") {
    VisibilityFit fit;
    fit.visibility = 0.9;
    fit.mean_rate = 900.0;
    CHECK_THROWS_AS(corrected_visibility(fit, 900.0), std::domain_error);
    CHECK_THROWS_AS(corrected_visibility(fit, 1200.0), std::domain_error);
    CHECK_THROWS_AS(corrected_visibility(fit, -1.0), std::invalid_argument);
  }
}

TEST_CASE("correlation estimator") {
  SUBCASE("hand-computed values") {
    const Correlation e = correlation_e(40.0, 10.0, 10.0, 40.0);
    CHECK(e.value == doctest::Approx(0.6).epsilon(1e-14));
    // sigma = sqrt((1-E)^2 (n_pp + n_mm) + (1+E)^2 (n_pm + n_mp)) / N
    CHECK(e.sigma == doctest::Approx(std::sqrt(0.16 * 80.0 + 2.56 * 20.0) /
                                     100.0)
                         .epsilon(1e-12));

    const Correlation flat = correlation_e(25.0, 25.0, 25.0, 25.0);
    CHECK(flat.value == 0.0);
    CHECK(flat.sigma == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("bounds and symmetry") {
    CHECK(correlation_e(50.0, 0.0, 0.0, 50.0).value == 1.0);
    CHECK(correlation_e(0.0, 50.0, 50.0, 0.0).value == -1.0);
    const Correlation a = correlation_e(30.0, 20.0, 10.0, 40.0);
    const Correlation b = correlation_e(40.0, 10.0, 20.0, 30.0);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    CHECK(a.sigma == doctest::Approx(b.sigma).epsilon(1e-14));
  }

  SUBCASE("sigma shrinks as 1/sqrt(N)") {
    const Correlation small = correlation_e(30.0, 20.0, 10.0, 40.0);
    const Correlation big = correlation_e(3000.0, 2000.0, 1000.0, 4000.0);
    CHECK(big.value == doctest::Approx(small.value).epsilon(1e-14));
    CHECK(big.sigma == doctest::Approx(small.sigma / 10.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(correlation_e(0.0, 0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(correlation_e(-1.0, 2.0, 3.0, 4.0), std::invalid_argument);
}

TEST_CASE("CHSH combination") {
  // Ideal psi-minus at the canonical settings: E = -V cos 4(dphi) with
  // half-wave-plate offsets of +-11.25 and -33.75 degrees.
  auto bell_for_visibility = [](double v) {
    auto counts_for = [&](double dphi_deg) {
      const double c = v * std::cos(4.0 * deg2rad(dphi_deg));
      const double n = 1e6;
      return correlation_e(n * (1.0 - c) / 4.0, n * (1.0 + c) / 4.0,
                           n * (1.0 + c) / 4.0, n * (1.0 - c) / 4.0);
    };
    return chsh_s({counts_for(-11.25), counts_for(-33.75), counts_for(11.25),
                   counts_for(-11.25)});
  };

  SUBCASE("ideal state saturates -2 sqrt(2)") {
    const BellResult r = bell_for_visibility(1.0);
    CHECK(std::fabs(r.s - (-2.0 * std::sqrt(2.0))) < 1e-10);
  }

  SUBCASE("reduced visibility scales S linearly") {
    const BellResult r = bell_for_visibility(0.954);
    CHECK(r.s == doctest::Approx(-0.954 * 2.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::fabs(r.s - (-2.6979)) < 0.01);
    // still a violation, and by many standard errors at these counts
    CHECK(r.s < -2.0);
    CHECK((std::fabs(r.s) - 2.0) / r.sigma_s > 3.0);
  }

  SUBCASE("error adds in quadrature") {
    Correlation c;
    c.value = -std::sqrt(0.5);
    c.sigma = 0.01;
    const BellResult r = chsh_s({c, Correlation{std::sqrt(0.5), 0.01}, c, c});
    CHECK(r.sigma_s == doctest::Approx(0.02).epsilon(1e-12));
  }
}

TEST_CASE("model coincidence rate") {
  CHECK(model_coincidence_rate(0.0, 0.0, 0.96, 1000.0) ==
        doctest::Approx(40.0).epsilon(1e-12));
  CHECK(model_coincidence_rate(45.0, 0.0, 0.96, 1000.0) ==
        doctest::Approx(1960.0).epsilon(1e-12));
  CHECK(model_coincidence_rate(22.5, 0.0, 0.96, 1000.0) ==
        doctest::Approx(1000.0).epsilon(1e-12));
  // depends only on the angle difference
  CHECK(model_coincidence_rate(30.0, 10.0, 0.5, 500.0) ==
        doctest::Approx(model_coincidence_rate(20.0, 0.0, 0.5, 500.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS(model_coincidence_rate(0.0, 0.0, 1.5, 100.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(model_coincidence_rate(0.0, 0.0, 0.5, -1.0),
                  std::invalid_argument);
}
