#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "spdc/phasematch.hpp"
#include "test_data.hpp"

using namespace spdc;

namespace {
const CrystalSpec kBbo = test::bbo();
const PumpConfig kPump = test::reference_pump();

EmissionSolution solve(double lambda_um, double phi_rad, Polarization pol) {
  return solve_emission(kBbo, kPump, EmissionQuery{lambda_um, phi_rad, pol});
}
}  // namespace

TEST_CASE("conjugate wavelength") {
  CHECK(conjugate_wavelength(0.3511, 0.7022) ==
        doctest::Approx(0.7022).epsilon(1e-14));
  // hand reciprocal arithmetic
  CHECK(conjugate_wavelength(0.3511, 0.690) ==
        doctest::Approx(0.7148391856004722).epsilon(1e-12));
  CHECK_THROWS_AS(conjugate_wavelength(0.3511, 0.3511), std::domain_error);
  CHECK_THROWS_AS(conjugate_wavelength(0.3511, 0.2), std::domain_error);
}

TEST_CASE("solved emission satisfies the momentum residual") {
  for (double phi : {0.0, 1.0, kPi / 2, kPi}) {
    for (Polarization pol :
         {Polarization::Ordinary, Polarization::Extraordinary}) {
      const EmissionSolution sol = solve(0.7022, phi, pol);
      CHECK(std::fabs(sol.residual) < 1e-8);
      CHECK(std::fabs(momentum_mismatch(kBbo, kPump,
                                        EmissionQuery{0.7022, phi, pol},
                                        sol.theta_i_int)) < 1e-8);
      // residual changes sign across the root
      const double lo = momentum_mismatch(
          kBbo, kPump, EmissionQuery{0.7022, phi, pol}, sol.theta_i_int - 1e-4);
      const double hi = momentum_mismatch(
          kBbo, kPump, EmissionQuery{0.7022, phi, pol}, sol.theta_i_int + 1e-4);
      CHECK(lo * hi < 0.0);
    }
  }
}

TEST_CASE("energy conservation holds exactly for every solution") {
  for (double l : {0.690, 0.7022, 0.710}) {
    const EmissionSolution sol = solve(l, 0.3, Polarization::Extraordinary);
    CHECK(1.0 / sol.lambda_s_um ==
          doctest::Approx(1.0 / kPump.lambda_um - 1.0 / l).epsilon(1e-14));
  }
}

TEST_CASE("transverse momentum conservation at solutions") {
  // Rebuild k_i + k_s from the solution and compare with k_p componentwise.
  const double two_pi = 2.0 * kPi;
  for (double phi : {0.0, 0.7, 2.0}) {
    const EmissionSolution sol = solve(0.7022, phi, Polarization::Extraordinary);
    const Eigen::Vector3d axis{std::sin(kPump.theta_p_rad), 0.0,
                               std::cos(kPump.theta_p_rad)};
    const Eigen::Vector3d u_i{std::sin(sol.theta_i_int) * std::cos(phi),
                              std::sin(sol.theta_i_int) * std::sin(phi),
                              std::cos(sol.theta_i_int)};
    const double n_i =
        index_e_theta(kBbo, 0.7022, std::acos(u_i.dot(axis)));
    const Eigen::Vector3d u_s{std::sin(sol.theta_s_int) * std::cos(sol.phi_s),
                              std::sin(sol.theta_s_int) * std::sin(sol.phi_s),
                              std::cos(sol.theta_s_int)};
    const double n_s = index(kBbo, sol.lambda_s_um, Polarization::Ordinary);
    const Eigen::Vector3d k_sum = two_pi / 0.7022 * n_i * u_i +
                                  two_pi / sol.lambda_s_um * n_s * u_s;
    const double n_p = index_e_theta(kBbo, kPump.lambda_um, kPump.theta_p_rad);
    const Eigen::Vector3d k_p{0.0, 0.0, two_pi / kPump.lambda_um * n_p};
    CHECK((k_sum - k_p).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("degenerate in-plane cone edges (frozen from an independent scan)") {
  // Values frozen from a separate prototype of the same momentum equations.
  CHECK(rad2deg(solve(0.7022, 0.0, Polarization::Extraordinary).theta_i_ext) ==
        doctest::Approx(7.976329).epsilon(1e-5));
  CHECK(rad2deg(solve(0.7022, kPi, Polarization::Extraordinary).theta_i_ext) ==
        doctest::Approx(1.284256).epsilon(1e-5));
  CHECK(rad2deg(solve(0.7022, 0.0, Polarization::Ordinary).theta_i_ext) ==
        doctest::Approx(1.284256).epsilon(1e-5));
  CHECK(rad2deg(solve(0.7022, kPi, Polarization::Ordinary).theta_i_ext) ==
        doctest::Approx(7.976329).epsilon(1e-5));
}

TEST_CASE("degenerate swap symmetry: o(phi) equals e(pi - phi)") {
  for (double phi : {0.0, 0.4, 1.2, kPi / 2}) {
    const EmissionSolution via_o = solve(0.7022, phi, Polarization::Ordinary);
    const EmissionSolution via_e =
        solve(0.7022, kPi - phi, Polarization::Extraordinary);
    CHECK(std::fabs(via_o.theta_i_ext - via_e.theta_s_ext) < 1e-6);
    CHECK(std::fabs(via_o.theta_s_ext - via_e.theta_i_ext) < 1e-6);
  }
}

TEST_CASE("mirror symmetry in azimuth") {
  for (double phi : {0.3, 1.0, 2.5}) {
    const EmissionSolution plus = solve(0.7022, phi, Polarization::Extraordinary);
    const EmissionSolution minus =
        solve(0.7022, -phi, Polarization::Extraordinary);
    CHECK(plus.theta_i_ext == doctest::Approx(minus.theta_i_ext).epsilon(1e-10));
    CHECK(plus.phi_s == doctest::Approx(-minus.phi_s).epsilon(1e-6));
  }
}

TEST_CASE("no phase matching at an unphysical pump angle") {
  PumpConfig pump = kPump;
  pump.theta_p_rad = deg2rad(5.0);
  CHECK_THROWS_AS(
      solve_emission(kBbo, pump,
                     EmissionQuery{0.7022, 0.0, Polarization::Extraordinary}),
      std::runtime_error);
}

TEST_CASE("dispersion derivative") {
  SUBCASE("ordinary branch in the optic-axis plane matches the design value") {
    const double d =
        dtheta_dlambda(kBbo, kPump, 0.7022, kPi, Polarization::Ordinary);
    CHECK(std::fabs(std::fabs(d) - 0.055) / 0.055 < 0.10);
  }

  SUBCASE("step robustness") {
    const double d1 =
        dtheta_dlambda(kBbo, kPump, 0.7022, kPi, Polarization::Ordinary, 1e-4);
    const double d2 =
        dtheta_dlambda(kBbo, kPump, 0.7022, kPi, Polarization::Ordinary, 5e-5);
    CHECK(std::fabs(d1 - d2) / std::fabs(d1) < 0.01);
    // Richardson check: quartering the step changes nothing at 1e-4 level
    const double d4 = dtheta_dlambda(kBbo, kPump, 0.7022, kPi,
                                     Polarization::Ordinary, 2.5e-5);
    CHECK(std::fabs(d2 - d4) < std::fabs(d1 - d2) + 1e-6);
  }

  SUBCASE("magnitude grows monotonically with wavelength on this branch") {
    const double at_690 =
        dtheta_dlambda(kBbo, kPump, 0.690, kPi, Polarization::Ordinary);
    const double at_deg =
        dtheta_dlambda(kBbo, kPump, 0.7022, kPi, Polarization::Ordinary);
    const double at_710 =
        dtheta_dlambda(kBbo, kPump, 0.710, kPi, Polarization::Ordinary);
    CHECK(std::fabs(at_690) < std::fabs(at_deg));
    CHECK(std::fabs(at_deg) < std::fabs(at_710));
  }
}

TEST_CASE("cone intersection geometry") {
  const ConeIntersection ci = intersection_geometry(kBbo, kPump);
  CHECK(rad2deg(ci.polar_ext_rad) == doctest::Approx(3.1).epsilon(0.1));
  CHECK(rad2deg(ci.tangent_angle_rad) == doctest::Approx(90.0).epsilon(0.06));

  SUBCASE("mirror images across the pump / optic-axis plane") {
    CHECK(ci.direction_plus.x() ==
          doctest::Approx(ci.direction_minus.x()).epsilon(1e-10));
    CHECK(ci.direction_plus.y() ==
          doctest::Approx(-ci.direction_minus.y()).epsilon(1e-10));
    CHECK(ci.direction_plus.z() ==
          doctest::Approx(ci.direction_minus.z()).epsilon(1e-10));
  }

  SUBCASE("no intersection for a small pump angle") {
    PumpConfig pump = kPump;
    pump.theta_p_rad = deg2rad(30.0);
    CHECK_THROWS_AS(intersection_geometry(kBbo, pump), std::runtime_error);
  }
}

TEST_CASE("emission sweep") {
  SUBCASE("row count and consistency with single solves") {
    const auto rows =
        sweep_emission(kBbo, kPump, 0.690, 0.710, 5e-4, kPi,
                       Polarization::Ordinary);
    CHECK(rows.size() == 41);
    for (const auto& r : rows) CHECK(r.ok);

    const auto single = sweep_emission(kBbo, kPump, 0.7022, 0.7022, 5e-4, kPi,
                                       Polarization::Ordinary);
    REQUIRE(single.size() == 1);
    const EmissionSolution sol = solve(0.7022, kPi, Polarization::Ordinary);
    CHECK(single[0].theta_i_ext == doctest::Approx(sol.theta_i_ext));
    CHECK(single[0].theta_s_ext == doctest::Approx(sol.theta_s_ext));
  }

  SUBCASE("derivative column agrees with a secant over neighboring rows") {
    const auto rows = sweep_emission(kBbo, kPump, 0.7017, 0.7027, 5e-4, kPi,
                                     Polarization::Ordinary);
    REQUIRE(rows.size() == 3);
    const double secant = rad2deg(rows[2].theta_i_ext - rows[0].theta_i_ext) /
                          (um_to_nm(rows[2].lambda_um - rows[0].lambda_um));
    CHECK(std::fabs(rows[1].dtheta_dlambda_deg_per_nm - secant) /
              std::fabs(secant) <
          0.02);
  }

  SUBCASE("smooth curve over the sweep window") {
    const auto rows = sweep_emission(kBbo, kPump, 0.690, 0.710, 5e-4, kPi,
                                     Polarization::Ordinary);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::fabs(rad2deg(rows[i].theta_i_ext - rows[i - 1].theta_i_ext)) <
            0.1);
    }
  }

  SUBCASE("failed rows are flagged, not dropped") {
    PumpConfig pump = kPump;
    pump.theta_p_rad = deg2rad(5.0);
    const auto rows = sweep_emission(kBbo, pump, 0.7022, 0.7032, 5e-4, 0.0,
                                     Polarization::Extraordinary);
    CHECK(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK_FALSE(r.ok);
      CHECK(r.status.find("no phase matching") != std::string::npos);
    }
  }

  SUBCASE("usage errors") {
    CHECK_THROWS_AS(sweep_emission(kBbo, kPump, 0.7, 0.71, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_emission(kBbo, kPump, 0.71, 0.70, 1e-3, 0.0),
                    std::invalid_argument);
  }
}
