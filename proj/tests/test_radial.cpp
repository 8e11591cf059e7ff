#include <cmath>

#include "doctest.h"
#include "plasma/radial.hpp"

using namespace plasma;

namespace {
// first zero of the order-zero Bessel function
constexpr double kJ0Zero = 2.404825557695773;
}  // namespace

TEST_CASE("lambda = 0: closed-form parabola") {
    RadialSolution s = solve_disk_radial(0.0, 2.0);
    const double R = 1.0 / std::sqrt(M_PI);
    CHECK(s.alpha == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.psi_peak == doctest::Approx(R * R / 4.0).epsilon(1e-10));
    CHECK(s.energy == doctest::Approx(1.0 / (16.0 * M_PI)).epsilon(1e-8));
    CHECK(s.mass_residual <= 1e-10);
    // interior profile matches (R^2 - r^2)/4 pointwise
    for (double r : {0.1, 0.3, 0.5}) {
        CHECK(s.psi_at(r) == doctest::Approx((R * R - r * r) / 4.0).epsilon(1e-9));
    }
}

TEST_CASE("p = 1 at the Bessel eigenvalue: alpha = 0 within 1e-6") {
    const double lambda = M_PI * kJ0Zero * kJ0Zero;
    RadialSolution s = solve_disk_radial(lambda, 1.0);
    CHECK(std::abs(s.alpha) <= 1e-6);
    CHECK(s.mass_residual <= 1e-10);
    CHECK(s.psi_peak > 0);
}

TEST_CASE("energy identity holds at oracle accuracy") {
    for (double p : {1.0, 2.0, 3.0}) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            RadialSolution s = solve_disk_radial(lambda, p);
            const double lhs = s.alpha * (1.0 - std::pow(s.alpha, p));
            const double rhs = 2.0 * lambda * ((p + 1.0) / (16.0 * M_PI) - s.energy);
            CHECK(std::abs(rhs - lhs) <= 1e-8);
            CHECK(s.mass_residual <= 1e-10);
            CHECK(s.shoot_residual <= 1e-11);
            CHECK(s.alpha > 0);
            CHECK(s.alpha < 1);
            // (alpha + theta)^p > 1 for lambda > 0
            CHECK(std::pow(s.alpha + s.theta, p) > 1.0);
        }
    }
}

TEST_CASE("equality residual decreases as the ODE resolution tightens") {
    RadialOptions coarse;
    coarse.steps = 64;
    RadialOptions fine;
    fine.steps = 4096;
    auto residual = [](const RadialSolution& s) {
        return std::abs(2.0 * s.lambda * ((s.p + 1.0) / (16.0 * M_PI) - s.energy) -
                        s.alpha * (1.0 - std::pow(s.alpha, s.p)));
    };
    const double rc = residual(solve_disk_radial(1.0, 2.0, coarse));
    const double rf = residual(solve_disk_radial(1.0, 2.0, fine));
    CHECK(rf <= rc + 1e-12);
}

TEST_CASE("interpolants are consistent with the cumulative integrals") {
    RadialSolution s = solve_disk_radial(1.5, 2.0);
    CHECK(s.cum_mass_at(s.R) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.cum_grad2_at(s.R) == doctest::Approx(2.0 * s.energy).epsilon(1e-9));
    const double t = 0.5 * s.theta;
    const double rt = s.level_radius(t);
    CHECK(s.lambda * s.psi_at(rt) == doctest::Approx(t).epsilon(1e-8));
}

TEST_CASE("monotone decreasing profile") {
    RadialSolution s = solve_disk_radial(2.0, 3.0);
    for (size_t k = 1; k < s.psi.size(); ++k) CHECK(s.psi[k] <= s.psi[k - 1] + 1e-14);
    CHECK(s.psi.back() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("no alpha >= 0 branch beyond the disk threshold") {
    // p = 2: the positivity threshold sits near 7; far beyond it the radial
    // solve must report the negative-multiplier regime
    CHECK_THROWS_AS(solve_disk_radial(20.0, 2.0), NoSolutionOnBranch);
}

TEST_CASE("radial threshold bisection rejects a bad bracket") {
    CHECK_THROWS_AS(radial_alpha_zero_lambda(2.0, 0.5, 1.0, 1e-3), SolverError);
}
