#include <cmath>

#include "doctest.h"
#include "plasma/solver.hpp"

using namespace plasma;

namespace {

constexpr double kJ0Zero = 2.404825557695773;

GreenOperator make(DomainSpec spec) { return GreenOperator(Domain::normalize(spec)); }

}  // namespace

TEST_CASE("lambda = 0 returns alpha = 1 and the Poisson solution") {
    for (auto spec : {DomainSpec::disk(64), DomainSpec::unit_square(64)}) {
        auto g = make(spec);
        PlasmaSolution s = solve_plm(g, 0.0, 2.0);
        CHECK(s.alpha == 1.0);
        CHECK(s.mass_residual <= 1e-12);
        CHECK(dist_inf(s.psi, g.psi0()) == 0.0);
        CHECK(s.energy ==
              doctest::Approx(
                  dirichlet_energy(g.psi0(), ScalarField(g.domain_ptr(), 1.0)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("disk p = 2 lambda = 1: alpha matches the radial oracle within 1e-3") {
    auto g = make(DomainSpec::disk(128));
    PlasmaSolution s = solve_plm(g, 1.0, 2.0);
    RadialSolution r = solve_disk_radial(1.0, 2.0);
    CHECK(std::abs(s.alpha - r.alpha) <= 1e-3);
    CHECK(s.mass_residual <= 1e-8);
    CHECK(s.pde_residual <= 1e-9);
    CHECK(s.mass_monotone);
    // maximum principle
    CHECK(s.psi.min() > 0.0);
    // (alpha + theta)^p > 1 whenever lambda > 0
    CHECK(std::pow(s.alpha + s.theta, 2.0) > 1.0);
}

TEST_CASE("disk p = 1 at the eigenvalue: alpha = 0 within 1e-2") {
    auto g = make(DomainSpec::disk(128));
    const double lambda = M_PI * kJ0Zero * kJ0Zero;
    PlasmaSolution s = solve_plm(g, lambda, 1.0);
    CHECK(std::abs(s.alpha) <= 1e-2);
    CHECK(s.mass_residual <= 1e-8);
    CHECK(s.psi.min() >= -1e-12);
}

TEST_CASE("p = 1 below the eigenvalue keeps alpha large") {
    auto g = make(DomainSpec::unit_square(96));
    PlasmaSolution s = solve_plm(g, 4.0, 1.0);
    CHECK(s.alpha > 0.5);  // lambda = 4 < 4 pi / e ~ 4.62
    CHECK(s.mass_residual <= 1e-8);
}

TEST_CASE("p = 1 beyond the eigenvalue reports the no-solution branch") {
    auto g = make(DomainSpec::disk(96));
    CHECK_THROWS_AS(solve_plm(g, 25.0, 1.0), NoSolutionOnBranch);
}

TEST_CASE("p = 2 far beyond the threshold reports the no-solution branch") {
    auto g = make(DomainSpec::disk(96));
    CHECK_THROWS_AS(solve_plm(g, 20.0, 2.0), NoSolutionOnBranch);
}

TEST_CASE("oracle vs grid: psi converges at order >= 1.5") {
    RadialSolution oracle = solve_disk_radial(1.0, 2.0);
    // boundary-strip composition fluctuates per n, so fit the decay rate by
    // least squares over several resolutions
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int n : {48, 64, 96, 128, 192, 256}) {
        auto g = make(DomainSpec::disk(n));
        PlasmaSolution s = solve_plm(g, 1.0, 2.0);
        const Grid& grid = g.domain().grid();
        double e = 0;
        for (int k = 0; k < grid.size(); ++k) {
            const double r = std::hypot(grid.x(k), grid.y(k));
            e = std::max(e, std::abs(s.psi.v[k] - oracle.psi_at(r)));
        }
        const double x = std::log(1.0 / n), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope >= 1.5);
}

TEST_CASE("mass samples are monotone across the outer iteration") {
    auto g = make(DomainSpec::rectangle(2.0, 96));
    PlasmaSolution s = solve_plm(g, 2.0, 2.0);
    CHECK(s.mass_monotone);
    CHECK(s.outer_samples.size() >= 2);
}

TEST_CASE("duality: p = 2, lambda = 4 gives I = 16, gamma = 4 alpha") {
    auto g = make(DomainSpec::disk(96));
    PlasmaSolution s = solve_plm(g, 4.0, 2.0);
    FreeBoundarySolution fb = to_free_boundary(s);
    CHECK(fb.I == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(fb.gamma == doctest::Approx(4.0 * s.alpha).epsilon(1e-14));

    // I^{-1/p} v = alpha + lambda psi pointwise to 1e-10
    const double ip = std::pow(fb.I, -0.5);
    double worst = 0;
    for (int k = 0; k < s.psi.size(); ++k)
        worst = std::max(worst,
                         std::abs(ip * fb.v.v[k] - (s.alpha + s.lambda * s.psi.v[k])));
    CHECK(worst <= 1e-10);

    // divergence-theorem current: int (v)_+^p = I
    CHECK(std::abs(fb.current_from_source() - fb.I) <= 1e-4 * fb.I);

    // round trip to 1e-10
    PlasmaSolution back = from_free_boundary(g, fb);
    CHECK(std::abs(back.lambda - s.lambda) <= 1e-10);
    CHECK(std::abs(back.alpha - s.alpha) <= 1e-10);
    CHECK(dist_inf(back.psi, s.psi) <= 1e-10);
}

TEST_CASE("duality rejections") {
    auto g = make(DomainSpec::disk(64));
    PlasmaSolution p1 = solve_plm(g, 2.0, 1.0);
    CHECK_THROWS_AS(to_free_boundary(p1), SolverError);  // p = 1 undefined

    PlasmaSolution s = solve_plm(g, 1.0, 2.0);
    FreeBoundarySolution fb = to_free_boundary(s);
    fb.gamma = -0.1;
    CHECK_THROWS_AS(from_free_boundary(g, fb), SolverError);  // gamma < 0
}

TEST_CASE("I = 1 maps back to lambda = 1 for any p") {
    auto g = make(DomainSpec::disk(64));
    for (double p : {1.5, 2.0, 3.0}) {
        FreeBoundarySolution fb;
        fb.I = 1.0;
        fb.gamma = 0.25;
        fb.p = p;
        fb.v = ScalarField(g.domain_ptr(), 0.5);
        PlasmaSolution s = from_free_boundary(g, fb);
        CHECK(s.lambda == doctest::Approx(1.0).epsilon(1e-14));
        if (p == 2.0) CHECK(s.alpha == doctest::Approx(0.25).epsilon(1e-14));
    }
    // gamma = 0 input gives alpha = 0
    FreeBoundarySolution fb;
    fb.I = 4.0;
    fb.gamma = 0.0;
    fb.p = 2.0;
    fb.v = ScalarField(g.domain_ptr(), 0.3);
    CHECK(from_free_boundary(g, fb).alpha == 0.0);
}

TEST_CASE("alpha-zero branch point: disk matches the radial threshold") {
    auto g = make(DomainSpec::disk(128));
    AlphaZeroResult az = solve_alpha_zero(g, 2.0);
    CHECK(az.sol.alpha == 0.0);
    CHECK(az.sol.mass_residual <= 1e-9);
    const double lam_rad = radial_alpha_zero_lambda(2.0, 11.0, 14.0, 1e-6);
    CHECK(az.lambda == doctest::Approx(lam_rad).epsilon(0.01));
}

TEST_CASE("alpha-zero branch point for p = 1 is the principal eigenvalue") {
    auto g = make(DomainSpec::disk(128));
    AlphaZeroResult az = solve_alpha_zero(g, 1.0);
    CHECK(az.lambda == doctest::Approx(M_PI * kJ0Zero * kJ0Zero).epsilon(0.001));
    CHECK(az.sol.mass_residual <= 1e-9);
}
