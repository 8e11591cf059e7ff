#include <cmath>
#include <limits>

#include "doctest.h"
#include "plasma/sobolev.hpp"
#include "plasma/solver.hpp"
#include "plasma/variational.hpp"

using namespace plasma;

namespace {
constexpr double kJ0Zero = 2.404825557695773;
GreenOperator make(DomainSpec spec) { return GreenOperator(Domain::normalize(spec)); }
}  // namespace

TEST_CASE("free energy of the uniform density") {
    auto g = make(DomainSpec::unit_square(96));
    ScalarField one(g.domain_ptr(), 1.0);
    // lambda = 0: p/(p+1) exactly
    CHECK(free_energy(g, one, 0.0, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(free_energy(g, one, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

    // disk, rho == 1, lambda: p/(p+1) - lambda/(16 pi) within discretization
    auto gd = make(DomainSpec::disk(128));
    ScalarField oned(gd.domain_ptr(), 1.0);
    const double J = free_energy(gd, oned, 2.0, 2.0);
    CHECK(J == doctest::Approx(2.0 / 3.0 - 2.0 / (16.0 * M_PI)).epsilon(0.02));
}

TEST_CASE("lambda = 0 minimizer is uniform with J = p/(p+1) to 1e-8") {
    auto g = make(DomainSpec::disk(96));
    for (double p : {1.0, 2.0}) {
        VariationalResult r = minimize_J(g, 0.0, p);
        CHECK(r.J == doctest::Approx(p / (p + 1.0)).epsilon(1e-8));
        CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-8));
        for (double v : r.rho.rho.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.rho.mass() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("disk p = 2 lambda = 1: minimizer reproduces the solver") {
    auto g = make(DomainSpec::disk(128));
    VariationalResult vr = minimize_J(g, 1.0, 2.0);
    PlasmaSolution s = solve_plm(g, 1.0, 2.0);
    CHECK(std::abs(vr.alpha - s.alpha) <= 1e-3);
    double dev = 0;
    for (int k = 0; k < s.psi.size(); ++k) {
        const double f = std::pow(s.alpha + s.psi.v[k], 2.0);
        dev = std::max(dev, std::abs(vr.rho.rho.v[k] - f));
    }
    CHECK(dev <= 1e-3);
    CHECK(vr.residual <= 1e-6);
    // consistency identity rho = (alpha + lambda G[rho])^p on the support
    ScalarField grho = g.solve(vr.rho.rho);
    double idev = 0;
    for (int k = 0; k < grho.size(); ++k) {
        if (vr.rho.rho.v[k] <= 1e-12) continue;
        idev = std::max(idev, std::abs(vr.rho.rho.v[k] -
                                       std::pow(vr.alpha + grho.v[k], 2.0)));
    }
    CHECK(idev <= 1e-3);
}

TEST_CASE("objective decreases along accepted steps") {
    auto g = make(DomainSpec::unit_square(64));
    VariationalResult r = minimize_J(g, 2.0, 2.0);
    for (size_t k = 1; k < r.objective_history.size(); ++k)
        CHECK(r.objective_history[k] <=
              r.objective_history[k - 1] + 1e-12 * std::abs(r.objective_history[0]));
    CHECK(r.J <= free_energy(g, ScalarField(g.domain_ptr(), 1.0), 2.0, 2.0));
}

TEST_CASE("J(lambda) is non-increasing in lambda") {
    auto g = make(DomainSpec::disk(64));
    double prev = std::numeric_limits<double>::max();
    for (double lambda : {0.0, 1.0, 2.0, 4.0}) {
        VariationalResult r = minimize_J(g, lambda, 2.0);
        CHECK(r.J <= prev + 1e-12);
        prev = r.J;
    }
}

TEST_CASE("beyond the threshold the extracted multiplier turns negative") {
    auto g = make(DomainSpec::disk(96));
    const double ls = lambda_star(g, 2.0);
    VariationalResult r = minimize_J(g, 1.10 * ls, 2.0);
    CHECK(r.alpha < 0.0);
}

TEST_CASE("positivity threshold: disk p = 1 near the Bessel eigenvalue") {
    auto g = make(DomainSpec::disk(96));
    const double exact = M_PI * kJ0Zero * kJ0Zero;
    const double lss = positivity_threshold(g, 1.0, 0.8 * exact, 1.1 * exact,
                                            0.005 * exact);
    CHECK(lss == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("positivity threshold: disk p = 2 matches lambda_star within 2%") {
    auto g = make(DomainSpec::disk(96));
    const double ls = lambda_star(g, 2.0);
    const double lss = positivity_threshold(g, 2.0, 0.8 * ls, 1.15 * ls, 0.005 * ls);
    CHECK(lss == doctest::Approx(ls).epsilon(0.02));
}

TEST_CASE("same-sign bracket is rejected") {
    auto g = make(DomainSpec::disk(64));
    CHECK_THROWS_AS(positivity_threshold(g, 2.0, 0.5, 1.0, 0.01), SolverError);
}

TEST_CASE("simplex projection: feasibility and idempotence") {
    std::vector<double> x = {0.4, -0.2, 1.7, 0.0, 0.3};
    project_simplex(x, 1.0);
    double sum = 0;
    for (double v : x) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> y = x;
    project_simplex(y, 1.0);
    for (size_t k = 0; k < x.size(); ++k) CHECK(y[k] == doctest::Approx(x[k]));
}
