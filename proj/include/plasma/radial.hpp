#ifndef PLASMA_RADIAL_HPP
#define PLASMA_RADIAL_HPP

#include <vector>

#include "plasma/elliptic.hpp"

namespace plasma {

/// A plasma run ended in a regime where no alpha >= 0 balances the unit mass.
class NoSolutionOnBranch : public SolverError {
public:
    using SolverError::SolverError;
};

struct RadialOptions {
    int steps = 4096;          // RK4 steps over [0, R]
    double mass_tol = 1e-12;   // |mass - 1| at the returned solution
    double shoot_tol = 1e-13;  // |psi(R)| scale for the inner root
    double alpha_max = 64.0;   // cap for the multiplier bracket growth
};

/// Radial solution on the unit-area disk (R = 1/sqrt(pi)), sampled on a
/// uniform grid in r together with cumulative mass and gradient integrals:
///   cum_mass(r)  = 2 pi int_0^r (alpha + lambda psi)_+^p s ds
///   cum_grad2(r) = 2 pi int_0^r psi'(s)^2 s ds
struct RadialSolution {
    double lambda = 0, p = 1, alpha = 0;
    double R = 0;
    double psi_peak = 0;        // psi(0)
    double theta = 0;           // lambda * psi(0)
    double energy = 0;          // 1/2 cum_grad2(R)
    double mass_residual = 0;
    double shoot_residual = 0;  // |psi(R)|
    int ode_steps = 0;

    std::vector<double> r, psi, dpsi, cum_mass, cum_grad2;

    double psi_at(double rr) const;
    double dpsi_at(double rr) const;
    double cum_mass_at(double rr) const;
    double cum_grad2_at(double rr) const;
    /// Largest r with lambda*psi(r) > t (level-set radius); u is decreasing.
    double level_radius(double t) const;
};

/// High-order shooting solver for the radial reduction of the plasma
/// problem: -(r psi')'/r = (alpha + lambda psi)^p, psi'(0) = 0, psi(R) = 0,
/// 2 pi int (alpha + lambda psi)^p r dr = 1. The peak value psi(0) is the
/// outer unknown; for each peak the multiplier alpha is matched to the
/// boundary condition, which stays well posed through the p = 1 eigenvalue
/// degeneracy and past folds of the (alpha, peak) relation.
RadialSolution solve_disk_radial(double lambda, double p, RadialOptions opts = {});

/// Bisects lambda until the radial multiplier hits zero: the disk positivity
/// threshold on the alpha >= 0 branch.
double radial_alpha_zero_lambda(double p, double lo, double hi, double tol = 1e-9,
                                RadialOptions opts = {});

}  // namespace plasma

#endif
