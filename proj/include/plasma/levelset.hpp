#ifndef PLASMA_LEVELSET_HPP
#define PLASMA_LEVELSET_HPP

#include <vector>

#include "plasma/radial.hpp"
#include "plasma/solver.hpp"

namespace plasma {

/// Sampled distribution functions of u = lambda psi over levels t in
/// [0, theta):
///   mu(t) = |{u > t}|           (cell counting)
///   m(t)  = lambda int_{u>t} (alpha + u)^p   (mask-normalized quadrature)
///   e(t)  = int_{u>t} |grad u|^2             (gradient quadrature)
/// plus the integrated inequality value at each level.
struct LevelSetProfile {
    double lambda = 0, p = 1, alpha = 0, theta = 0;
    std::vector<double> t, mu, m, e;
    std::vector<double> residual;

    int levels() const { return static_cast<int>(t.size()); }
};

LevelSetProfile profile(const GreenOperator& g, const PlasmaSolution& sol, int n_levels);
LevelSetProfile profile(const RadialSolution& sol, int n_levels);

/// Left side of the integrated differential inequality at level t; must be
/// <= 0 up to discretization slack, with equality exactly on the disk.
double integrated_inequality_value(double mu, double m, double e, double t, double alpha,
                                   double lambda, double p);

/// Maximum of the residual array (worst signed violation).
double check_integrated_inequality(const LevelSetProfile& prof);

/// The t = 0 combination of Theorem-level quantities,
/// -lambda^2/(8 pi) - lambda alpha^{p+1}/(p+1) + lambda alpha/(p+1)
/// + 2 lambda^2 E/(p+1).
double level2_combination(double alpha, double lambda, double p, double energy);

/// Consistency of e with the integral of m (the m = -e' identity in
/// integrated form): worst relative deviation over coarse bins, plus the
/// full-range value.
struct EmConsistency {
    double worst_bin = 0;
    double total = 0;
};
EmConsistency em_consistency(const LevelSetProfile& prof, int bins = 10);

}  // namespace plasma

#endif
