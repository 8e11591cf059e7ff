#ifndef PLASMA_VARIATIONAL_HPP
#define PLASMA_VARIATIONAL_HPP

#include <vector>

#include "plasma/elliptic.hpp"

namespace plasma {

/// Nonnegative density with unit mass under the mask-normalized quadrature.
struct Density {
    ScalarField rho;
    double mass() const { return integrate_domain(rho); }
};

struct VariationalResult {
    Density rho;
    double alpha = 0;     // Lagrange multiplier read off the support
    double J = 0;         // objective at rho
    double residual = 0;  // projected-gradient norm at stop
    int iterations = 0;
    std::vector<double> objective_history;  // accepted steps, nonincreasing
};

struct MinimizeOptions {
    double tol = 1e-6;        // projected-gradient norm target
    int max_iter = 100000;
    const Density* init = nullptr;  // warm start, defaults to uniform
    int trace = 0;                  // print a diagnostic line every `trace` iters
};

/// Free energy J(rho) = p/(p+1) int rho^{1+1/p} - lambda/2 int rho G[rho].
double free_energy(const GreenOperator& g, const ScalarField& rho, double lambda,
                   double p);

/// Projected-gradient descent over {rho >= 0, int rho = 1} with Armijo
/// backtracking and a Barzilai-Borwein step proposal. The multiplier is the
/// mass-weighted average of rho^{1/p} - lambda G[rho] over the support.
VariationalResult minimize_J(const GreenOperator& g, double lambda, double p,
                             MinimizeOptions opts = {});

/// Bisection on the sign of the extracted multiplier: the positivity
/// threshold lambda** for variational solutions. Requires alpha(lo) > 0 and
/// alpha(hi) < 0.
double positivity_threshold(const GreenOperator& g, double p, double lo, double hi,
                            double tol);

/// Euclidean projection onto {x >= 0, sum x = budget}.
void project_simplex(std::vector<double>& x, double budget);

}  // namespace plasma

#endif
