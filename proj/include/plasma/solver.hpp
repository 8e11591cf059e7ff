#ifndef PLASMA_SOLVER_HPP
#define PLASMA_SOLVER_HPP

#include <utility>
#include <vector>

#include "plasma/elliptic.hpp"
#include "plasma/radial.hpp"

namespace plasma {

class PicardDivergence : public SolverError {
public:
    using SolverError::SolverError;
};

/// Converged grid solution of the dual plasma problem.
struct PlasmaSolution {
    double lambda = 0, p = 1;
    double alpha = 0;
    ScalarField psi;
    double theta = 0;          // max of u = lambda psi
    double energy = 0;         // 1/2 int psi f
    double mass_residual = 0;  // |int (alpha + lambda psi)^p - 1|
    double pde_residual = 0;   // relative algebraic residual of the last solve

    int outer_iterations = 0;
    int inner_iterations = 0;
    bool mass_monotone = true;  // mass increasing across outer alpha samples
    std::vector<std::pair<double, double>> outer_samples;  // (alpha, mass)

    ScalarField u() const;  // lambda * psi
};

struct SolveOptions {
    double omega = 1.0;        // Picard damping, halved on divergence
    double mass_tol = 1e-8;
    double update_tol = 1e-11;  // inner relative update (contract asks 1e-9)
    int max_inner = 3000;
    int max_outer = 240;
};

/// Solves the plasma problem at (lambda, p): outer scalar iteration on alpha
/// in [0,1] driving the mass to 1, inner damped Picard iteration from psi = 0
/// (minimal branch). Throws NoSolutionOnBranch when no alpha >= 0 fits.
PlasmaSolution solve_plm(const GreenOperator& g, double lambda, double p,
                         SolveOptions opts = {});

/// Non-negative free boundary solution: boundary value gamma, total current I.
struct FreeBoundarySolution {
    double I = 0;
    double gamma = 0;
    double p = 2;
    ScalarField v;  // interior values; trace gamma on the boundary

    /// Current recomputed from the source by the divergence theorem,
    /// int (v)_+^p.
    double current_from_source() const;
};

/// Duality map: I = lambda^q, gamma = lambda^{1/(p-1)} alpha,
/// v = lambda^{1/(p-1)} (alpha + lambda psi). Requires p > 1 and lambda > 0.
FreeBoundarySolution to_free_boundary(const PlasmaSolution& sol);

/// Inverse map (gamma >= 0 branch): alpha = I^{-1/p} gamma,
/// psi = (v - gamma)/I, lambda = I^{1/q}.
PlasmaSolution from_free_boundary(const GreenOperator& g, const FreeBoundarySolution& fb);

/// The alpha = 0 branch point: normalized ground-state iteration for
/// -Lap w = w^p, then the amplitude and lambda fixed by unit mass. For p = 1
/// this is the principal Dirichlet eigenpair. Returns lambda together with
/// the solution, which has alpha = 0 exactly.
struct AlphaZeroResult {
    double lambda = 0;
    PlasmaSolution sol;
    int iterations = 0;
};
AlphaZeroResult solve_alpha_zero(const GreenOperator& g, double p, double tol = 1e-12,
                                 int max_iter = 50000);

}  // namespace plasma

#endif
