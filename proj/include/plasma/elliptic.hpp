#ifndef PLASMA_ELLIPTIC_HPP
#define PLASMA_ELLIPTIC_HPP

#include <memory>

#include "plasma/field.hpp"
#include "plasma/geometry.hpp"

namespace plasma {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Factorized inverse of the 5-point Dirichlet Laplacian with Shortley-Weller
/// boundary correction. Immutable after construction; concurrent solves are
/// safe.
class GreenOperator {
public:
    explicit GreenOperator(DomainPtr domain);
    ~GreenOperator();
    GreenOperator(GreenOperator&&) noexcept;

    const Domain& domain() const { return *domain_; }
    DomainPtr domain_ptr() const { return domain_; }

    /// psi with -Lap_h psi = f, zero trace. Relative algebraic residual is
    /// checked against 1e-10 and reported in the error on failure.
    ScalarField solve(const ScalarField& f) const;
    ScalarField solve_const(double value) const;

    /// Cached solution of -Lap psi = 1.
    const ScalarField& psi0() const;

    /// -Lap_h applied to a field (boundary values taken as zero).
    ScalarField apply_laplacian(const ScalarField& psi) const;

    /// Relative residual |A psi - f|_2 / |f|_2.
    double residual(const ScalarField& psi, const ScalarField& f) const;

    /// Discrete Green column for a unit point mass near (x0, y0): solves with
    /// source 1/h^2 at the nearest interior node. Returns the field and the
    /// node index.
    ScalarField green_column(double x0, double y0, int* node = nullptr) const;

    /// Gradient of psi at every node by centered (one-sided at cut cells,
    /// second order) differences. Returns |grad psi|^2 per node.
    ScalarField grad_squared(const ScalarField& psi) const;

private:
    struct Impl;
    DomainPtr domain_;
    std::unique_ptr<Impl> impl_;
    std::shared_ptr<const ScalarField> psi0_;
};

/// 1/2 * integral(psi * f), the integration-by-parts Dirichlet energy.
double dirichlet_energy(const ScalarField& psi, const ScalarField& f);

/// k_p(Omega) at x0: (integral G(x0,.)^{p+1})^{1/(p+1)} with the singular
/// cell replaced by the analytic local integral of (-log r / 2 pi)^{p+1}.
double kp_constant(const GreenOperator& g, double x0, double y0, double p);

/// kappa(Omega) = 4 pi * max over nodes of the f == 1 Poisson solution.
double kappa(const GreenOperator& g);

}  // namespace plasma

#endif
