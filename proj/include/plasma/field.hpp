#ifndef PLASMA_FIELD_HPP
#define PLASMA_FIELD_HPP

#include <vector>

#include "plasma/geometry.hpp"

namespace plasma {

/// Grid function on the interior nodes of a Domain, with an implicit zero
/// trace on the boundary.
struct ScalarField {
    DomainPtr domain;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(DomainPtr d, double fill = 0.0)
        : domain(std::move(d)), v(domain->grid().size(), fill) {}

    int size() const { return static_cast<int>(v.size()); }
    double max() const;
    double min() const;
    double max_abs() const;
    /// Index of the largest value.
    int argmax() const;
};

/// Midpoint quadrature, sum * h^2. Accurate for integrands vanishing on the
/// boundary; carries the O(h) mask-area deficit otherwise.
double integrate_plain(const ScalarField& f);

/// Boundary-aware quadrature for mass-type integrals whose integrand has a
/// nonzero trace: arm-extent product weights normalized to integrate
/// constants exactly over the unit-area domain.
double integrate_domain(const ScalarField& f);

double norm_l2(const ScalarField& f);   // sqrt(sum v^2 h^2)
double dist_inf(const ScalarField& a, const ScalarField& b);

}  // namespace plasma

#endif
