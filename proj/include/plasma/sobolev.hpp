#ifndef PLASMA_SOBOLEV_HPP
#define PLASMA_SOBOLEV_HPP

#include <vector>

#include "plasma/elliptic.hpp"

namespace plasma {

/// Best embedding constant Lambda(Omega, s) = inf of the Rayleigh quotient
/// R_s(w) = int |grad w|^2 / (int |w|^s)^{2/s}, with the positive minimizer.
struct SobolevResult {
    double s = 2;
    double Lambda = 0;
    ScalarField w;                        // minimizer, int |w|^s = 1, w >= 0
    double residual = 0;                  // relative quotient change at stop
    int iterations = 0;
    std::vector<double> rayleigh_history;
};

/// Nonlinear inverse iteration w <- G[w^{s-1}], renormalized to unit s-norm,
/// until the Rayleigh quotient stabilizes. The quotient must not increase
/// along the iteration; a violation beyond roundoff aborts.
SobolevResult best_constant(const GreenOperator& g, double s, double tol = 1e-9,
                            int max_iter = 10000);

/// lambda_*(Omega, p) = ((8 pi/(p+1))^{p-1} Lambda(Omega, p+1)^{p+1})^{1/(2p)}.
double lambda_star(const GreenOperator& g, double p);
double lambda_star_from_constant(double Lambda, double p);

}  // namespace plasma

#endif
