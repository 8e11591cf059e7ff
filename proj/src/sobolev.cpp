#include "plasma/sobolev.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace plasma {

namespace {

double s_norm(const ScalarField& w, double s) {
    const double h = w.domain->grid().h;
    double sum = 0;
    for (double x : w.v) sum += std::pow(std::abs(x), s);
    return std::pow(sum * h * h, 1.0 / s);
}

}  // namespace

SobolevResult best_constant(const GreenOperator& g, double s, double tol, int max_iter) {
    if (s < 2) throw SolverError("embedding exponent s must be at least 2");

    SobolevResult out;
    out.s = s;

    ScalarField w = g.psi0();
    {
        const double n = s_norm(w, s);
        for (double& x : w.v) x /= n;
    }

    const double h = w.domain->grid().h;
    double prev_R = std::numeric_limits<double>::max();
    for (int it = 1; it <= max_iter; ++it) {
        ScalarField rhs(w.domain);
        for (int k = 0; k < w.size(); ++k)
            rhs.v[k] = std::pow(std::max(w.v[k], 0.0), s - 1.0);
        ScalarField z = g.solve(rhs);

        // numerator int |grad z|^2 = int z * rhs by parts
        double num = 0;
        for (int k = 0; k < z.size(); ++k) num += z.v[k] * rhs.v[k];
        num *= h * h;
        const double zn = s_norm(z, s);
        const double R = num / (zn * zn);

        out.rayleigh_history.push_back(R);
        out.iterations = it;
        for (int k = 0; k < z.size(); ++k) w.v[k] = z.v[k] / zn;

        if (prev_R < std::numeric_limits<double>::max()) {
            if (R > prev_R * (1.0 + 1e-11)) {
                std::ostringstream os;
                os << "Rayleigh quotient increased along inverse iteration (" << prev_R
                   << " -> " << R << ")";
                throw SolverError(os.str());
            }
            const double rel = std::abs(R - prev_R) / R;
            if (rel <= tol) {
                out.Lambda = R;
                out.residual = rel;
                out.w = std::move(w);
                return out;
            }
        }
        prev_R = R;
    }
    std::ostringstream os;
    os << "Sobolev inverse iteration stagnated after " << max_iter
       << " steps; last quotients:";
    const size_t hist = out.rayleigh_history.size();
    for (size_t i = (hist > 5 ? hist - 5 : 0); i < hist; ++i)
        os << " " << out.rayleigh_history[i];
    throw SolverError(os.str());
}

double lambda_star_from_constant(double Lambda, double p) {
    const double s = p + 1.0;
    const double pref = std::pow(8.0 * M_PI / s, p - 1.0);
    return std::pow(pref * std::pow(Lambda, s), 1.0 / (2.0 * p));
}

double lambda_star(const GreenOperator& g, double p) {
    if (p < 1) throw SolverError("p must be at least 1");
    const SobolevResult r = best_constant(g, p + 1.0);
    return lambda_star_from_constant(r.Lambda, p);
}

}  // namespace plasma
