#include "plasma/levelset.hpp"

#include <algorithm>
#include <cmath>

namespace plasma {

double integrated_inequality_value(double mu, double m, double e, double t, double alpha,
                                   double lambda, double p) {
    return -m * m / (8.0 * M_PI) -
           lambda / (p + 1.0) * std::pow(alpha + t, p + 1.0) * mu +
           (alpha + t) * m / (p + 1.0) + e / (p + 1.0);
}

double level2_combination(double alpha, double lambda, double p, double energy) {
    return -lambda * lambda / (8.0 * M_PI) -
           lambda / (p + 1.0) * std::pow(alpha, p + 1.0) + lambda * alpha / (p + 1.0) +
           2.0 * lambda * lambda * energy / (p + 1.0);
}

namespace {

void fill_residuals(LevelSetProfile& prof) {
    prof.residual.resize(prof.t.size());
    for (size_t k = 0; k < prof.t.size(); ++k)
        prof.residual[k] = integrated_inequality_value(
            prof.mu[k], prof.m[k], prof.e[k], prof.t[k], prof.alpha, prof.lambda, prof.p);
}

std::vector<double> level_grid(double theta, int n_levels) {
    std::vector<double> t(n_levels);
    const double top = theta * (1.0 - 1e-6);
    for (int k = 0; k < n_levels; ++k) t[k] = top * k / (n_levels - 1);
    return t;
}

}  // namespace

LevelSetProfile profile(const GreenOperator& g, const PlasmaSolution& sol, int n_levels) {
    if (sol.lambda <= 0)
        throw SolverError("level-set profile requires lambda > 0 (trivial otherwise)");
    if (n_levels < 2) throw SolverError("need at least two levels");

    const Grid& grid = sol.psi.domain->grid();
    const int m = grid.size();
    const double h = grid.h;

    LevelSetProfile prof;
    prof.lambda = sol.lambda;
    prof.p = sol.p;
    prof.alpha = sol.alpha;
    prof.theta = sol.theta;
    prof.t = level_grid(sol.theta, n_levels);

    // node data: u, source (alpha+u)^p, |grad u|^2
    std::vector<double> u(m), f(m);
    for (int k = 0; k < m; ++k) {
        u[k] = sol.lambda * sol.psi.v[k];
        const double base = sol.alpha + u[k];
        f[k] = (base > 0) ? std::pow(base, sol.p) : 0.0;
    }
    ScalarField ufield = sol.u();
    const ScalarField grad2 = g.grad_squared(ufield);

    // sort nodes by u descending; sweeping levels from high to low turns the
    // profile into prefix sums
    std::vector<int> order(m);
    for (int k = 0; k < m; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return u[a] > u[b]; });

    const int L = n_levels;
    prof.mu.assign(L, 0.0);
    prof.m.assign(L, 0.0);
    prof.e.assign(L, 0.0);

    double cnt = 0, fwsum = 0, esum = 0;
    int pos = 0;
    for (int k = L - 1; k >= 0; --k) {
        const double t = prof.t[k];
        while (pos < m && u[order[pos]] > t) {
            const int node = order[pos];
            cnt += 1;
            fwsum += f[node] * grid.quad_w[node];
            esum += grad2.v[node];
            ++pos;
        }
        prof.mu[k] = cnt * h * h;
        prof.m[k] = sol.lambda * fwsum / grid.quad_total;
        prof.e[k] = esum * h * h;
    }

    fill_residuals(prof);
    return prof;
}

LevelSetProfile profile(const RadialSolution& sol, int n_levels) {
    if (sol.lambda <= 0)
        throw SolverError("level-set profile requires lambda > 0 (trivial otherwise)");
    if (n_levels < 2) throw SolverError("need at least two levels");

    LevelSetProfile prof;
    prof.lambda = sol.lambda;
    prof.p = sol.p;
    prof.alpha = sol.alpha;
    prof.theta = sol.theta;
    prof.t = level_grid(sol.theta, n_levels);

    const int L = n_levels;
    prof.mu.assign(L, 0.0);
    prof.m.assign(L, 0.0);
    prof.e.assign(L, 0.0);
    for (int k = 0; k < L; ++k) {
        const double rt = sol.level_radius(prof.t[k]);
        prof.mu[k] = M_PI * rt * rt;
        prof.m[k] = sol.lambda * sol.cum_mass_at(rt);
        prof.e[k] = sol.lambda * sol.lambda * sol.cum_grad2_at(rt);
    }

    fill_residuals(prof);
    return prof;
}

double check_integrated_inequality(const LevelSetProfile& prof) {
    return *std::max_element(prof.residual.begin(), prof.residual.end());
}

EmConsistency em_consistency(const LevelSetProfile& prof, int bins) {
    const int L = prof.levels();
    EmConsistency out;
    if (L < 2) return out;

    auto trapezoid = [&](int k0, int k1) {
        double s = 0;
        for (int j = k0; j < k1; ++j)
            s += 0.5 * (prof.m[j] + prof.m[j + 1]) * (prof.t[j + 1] - prof.t[j]);
        return s;
    };

    const double e0 = prof.e.front();
    const double total_drop = prof.e.front() - prof.e.back();
    const double total_trap = trapezoid(0, L - 1);
    out.total = std::abs(total_drop - total_trap) / std::max(e0, 1e-300);

    bins = std::max(1, std::min(bins, L - 1));
    for (int b = 0; b < bins; ++b) {
        const int k0 = b * (L - 1) / bins;
        const int k1 = (b + 1) * (L - 1) / bins;
        const double drop = prof.e[k0] - prof.e[k1];
        const double trap = trapezoid(k0, k1);
        const double denom = std::max({trap, e0 / (2.0 * bins), 1e-300});
        out.worst_bin = std::max(out.worst_bin, std::abs(drop - trap) / denom);
    }
    return out;
}

}  // namespace plasma
