#include "plasma/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <cstdio>
#include <sstream>

namespace plasma {

namespace {

constexpr double kSupportThreshold = 1e-12;

// Both terms share the mass quadrature so the stationarity condition keeps
// the exact (alpha + lambda G[rho])^p form.
double objective(const ScalarField& rho, const ScalarField& grho, double lambda,
                 double p) {
    const Grid& g = rho.domain->grid();
    double ent = 0, inter = 0;
    const double e = 1.0 + 1.0 / p;
    for (int k = 0; k < rho.size(); ++k) {
        ent += std::pow(rho.v[k], e) * g.quad_w[k];
        inter += rho.v[k] * grho.v[k] * g.quad_w[k];
    }
    return ((p / (p + 1.0)) * ent - 0.5 * lambda * inter) / g.quad_total;
}

// Projection onto {rho >= 0, sum rho w = budget} in the w-weighted Euclidean
// metric; the threshold is uniform because objective metric and constraint
// share the weights.
void project_weighted_simplex(std::vector<double>& x, const std::vector<double>& w,
                              double budget) {
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
    double prefix_vw = 0, prefix_w = 0, tau = 0;
    for (size_t k = 0; k < order.size(); ++k) {
        const int i = order[k];
        prefix_vw += x[i] * w[i];
        prefix_w += w[i];
        const double t = (prefix_vw - budget) / prefix_w;
        if (k + 1 == order.size() || x[order[k + 1]] <= t) {
            tau = t;
            break;
        }
    }
    for (double& v : x) v = std::max(v - tau, 0.0);
}

}  // namespace

void project_simplex(std::vector<double>& x, double budget) {
    const std::vector<double> w(x.size(), 1.0);
    project_weighted_simplex(x, w, budget);
}

double free_energy(const GreenOperator& g, const ScalarField& rho, double lambda,
                   double p) {
    return objective(rho, g.solve(rho), lambda, p);
}

VariationalResult minimize_J(const GreenOperator& g, double lambda, double p,
                             MinimizeOptions opts) {
    if (lambda < 0) throw SolverError("lambda must be nonnegative");
    if (p < 1) throw SolverError("p must be at least 1");

    const DomainPtr dom = g.domain_ptr();
    const Grid& grid = dom->grid();
    const int m = grid.size();
    const double budget = grid.quad_total;  // sum rho w = total <=> mass 1

    ScalarField rho(dom, 1.0);
    if (opts.init) {
        rho = opts.init->rho;
        project_weighted_simplex(rho.v, grid.quad_w, budget);
    }

    auto gradient = [&](const ScalarField& r, const ScalarField& gr, ScalarField& out) {
        for (int k = 0; k < m; ++k)
            out.v[k] = std::pow(r.v[k], 1.0 / p) - lambda * gr.v[k];
    };
    auto wdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (int k = 0; k < m; ++k) s += a[k] * b[k] * grid.quad_w[k];
        return s / grid.quad_total;
    };
    auto pg_norm = [&](const ScalarField& r, const ScalarField& grad) {
        std::vector<double> trial(r.v);
        for (int k = 0; k < m; ++k) trial[k] -= grad.v[k];
        project_weighted_simplex(trial, grid.quad_w, budget);
        double s = 0;
        for (int k = 0; k < m; ++k) {
            const double d = r.v[k] - trial[k];
            s += d * d * grid.quad_w[k];
        }
        return std::sqrt(s / grid.quad_total);
    };

    VariationalResult res;
    ScalarField grho = g.solve(rho);
    double J = objective(rho, grho, lambda, p);
    ScalarField grad(dom);
    gradient(rho, grho, grad);
    res.objective_history.push_back(J);

    double step = 1.0;
    ScalarField prev_rho = rho, prev_grad = grad;
    bool have_prev = false;
    // Armijo decrement demands below the roundoff floor of J are noise
    const double noise = 1e-13 * std::max(1.0, std::abs(J));

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const double pg = pg_norm(rho, grad);
        res.residual = pg;
        if (opts.trace > 0 && it % opts.trace == 0)
            std::fprintf(stderr, "  pg-iter %6d J=%.16f pg=%.3e step=%.3e\n", it, J,
                         pg, step);
        if (pg <= opts.tol) break;

        if (have_prev) {  // Barzilai-Borwein step proposal
            std::vector<double> ds(m), dy(m);
            for (int k = 0; k < m; ++k) {
                ds[k] = rho.v[k] - prev_rho.v[k];
                dy[k] = grad.v[k] - prev_grad.v[k];
            }
            const double sy = wdot(ds, dy);
            const double ss = wdot(ds, ds);
            if (sy > 1e-300) step = std::min(std::max(ss / sy, 1e-8), 1e6);
        }

        prev_rho = rho;
        prev_grad = grad;

        bool accepted = false;
        double t = step;
        for (int bt = 0; bt < 60; ++bt) {
            ScalarField trial(dom);
            for (int k = 0; k < m; ++k) trial.v[k] = rho.v[k] - t * grad.v[k];
            project_weighted_simplex(trial.v, grid.quad_w, budget);
            double move2 = 0;
            for (int k = 0; k < m; ++k) {
                const double d = trial.v[k] - rho.v[k];
                move2 += d * d * grid.quad_w[k];
            }
            move2 /= grid.quad_total;
            if (move2 == 0) break;  // stationary under this step
            ScalarField gtrial = g.solve(trial);
            const double Jt = objective(trial, gtrial, lambda, p);
            if (Jt <= J - 1e-4 * move2 / t + noise) {
                rho = std::move(trial);
                grho = std::move(gtrial);
                J = Jt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (pg <= 100 * opts.tol) break;  // stuck at line-search resolution
            std::ostringstream os;
            os << "projected-gradient line search stalled at iteration " << it
               << " with residual " << pg << "; objective history tail:";
            const size_t hist = res.objective_history.size();
            for (size_t i = (hist > 5 ? hist - 5 : 0); i < hist; ++i)
                os << " " << res.objective_history[i];
            throw SolverError(os.str());
        }
        gradient(rho, grho, grad);
        res.objective_history.push_back(J);
        have_prev = true;
    }
    if (it >= opts.max_iter) {
        std::ostringstream os;
        os << "minimize_J hit the iteration cap " << opts.max_iter
           << " with projected-gradient norm " << res.residual;
        throw SolverError(os.str());
    }

    res.iterations = it;
    res.J = J;

    // multiplier: mass-weighted average of the stationarity expression over
    // the support
    double num = 0, den = 0;
    for (int k = 0; k < m; ++k) {
        if (rho.v[k] <= kSupportThreshold) continue;
        const double stat = std::pow(rho.v[k], 1.0 / p) - lambda * grho.v[k];
        const double wgt = rho.v[k] * grid.quad_w[k];
        num += wgt * stat;
        den += wgt;
    }
    res.alpha = (den > 0) ? num / den : 0.0;
    res.rho.rho = std::move(rho);
    return res;
}

double positivity_threshold(const GreenOperator& g, double p, double lo, double hi,
                            double tol) {
    if (!(lo > 0) || !(hi > lo)) throw SolverError("invalid threshold bracket");

    Density warm;
    bool have_warm = false;
    auto alpha_at = [&](double lambda) {
        MinimizeOptions opts;
        if (have_warm) opts.init = &warm;
        VariationalResult r = minimize_J(g, lambda, p, opts);
        warm = r.rho;
        have_warm = true;
        return r.alpha;
    };

    double alo = alpha_at(lo);
    double ahi = alpha_at(hi);
    if (!(alo > 0) || !(ahi < 0)) {
        std::ostringstream os;
        os << "threshold bracket rejected: alpha(" << lo << ") = " << alo << ", alpha("
           << hi << ") = " << ahi << "; widen the scan";
        throw SolverError(os.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (alpha_at(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace plasma
