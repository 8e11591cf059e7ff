#include "plasma/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace plasma {

namespace {

ScalarField source_term(const ScalarField& psi, double alpha, double lambda, double p) {
    ScalarField f(psi.domain);
    for (int k = 0; k < psi.size(); ++k) {
        const double base = alpha + lambda * psi.v[k];
        f.v[k] = (base > 0) ? std::pow(base, p) : 0.0;
    }
    return f;
}

struct InnerResult {
    ScalarField psi;
    double mass = 0;
    int iterations = 0;
};

// Damped Picard iteration from psi = 0; selects the minimal branch. The
// damping omega halves after 50 consecutive growing updates, restarting
// from zero.
InnerResult picard_inner(const GreenOperator& g, double alpha, double lambda, double p,
                         const SolveOptions& opts) {
    InnerResult res;
    double omega = opts.omega;
    double prev_update = std::numeric_limits<double>::max();

    while (omega >= 1.0 / 64.0) {
        ScalarField psi(g.domain_ptr(), 0.0);
        prev_update = std::numeric_limits<double>::max();
        double window_ref = std::numeric_limits<double>::max();
        int grow = 0;
        bool diverged = false;
        for (int it = 1; it <= opts.max_inner; ++it) {
            ScalarField f(psi.domain);
            double fmax = 0;
            for (int k = 0; k < psi.size(); ++k) {
                const double base = alpha + lambda * psi.v[k];
                f.v[k] = (base > 0) ? std::pow(base, p) : 0.0;
                fmax = std::max(fmax, f.v[k]);
            }
            if (!std::isfinite(fmax) || fmax > 1e100) {
                diverged = true;
                break;
            }
            ScalarField next = g.solve(f);
            double upd = 0, scale = 0;
            for (int k = 0; k < psi.size(); ++k) {
                next.v[k] = (1.0 - omega) * psi.v[k] + omega * next.v[k];
                upd = std::max(upd, std::abs(next.v[k] - psi.v[k]));
                scale = std::max(scale, std::abs(next.v[k]));
            }
            psi = std::move(next);
            res.iterations += 1;
            if (!std::isfinite(scale) || !std::isfinite(upd)) {
                diverged = true;
                break;
            }
            const double rel = (scale > 0) ? upd / scale : 0.0;
            if (rel <= opts.update_tol) {
                res.psi = std::move(psi);
                res.mass = integrate_domain(source_term(res.psi, alpha, lambda, p));
                return res;
            }
            grow = (rel > prev_update) ? grow + 1 : 0;
            prev_update = rel;
            if (grow >= 50) {
                diverged = true;
                break;
            }
            // any contraction shrinks the update over a 200-step window;
            // flat or growing updates mean this omega will not converge
            if (it % 200 == 0) {
                if (rel >= window_ref) {
                    diverged = true;
                    break;
                }
                window_ref = rel;
            }
        }
        if (!diverged) {
            std::ostringstream os;
            os << "inner Picard iteration did not reach the update tolerance within "
               << opts.max_inner << " steps (last relative update " << prev_update
               << ")";
            throw PicardDivergence(os.str());
        }
        omega *= 0.5;
    }
    std::ostringstream os;
    os << "inner Picard iteration diverged at alpha=" << alpha << " lambda=" << lambda
       << " p=" << p << "; try a smaller damping omega or a smaller lambda";
    throw PicardDivergence(os.str());
}

PlasmaSolution finalize(const GreenOperator& g, double lambda, double p, double alpha,
                        ScalarField psi) {
    PlasmaSolution sol;
    sol.lambda = lambda;
    sol.p = p;
    sol.alpha = alpha;
    const ScalarField f = source_term(psi, alpha, lambda, p);
    sol.theta = lambda * psi.max();
    sol.energy = dirichlet_energy(psi, f);
    sol.mass_residual = std::abs(integrate_domain(f) - 1.0);
    sol.pde_residual = g.residual(psi, f);
    sol.psi = std::move(psi);
    return sol;
}

// For p = 1 the inner problem is linear: psi = alpha * w with
// (-Lap - lambda) w = 1, and the mass is linear in alpha.
PlasmaSolution solve_p1(const GreenOperator& g, double lambda, const SolveOptions& opts) {
    const Grid& grid = g.domain().grid();
    const int m = grid.size();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 5);
    for (int k = 0; k < m; ++k) {
        const double de = grid.arm_e[k], dw = grid.arm_w[k];
        const double dn = grid.arm_n[k], ds = grid.arm_s[k];
        trip.emplace_back(k, k, 2.0 / (de * dw) + 2.0 / (dn * ds) - lambda);
        if (grid.nbr_e[k] >= 0) trip.emplace_back(k, grid.nbr_e[k], -2.0 / (de * (de + dw)));
        if (grid.nbr_w[k] >= 0) trip.emplace_back(k, grid.nbr_w[k], -2.0 / (dw * (de + dw)));
        if (grid.nbr_n[k] >= 0) trip.emplace_back(k, grid.nbr_n[k], -2.0 / (dn * (dn + ds)));
        if (grid.nbr_s[k] >= 0) trip.emplace_back(k, grid.nbr_s[k], -2.0 / (ds * (dn + ds)));
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("shifted Laplacian factorization failed (lambda at an eigenvalue?)");

    Eigen::VectorXd one = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd w = lu.solve(one);
    if (lu.info() != Eigen::Success || (A * w - one).norm() / one.norm() > 1e-8)
        throw SolverError("shifted solve failed; lambda too close to an eigenvalue");

    ScalarField wf(g.domain_ptr());
    for (int k = 0; k < m; ++k) wf.v[k] = w[k];
    const double K = 1.0 + lambda * integrate_domain(wf);
    const double alpha = 1.0 / K;

    ScalarField psi(g.domain_ptr());
    for (int k = 0; k < m; ++k) psi.v[k] = alpha * w[k];
    if (psi.min() < -1e-12 || alpha < -1e-2 || alpha > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "no solution with alpha >= 0 on this branch (p = 1, lambda=" << lambda
           << " beyond the principal eigenvalue; alpha would be " << alpha << ")";
        throw NoSolutionOnBranch(os.str());
    }

    PlasmaSolution sol = finalize(g, lambda, 1.0, alpha, std::move(psi));
    sol.outer_iterations = 1;
    sol.outer_samples = {{alpha, 1.0}};
    (void)opts;
    return sol;
}

}  // namespace

ScalarField PlasmaSolution::u() const {
    ScalarField out = psi;
    for (double& x : out.v) x *= lambda;
    return out;
}

PlasmaSolution solve_plm(const GreenOperator& g, double lambda, double p,
                         SolveOptions opts) {
    if (lambda < 0) throw SolverError("lambda must be nonnegative");
    if (p < 1) throw SolverError("p must be at least 1");

    if (lambda == 0) {
        PlasmaSolution sol = finalize(g, 0.0, p, 1.0, g.psi0());
        sol.outer_iterations = 0;
        return sol;
    }
    if (p == 1.0) return solve_p1(g, lambda, opts);

    // Outer bracket on alpha in [0,1]: the mass vanishes on the minimal
    // branch at alpha = 0 and exceeds 1 at alpha = 1. Picard divergence marks
    // the region beyond the fold and is treated as mass overshoot.
    const double huge_mass = std::numeric_limits<double>::max();
    PlasmaSolution sol;
    std::vector<std::pair<double, double>> samples;
    int inner_total = 0;
    // smallest alpha seen to diverge: everything above the fold diverges too
    double div_min = std::numeric_limits<double>::max();

    auto mass_at = [&](double alpha, ScalarField* psi_out) {
        if (alpha >= div_min) {
            samples.emplace_back(alpha, huge_mass);
            return huge_mass;
        }
        try {
            InnerResult r = picard_inner(g, alpha, lambda, p, opts);
            inner_total += r.iterations;
            if (psi_out) *psi_out = std::move(r.psi);
            samples.emplace_back(alpha, r.mass);
            return r.mass;
        } catch (const PicardDivergence&) {
            div_min = std::min(div_min, alpha);
            samples.emplace_back(alpha, huge_mass);
            return huge_mass;
        }
    };

    double lo = 0.0, m_lo = 0.0;
    double hi = 1.0;
    ScalarField psi_hi;
    double m_hi = mass_at(hi, &psi_hi);
    if (m_hi < 1.0 - 1e-7) {
        std::ostringstream os;
        os << "outer iteration failed to bracket: mass at alpha = 1 is " << m_hi
           << " < 1";
        throw SolverError(os.str());
    }

    double alpha = hi;
    ScalarField psi = psi_hi;
    double mass = m_hi;
    bool converged = std::abs(mass - 1.0) <= opts.mass_tol;
    int outer = 1;
    for (; outer < opts.max_outer && !converged; ++outer) {
        double cand;
        if (m_hi != huge_mass && m_hi > m_lo) {
            cand = hi - (m_hi - 1.0) * (hi - lo) / (m_hi - m_lo);
            if (!(cand > lo + 1e-15 && cand < hi - 1e-15)) cand = 0.5 * (lo + hi);
        } else {
            cand = 0.5 * (lo + hi);
        }
        ScalarField cand_psi;
        const double m = mass_at(cand, &cand_psi);
        if (std::abs(m - 1.0) <= opts.mass_tol) {
            alpha = cand;
            psi = std::move(cand_psi);
            mass = m;
            converged = true;
            break;
        }
        if (m < 1.0) {
            lo = cand;
            m_lo = m;
        } else {
            hi = cand;
            m_hi = m;
            if (m != huge_mass) {
                alpha = cand;
                psi = std::move(cand_psi);
                mass = m;
            }
        }
        if (hi - lo < 1e-14) break;
        // the minimal branch tops out clearly below unit mass: the fold gap
        // cannot close, stop refining
        if (hi - lo < 1e-4 && m_hi == huge_mass && m_lo < 1.0 - 1e-4) break;
    }

    const bool clear_fold_gap =
        !converged && div_min < std::numeric_limits<double>::max() && m_lo < 1.0 - 1e-4;
    if (!converged && !clear_fold_gap) {
        // Full-scan fallback over alpha in [0,1]: 33 samples, then a local
        // bisection on the first unit-mass crossing.
        double plo = -1, phi = -1, pm_lo = 0, pm_hi = 0;
        for (int k = 0; k <= 32; ++k) {
            const double a = k / 32.0;
            if (a <= 0) continue;
            const double m = mass_at(a, nullptr);
            if (m >= 1.0) {
                phi = a;
                pm_hi = m;
                break;
            }
            plo = a;
            pm_lo = m;
        }
        if (phi > 0 && plo > 0) {
            double blo = plo, bhi = phi, bm_lo = pm_lo, bm_hi = pm_hi;
            for (int it = 0; it < 120 && !converged; ++it) {
                double cand = (bm_hi != huge_mass && bm_hi > bm_lo)
                                  ? bhi - (bm_hi - 1.0) * (bhi - blo) / (bm_hi - bm_lo)
                                  : 0.5 * (blo + bhi);
                if (!(cand > blo && cand < bhi)) cand = 0.5 * (blo + bhi);
                ScalarField cand_psi;
                const double m = mass_at(cand, &cand_psi);
                if (std::abs(m - 1.0) <= opts.mass_tol) {
                    alpha = cand;
                    psi = std::move(cand_psi);
                    converged = true;
                    break;
                }
                if (m < 1.0) {
                    blo = cand;
                    bm_lo = m;
                } else {
                    bhi = cand;
                    bm_hi = m;
                }
                if (bhi - blo < 1e-15) break;
            }
        }
    }

    if (!converged) {
        std::ostringstream os;
        os << "no solution with alpha >= 0 on this branch (mass stays away from 1; "
           << "bracket collapsed at alpha ~ " << hi << " with lambda=" << lambda
           << " p=" << p << ")";
        throw NoSolutionOnBranch(os.str());
    }

    sol = finalize(g, lambda, p, alpha, std::move(psi));
    sol.outer_iterations = outer;
    sol.inner_iterations = inner_total;
    std::sort(samples.begin(), samples.end());
    sol.mass_monotone = true;
    for (size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].second != huge_mass && samples[i - 1].second != huge_mass &&
            samples[i].second < samples[i - 1].second - 1e-10)
            sol.mass_monotone = false;
    }
    sol.outer_samples = std::move(samples);
    return sol;
}

double FreeBoundarySolution::current_from_source() const {
    ScalarField src(v.domain);
    for (int k = 0; k < v.size(); ++k)
        src.v[k] = (v.v[k] > 0) ? std::pow(v.v[k], p) : 0.0;
    return integrate_domain(src);
}

FreeBoundarySolution to_free_boundary(const PlasmaSolution& sol) {
    if (sol.p <= 1)
        throw SolverError("duality map requires p > 1 (p = 1 uses a different formulation)");
    if (sol.lambda <= 0) throw SolverError("duality map requires lambda > 0");
    const double q = sol.p / (sol.p - 1.0);
    const double scale = std::pow(sol.lambda, 1.0 / (sol.p - 1.0));

    FreeBoundarySolution fb;
    fb.p = sol.p;
    fb.I = std::pow(sol.lambda, q);
    fb.gamma = scale * sol.alpha;
    fb.v = ScalarField(sol.psi.domain);
    for (int k = 0; k < sol.psi.size(); ++k)
        fb.v.v[k] = scale * (sol.alpha + sol.lambda * sol.psi.v[k]);
    return fb;
}

PlasmaSolution from_free_boundary(const GreenOperator& g, const FreeBoundarySolution& fb) {
    if (fb.gamma < 0)
        throw SolverError("inverse duality map covers the gamma >= 0 branch only");
    if (fb.p <= 1) throw SolverError("duality map requires p > 1");
    if (fb.I <= 0) throw SolverError("current I must be positive");
    const double q = fb.p / (fb.p - 1.0);
    const double lambda = std::pow(fb.I, 1.0 / q);
    const double alpha = std::pow(fb.I, -1.0 / fb.p) * fb.gamma;

    ScalarField psi(fb.v.domain);
    for (int k = 0; k < fb.v.size(); ++k) psi.v[k] = (fb.v.v[k] - fb.gamma) / fb.I;
    return finalize(g, lambda, fb.p, alpha, std::move(psi));
}

AlphaZeroResult solve_alpha_zero(const GreenOperator& g, double p, double tol,
                                 int max_iter) {
    if (p < 1) throw SolverError("p must be at least 1");
    AlphaZeroResult out;

    // Sup-normalized inverse iteration u <- G[u^p] converges to the positive
    // ground-state shape for this subcritical problem.
    ScalarField w = g.psi0();
    double winf = w.max();
    for (double& x : w.v) x /= winf;

    double gain = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        ScalarField src(w.domain);
        for (int k = 0; k < w.size(); ++k)
            src.v[k] = (w.v[k] > 0) ? std::pow(w.v[k], p) : 0.0;
        ScalarField z = g.solve(src);
        gain = z.max();
        double diff = 0;
        for (int k = 0; k < w.size(); ++k) {
            const double nz = z.v[k] / gain;
            diff = std::max(diff, std::abs(nz - w.v[k]));
            w.v[k] = nz;
        }
        if (diff <= tol) break;
    }
    if (it >= max_iter)
        throw SolverError("ground-state iteration stagnated before reaching tolerance");
    out.iterations = it + 1;

    double lambda = 0;
    ScalarField u(w.domain);
    if (p == 1.0) {
        // principal eigenpair: -Lap w = (1/gain) w; scale to unit mass
        lambda = 1.0 / gain;
        const double s = 1.0 / integrate_domain(w);
        for (int k = 0; k < w.size(); ++k) u.v[k] = s * w.v[k];
    } else {
        // rescale the shape to -Lap what = what^p, then u = s * what with
        // unit mass fixing s and lambda = s^{1-p}
        const double a = std::pow(gain, -1.0 / (p - 1.0));
        ScalarField what(w.domain);
        ScalarField whatp(w.domain);
        for (int k = 0; k < w.size(); ++k) {
            what.v[k] = a * w.v[k];
            whatp.v[k] = std::pow(std::max(what.v[k], 0.0), p);
        }
        const double mass_hat = integrate_domain(whatp);
        const double s = std::pow(mass_hat, -1.0 / p);
        lambda = std::pow(s, 1.0 - p);
        for (int k = 0; k < w.size(); ++k) u.v[k] = s * what.v[k];
    }

    ScalarField psi(u.domain);
    for (int k = 0; k < u.size(); ++k) psi.v[k] = u.v[k] / lambda;
    out.lambda = lambda;
    out.sol = [&] {
        PlasmaSolution s;
        s.lambda = lambda;
        s.p = p;
        s.alpha = 0.0;
        const ScalarField f = [&] {
            ScalarField ff(psi.domain);
            for (int k = 0; k < psi.size(); ++k)
                ff.v[k] = std::pow(std::max(lambda * psi.v[k], 0.0), p);
            return ff;
        }();
        s.theta = lambda * psi.max();
        s.energy = dirichlet_energy(psi, f);
        s.mass_residual = std::abs(integrate_domain(f) - 1.0);
        s.pde_residual = g.residual(psi, f);
        s.psi = std::move(psi);
        return s;
    }();
    return out;
}

}  // namespace plasma
