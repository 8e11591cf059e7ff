#include "plasma/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plasma {

namespace {

struct State {
    double psi, dpsi, mass, grad2;
};

struct Trajectory {
    double end_psi = 0;     // psi(R)
    double mass = 0;        // cum_mass(R)
    double grad2 = 0;       // cum_grad2(R)
    std::vector<double> r, psi, dpsi, cum_mass, cum_grad2;
};

double load(double alpha, double lambda, double p, double psi) {
    const double base = alpha + lambda * psi;
    return (base > 0) ? std::pow(base, p) : 0.0;
}

// Integrates the augmented radial system from a series start near r = 0.
// store = false skips trajectory recording (root-finding passes).
Trajectory integrate(double lambda, double p, double alpha, double peak, int steps,
                     bool store) {
    const double R = 1.0 / std::sqrt(M_PI);
    const double r0 = R * 1e-7;

    const double f0 = load(alpha, lambda, p, peak);
    const double base0 = alpha + lambda * peak;
    // psi = peak - f0 r^2/4 + a4 r^4 + O(r^6)
    const double a4 =
        (base0 > 0) ? p * lambda * std::pow(base0, 2.0 * p - 1.0) / 64.0 : 0.0;

    State s;
    s.psi = peak - 0.25 * f0 * r0 * r0 + a4 * r0 * r0 * r0 * r0;
    s.dpsi = -0.5 * f0 * r0 + 4.0 * a4 * r0 * r0 * r0;
    s.mass = M_PI * f0 * r0 * r0;
    s.grad2 = 0.125 * M_PI * f0 * f0 * r0 * r0 * r0 * r0;

    auto rhs = [&](double r, const State& y) {
        State d;
        const double f = load(alpha, lambda, p, y.psi);
        d.psi = y.dpsi;
        d.dpsi = -f - y.dpsi / r;
        d.mass = 2.0 * M_PI * f * r;
        d.grad2 = 2.0 * M_PI * y.dpsi * y.dpsi * r;
        return d;
    };

    Trajectory out;
    if (store) {
        out.r.reserve(steps + 1);
        out.psi.reserve(steps + 1);
        out.dpsi.reserve(steps + 1);
        out.cum_mass.reserve(steps + 1);
        out.cum_grad2.reserve(steps + 1);
        out.r.push_back(r0);
        out.psi.push_back(s.psi);
        out.dpsi.push_back(s.dpsi);
        out.cum_mass.push_back(s.mass);
        out.cum_grad2.push_back(s.grad2);
    }

    const double h = (R - r0) / steps;
    double r = r0;
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(r, s);
        State t;
        t.psi = s.psi + 0.5 * h * k1.psi;
        t.dpsi = s.dpsi + 0.5 * h * k1.dpsi;
        t.mass = s.mass + 0.5 * h * k1.mass;
        t.grad2 = s.grad2 + 0.5 * h * k1.grad2;
        const State k2 = rhs(r + 0.5 * h, t);
        t.psi = s.psi + 0.5 * h * k2.psi;
        t.dpsi = s.dpsi + 0.5 * h * k2.dpsi;
        t.mass = s.mass + 0.5 * h * k2.mass;
        t.grad2 = s.grad2 + 0.5 * h * k2.grad2;
        const State k3 = rhs(r + 0.5 * h, t);
        t.psi = s.psi + h * k3.psi;
        t.dpsi = s.dpsi + h * k3.dpsi;
        t.mass = s.mass + h * k3.mass;
        t.grad2 = s.grad2 + h * k3.grad2;
        const State k4 = rhs(r + h, t);
        s.psi += h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
        s.dpsi += h / 6.0 * (k1.dpsi + 2 * k2.dpsi + 2 * k3.dpsi + k4.dpsi);
        s.mass += h / 6.0 * (k1.mass + 2 * k2.mass + 2 * k3.mass + k4.mass);
        s.grad2 += h / 6.0 * (k1.grad2 + 2 * k2.grad2 + 2 * k3.grad2 + k4.grad2);
        r = r0 + (i + 1) * h;
        if (store) {
            out.r.push_back(r);
            out.psi.push_back(s.psi);
            out.dpsi.push_back(s.dpsi);
            out.cum_mass.push_back(s.mass);
            out.cum_grad2.push_back(s.grad2);
        }
    }
    out.end_psi = s.psi;
    out.mass = s.mass;
    out.grad2 = s.grad2;
    return out;
}

// Multiplier matching psi(R) = 0 at a fixed peak; psi(R) is strictly
// decreasing in alpha once the load is active.
double alpha_for_peak(double lambda, double p, double peak, const RadialOptions& opts) {
    auto shoot = [&](double a) { return integrate(lambda, p, a, peak, opts.steps, false).end_psi; };

    // With alpha below -lambda*peak the load vanishes and psi(R) = peak > 0.
    double lo = -lambda * peak - 1.0;
    double hi = 1.0;
    double slo = shoot(lo);
    if (slo <= 0) {
        std::ostringstream os;
        os << "radial shooting: no positive end value at alpha=" << lo
           << " (psi(R)=" << slo << ", peak=" << peak << ")";
        throw SolverError(os.str());
    }
    double shi = shoot(hi);
    int guard = 0;
    while (shi > 0) {
        hi *= 2.0;
        if (hi > opts.alpha_max || ++guard > 60) {
            std::ostringstream os;
            os << "radial shooting failed to bracket psi(R) = 0 in alpha for peak="
               << peak << " lambda=" << lambda << " p=" << p << " (psi(R) stays "
               << shi << " at alpha=" << hi << ")";
            throw SolverError(os.str());
        }
        shi = shoot(hi);
    }

    const double tol = opts.shoot_tol * std::max(1.0, peak);
    double a = 0.5 * (lo + hi), sa = 0;
    for (int it = 0; it < 200; ++it) {
        // secant proposal clamped into the bracket, bisection fallback
        double cand = hi - shi * (hi - lo) / (shi - slo);
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        a = cand;
        sa = shoot(a);
        if (std::abs(sa) <= tol || hi - lo < 1e-16 * std::max(1.0, std::abs(hi)))
            return a;
        if (sa > 0) {
            lo = a;
            slo = sa;
        } else {
            hi = a;
            shi = sa;
        }
    }
    return a;
}

}  // namespace

// Hermite interpolation on the uniform table; series below the first node.
double RadialSolution::psi_at(double rr) const {
    if (rr <= r.front()) {
        const double f0 = load(alpha, lambda, p, psi_peak);
        return psi_peak - 0.25 * f0 * rr * rr;
    }
    if (rr >= r.back()) return psi.back();
    const double h = r[1] - r[0];
    const size_t i = std::min(r.size() - 2, static_cast<size_t>((rr - r[0]) / h));
    const double t = (rr - r[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * psi[i] + h10 * h * dpsi[i] + h01 * psi[i + 1] + h11 * h * dpsi[i + 1];
}

double RadialSolution::dpsi_at(double rr) const {
    if (rr <= r.front()) {
        const double f0 = load(alpha, lambda, p, psi_peak);
        return -0.5 * f0 * rr;
    }
    if (rr >= r.back()) return dpsi.back();
    const double h = r[1] - r[0];
    const size_t i = std::min(r.size() - 2, static_cast<size_t>((rr - r[0]) / h));
    const double t = (rr - r[i]) / h;
    // derivative endpoints come from the ODE right-hand side
    auto ddpsi = [&](size_t k) {
        return -load(alpha, lambda, p, psi[k]) - dpsi[k] / r[k];
    };
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * dpsi[i] + h10 * h * ddpsi(i) + h01 * dpsi[i + 1] + h11 * h * ddpsi(i + 1);
}

namespace {
double hermite_cum(const std::vector<double>& r, const std::vector<double>& val,
                   const std::vector<double>& der, double rr) {
    if (rr <= r.front()) return val.front() * (rr * rr) / (r.front() * r.front());
    if (rr >= r.back()) return val.back();
    const double h = r[1] - r[0];
    const size_t i = std::min(r.size() - 2, static_cast<size_t>((rr - r[0]) / h));
    const double t = (rr - r[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * val[i] + h10 * h * der[i] + h01 * val[i + 1] + h11 * h * der[i + 1];
}
}  // namespace

double RadialSolution::cum_mass_at(double rr) const {
    std::vector<double> der(r.size());
    for (size_t k = 0; k < r.size(); ++k)
        der[k] = 2.0 * M_PI * load(alpha, lambda, p, psi[k]) * r[k];
    return hermite_cum(r, cum_mass, der, rr);
}

double RadialSolution::cum_grad2_at(double rr) const {
    std::vector<double> der(r.size());
    for (size_t k = 0; k < r.size(); ++k) der[k] = 2.0 * M_PI * dpsi[k] * dpsi[k] * r[k];
    return hermite_cum(r, cum_grad2, der, rr);
}

double RadialSolution::level_radius(double t) const {
    const double target = t / lambda;  // u = lambda psi
    if (target >= psi_peak) return 0.0;
    if (target <= 0) return R;
    size_t lo = 0, hi = r.size() - 1;  // psi decreasing in r
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        if (psi[mid] > target)
            lo = mid;
        else
            hi = mid;
    }
    double a = r[lo], b = r[hi];
    for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        if (psi_at(m) > target)
            a = m;
        else
            b = m;
        if (b - a < 1e-15) break;
    }
    return 0.5 * (a + b);
}

RadialSolution solve_disk_radial(double lambda, double p, RadialOptions opts) {
    if (lambda < 0) throw SolverError("lambda must be nonnegative");
    if (p < 1) throw SolverError("p must be at least 1");
    const double R = 1.0 / std::sqrt(M_PI);

    // Peak bound from the universal sup estimate, with headroom.
    const double peak_cap =
        1.10 * (p + 1.0) / (4.0 * M_PI) * (1.0 + lambda * p / (8.0 * M_PI)) + 1e-6;

    auto mass_of_peak = [&](double peak, double* alpha_out) {
        const double a = alpha_for_peak(lambda, p, peak, opts);
        if (alpha_out) *alpha_out = a;
        return integrate(lambda, p, a, peak, opts.steps, false).mass;
    };

    // Scan peaks for the unit-mass crossing; mass grows with the peak.
    const int K = 64;
    double c_lo = 0, m_lo = 0;
    double c_hi = -1, m_hi = 0;
    for (int k = 1; k <= K; ++k) {
        const double c = peak_cap * k / K;
        const double m = mass_of_peak(c, nullptr);
        if (m >= 1.0) {
            c_hi = c;
            m_hi = m;
            break;
        }
        c_lo = c;
        m_lo = m;
    }
    if (c_hi < 0) {
        std::ostringstream os;
        os << "radial solve: unit mass not reached below the peak bound " << peak_cap
           << " (last mass " << m_lo << ") at lambda=" << lambda << " p=" << p;
        throw SolverError(os.str());
    }

    double alpha = 0;
    double c = 0.5 * (c_lo + c_hi);
    for (int it = 0; it < 300; ++it) {
        double cand = (m_hi != m_lo)
                          ? c_hi - (m_hi - 1.0) * (c_hi - c_lo) / (m_hi - m_lo)
                          : 0.5 * (c_lo + c_hi);
        if (!(cand > c_lo && cand < c_hi)) cand = 0.5 * (c_lo + c_hi);
        c = cand;
        const double m = mass_of_peak(c, &alpha);
        if (std::abs(m - 1.0) <= opts.mass_tol) break;
        if (m < 1.0) {
            c_lo = c;
            m_lo = m;
        } else {
            c_hi = c;
            m_hi = m;
        }
        if (c_hi - c_lo < 1e-17) break;
    }

    if (alpha < -1e-9) {
        std::ostringstream os;
        os << "no solution with alpha >= 0 on this branch (radial multiplier "
           << alpha << " at lambda=" << lambda << " p=" << p << ")";
        throw NoSolutionOnBranch(os.str());
    }

    Trajectory tr = integrate(lambda, p, alpha, c, opts.steps, true);
    RadialSolution sol;
    sol.lambda = lambda;
    sol.p = p;
    sol.alpha = std::max(alpha, 0.0);
    sol.R = R;
    sol.psi_peak = c;
    sol.theta = lambda * c;
    sol.energy = 0.5 * tr.grad2;
    sol.mass_residual = std::abs(tr.mass - 1.0);
    sol.shoot_residual = std::abs(tr.end_psi);
    sol.ode_steps = opts.steps;
    sol.r = std::move(tr.r);
    sol.psi = std::move(tr.psi);
    sol.dpsi = std::move(tr.dpsi);
    sol.cum_mass = std::move(tr.cum_mass);
    sol.cum_grad2 = std::move(tr.cum_grad2);
    return sol;
}

double radial_alpha_zero_lambda(double p, double lo, double hi, double tol,
                                RadialOptions opts) {
    auto alpha_or_negative = [&](double lambda) {
        try {
            return solve_disk_radial(lambda, p, opts).alpha;
        } catch (const NoSolutionOnBranch&) {
            return -1.0;
        }
    };
    double alo = alpha_or_negative(lo);
    double ahi = alpha_or_negative(hi);
    if (alo <= 0 || ahi > 0)
        throw SolverError("radial_alpha_zero_lambda: bracket does not straddle alpha = 0");
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (alpha_or_negative(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace plasma
