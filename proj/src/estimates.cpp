#include "plasma/estimates.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace plasma {

namespace {

constexpr double kAlphaZeroTol = 1e-6;

double scale_of(double lhs, double rhs) {
    return std::max({std::abs(lhs), std::abs(rhs), 1e-6});
}

EstimateEntry inequality(const std::string& name, double lhs, double rhs,
                         double rel_slack, const std::string& note = "") {
    EstimateEntry e;
    e.name = name;
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.slack = rel_slack * scale_of(lhs, rhs);
    e.status = (e.margin >= -e.slack) ? EntryStatus::pass : EntryStatus::fail;
    e.note = note;
    return e;
}

EstimateEntry not_applicable(const std::string& name, const std::string& note) {
    EstimateEntry e;
    e.name = name;
    e.status = EntryStatus::not_applicable;
    e.note = note;
    return e;
}

}  // namespace

bool EstimateReport::pass() const {
    for (const auto& e : entries)
        if (e.status == EntryStatus::fail) return false;
    return true;
}

int EstimateReport::count(EntryStatus s) const {
    int c = 0;
    for (const auto& e : entries) c += (e.status == s);
    return c;
}

SolutionPrimitives primitives(const PlasmaSolution& sol, double slack) {
    SolutionPrimitives s;
    s.lambda = sol.lambda;
    s.p = sol.p;
    s.alpha = sol.alpha;
    ScalarField f(sol.psi.domain);
    for (int k = 0; k < sol.psi.size(); ++k) {
        const double base = sol.alpha + sol.lambda * sol.psi.v[k];
        f.v[k] = (base > 0) ? std::pow(base, sol.p) : 0.0;
    }
    s.energy = dirichlet_energy(sol.psi, f);
    s.psi_max = sol.psi.max();
    s.theta = sol.lambda * s.psi_max;
    s.mass = integrate_domain(f);
    s.slack = slack;
    return s;
}

SolutionPrimitives primitives(const RadialSolution& sol, double slack) {
    SolutionPrimitives s;
    s.lambda = sol.lambda;
    s.p = sol.p;
    s.alpha = sol.alpha;
    // trapezoid on the stored trajectory, independent of the solver's own
    // cumulative integrals at leading order
    double grad2 = 0, mass = 0;
    for (size_t k = 1; k < sol.r.size(); ++k) {
        const double dr = sol.r[k] - sol.r[k - 1];
        const double g1 = sol.dpsi[k - 1] * sol.dpsi[k - 1] * sol.r[k - 1];
        const double g2 = sol.dpsi[k] * sol.dpsi[k] * sol.r[k];
        grad2 += M_PI * (g1 + g2) * dr;
        auto f = [&](size_t i) {
            const double base = sol.alpha + sol.lambda * sol.psi[i];
            return (base > 0) ? std::pow(base, sol.p) : 0.0;
        };
        mass += M_PI * (f(k - 1) * sol.r[k - 1] + f(k) * sol.r[k]) * dr;
    }
    mass += M_PI * sol.r.front() * sol.r.front() *
            std::pow(std::max(sol.alpha + sol.lambda * sol.psi_peak, 0.0), sol.p);
    s.energy = 0.5 * grad2;
    s.psi_max = sol.psi_peak;
    s.theta = sol.lambda * sol.psi_peak;
    s.mass = mass;
    s.slack = slack;
    return s;
}

double ktilde(double p) { return std::pow(std::tgamma(p + 2.0), 1.0 / (p + 1.0)); }

double g_lower_bound(double p) {
    const double e = std::exp(1.0);
    if (p < 4.0) return 16.0 * M_PI / (e * (p + 1.0));
    if (p < 16.0) return 16.0 * M_PI / (e * p);
    if (p < 24.0) return 16.0 * M_PI / (e * p) * (p + 1.0) / p;
    if (p < 48.0) return 24.0 * M_PI / (e * (p + 1.0));
    return 24.0 * M_PI / (e * p) * 1.5;
}

void check_energy_theorem(const SolutionPrimitives& s, EstimateReport& rep) {
    const double cap = (s.p + 1.0) / (16.0 * M_PI);
    rep.entries.push_back(inequality("energy_identity",
                                     s.alpha * (1.0 - std::pow(s.alpha, s.p)),
                                     2.0 * s.lambda * (cap - s.energy), s.slack,
                                     "equality exactly on the disk"));
    rep.entries.push_back(inequality("energy_cap", s.energy, cap, s.slack));
}

void check_linf_bounds(const SolutionPrimitives& s, const Domain& dom,
                       EstimateReport& rep) {
    const double kt = ktilde(s.p);
    const double rhs1 = kt / (4.0 * M_PI) *
                        std::pow(s.alpha + 2.0 * s.lambda * s.energy, s.p / (s.p + 1.0));
    rep.entries.push_back(inequality("linf_green", s.psi_max, rhs1, s.slack));

    const double rhs2 =
        (s.p + 1.0) / (4.0 * M_PI) * (1.0 + s.lambda * s.p / (8.0 * M_PI));
    rep.entries.push_back(inequality("linf_universal", s.psi_max, rhs2, s.slack));

    if (s.lambda < 2.0 * M_PI / s.p) {
        const double rhs3 = s.lambda * dom.ell() / (2.0 * M_PI - s.lambda * s.p);
        rep.entries.push_back(inequality("theta_ell", s.theta, rhs3, s.slack));
    } else {
        rep.entries.push_back(
            not_applicable("theta_ell", "hypothesis lambda < 2 pi / p fails"));
    }
}

void check_thresholds(const SolutionPrimitives& s, const Domain& dom,
                      EstimateReport& rep) {
    const double e = std::exp(1.0);
    const double q_inv = 1.0 - 1.0 / s.p;  // 1/q, zero for p = 1

    if (s.lambda <= 4.0 * M_PI / (e * s.p)) {
        rep.entries.push_back(inequality("alpha_half", 0.5, s.alpha, s.slack));
    } else {
        rep.entries.push_back(
            not_applicable("alpha_half", "hypothesis lambda <= 4 pi/(e p) fails"));
    }

    if (s.lambda <= 4.0 * M_PI / (e * s.p * dom.ell())) {
        rep.entries.push_back(
            inequality("alpha_oneq", std::max(0.5, q_inv), s.alpha, s.slack));
    } else {
        rep.entries.push_back(not_applicable(
            "alpha_oneq", "hypothesis lambda <= 4 pi/(e p ell) fails"));
    }

    if (s.alpha <= kAlphaZeroTol) {
        rep.entries.push_back(inequality(
            "alpha_zero_floor", 16.0 * M_PI / (e * (s.p + 1.0)), s.lambda, s.slack));
        rep.entries.push_back(
            inequality("alpha_zero_g", g_lower_bound(s.p), s.lambda, s.slack));
    } else {
        rep.entries.push_back(not_applicable("alpha_zero_floor", "alpha > 0"));
        rep.entries.push_back(not_applicable("alpha_zero_g", "alpha > 0"));
    }
}

void check_corollary_current(const FreeBoundarySolution& fb, double lambda_star_val,
                             bool is_disk, double slack, EstimateReport& rep) {
    if (fb.gamma > kAlphaZeroTol) {
        rep.entries.push_back(
            not_applicable("corollary_current", "gamma > 0: hypothesis fails"));
        return;
    }
    const double q = fb.p / (fb.p - 1.0);
    const double rhs = fb.I;
    const double lhs = std::pow(lambda_star_val, q);
    EstimateEntry e = inequality("corollary_current", lhs, rhs, slack,
                                 is_disk ? "near-equality expected on the disk" : "");
    if (is_disk && e.status == EntryStatus::pass && std::abs(e.margin) > e.slack)
        e.note = "disk equality case missed (margin " + std::to_string(e.margin) + ")";
    rep.entries.push_back(e);
}

void check_positivity_theorem(const SolutionPrimitives& s, double lambda_star_val,
                              bool is_disk, EstimateReport& rep) {
    if (s.lambda > lambda_star_val + 1e-9 * std::max(1.0, lambda_star_val)) {
        rep.entries.push_back(
            not_applicable("positivity", "lambda beyond lambda_*: no claim"));
        return;
    }
    const double eq_tol = 1e-3 * std::max(1.0, lambda_star_val);
    const bool equality_case = ((s.p == 1.0) || is_disk) &&
                               std::abs(s.lambda - lambda_star_val) <= eq_tol;
    if (equality_case) {
        EstimateEntry e;
        e.name = "positivity";
        e.lhs = std::abs(s.alpha);
        e.rhs = 0.0;
        e.margin = -e.lhs;
        e.slack = std::max(1e-3, s.slack);
        e.status = (e.lhs <= e.slack) ? EntryStatus::pass : EntryStatus::fail;
        e.note = "equality case: alpha ~ 0 expected";
        rep.entries.push_back(e);
    } else {
        rep.entries.push_back(inequality("positivity", 0.0, s.alpha, s.slack,
                                         "alpha > 0 below lambda_*"));
    }
}

std::string render_text_table(const EstimateReport& rep) {
    std::ostringstream os;
    os << "domain=" << rep.domain_tag << " solver=" << rep.solver_kind
       << " lambda=" << rep.lambda << " p=" << rep.p << " n=" << rep.n << "\n";
    os << std::left << std::setw(22) << "entry" << std::right << std::setw(15) << "lhs"
       << std::setw(15) << "rhs" << std::setw(15) << "margin" << std::setw(12)
       << "slack" << "  status\n";
    for (const auto& e : rep.entries) {
        os << std::left << std::setw(22) << e.name << std::right << std::setw(15)
           << std::setprecision(6) << e.lhs << std::setw(15) << e.rhs << std::setw(15)
           << e.margin << std::setw(12) << e.slack << "  ";
        switch (e.status) {
            case EntryStatus::pass: os << "pass"; break;
            case EntryStatus::fail: os << "FAIL"; break;
            case EntryStatus::not_applicable: os << "n/a"; break;
        }
        if (!e.note.empty()) os << "  (" << e.note << ")";
        os << "\n";
    }
    return os.str();
}

}  // namespace plasma
