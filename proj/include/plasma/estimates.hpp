#ifndef PLASMA_ESTIMATES_HPP
#define PLASMA_ESTIMATES_HPP

#include <string>
#include <vector>

#include "plasma/levelset.hpp"
#include "plasma/solver.hpp"

namespace plasma {

enum class EntryStatus { pass, fail, not_applicable };

/// One inequality of the ledger, oriented so that margin = rhs - lhs >= 0
/// means pass; near_equality entries additionally demand |margin| small.
struct EstimateEntry {
    std::string name;
    double lhs = 0, rhs = 0;
    double margin = 0;
    double slack = 0;  // absolute slack actually used
    EntryStatus status = EntryStatus::not_applicable;
    std::string note;
};

struct EstimateReport {
    std::string domain_tag;
    std::string solver_kind;  // "grid" | "radial"
    double lambda = 0, p = 1;
    int n = 0;
    std::vector<EstimateEntry> entries;

    bool pass() const;
    int count(EntryStatus s) const;
};

/// Primitive quantities every check consumes, recomputed here from the raw
/// solution data so a disagreement between modules surfaces as a failure.
struct SolutionPrimitives {
    double lambda = 0, p = 1, alpha = 0;
    double energy = 0;    // recomputed
    double theta = 0;     // recomputed
    double psi_max = 0;   // recomputed
    double mass = 0;      // recomputed
    double slack = 1e-2;  // relative slack class: 1e-2 grid, 1e-4 radial
};

SolutionPrimitives primitives(const PlasmaSolution& sol, double slack = 1e-2);
SolutionPrimitives primitives(const RadialSolution& sol, double slack = 1e-4);

/// Gamma(p+2)^{1/(p+1)}, the disk-extremal Green constant.
double ktilde(double p);

/// Piecewise floor of the increasing threshold function g: alpha = 0 forces
/// lambda > g(p).
double g_lower_bound(double p);

/// Sharp energy identity and the energy cap (two entries).
void check_energy_theorem(const SolutionPrimitives& s, EstimateReport& rep);

/// Green-constant sup bound, universal sup bound, and the theta bound by
/// ell(Omega) when lambda < 2 pi / p (three entries).
void check_linf_bounds(const SolutionPrimitives& s, const Domain& dom,
                       EstimateReport& rep);

/// Conditional 1/2- and 1/q-threshold entries plus the alpha = 0 necessary
/// conditions (four entries, hypotheses reported as not-applicable).
void check_thresholds(const SolutionPrimitives& s, const Domain& dom,
                      EstimateReport& rep);

/// Current lower bound for gamma ~ 0 free boundary solutions, near-equality
/// flagged on the disk.
void check_corollary_current(const FreeBoundarySolution& fb, double lambda_star_val,
                             bool is_disk, double slack, EstimateReport& rep);

/// alpha > 0 under lambda <= lambda_*, with the stated equality cases.
void check_positivity_theorem(const SolutionPrimitives& s, double lambda_star_val,
                              bool is_disk, EstimateReport& rep);

std::string render_text_table(const EstimateReport& rep);

}  // namespace plasma

#endif
