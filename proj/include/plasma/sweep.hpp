#ifndef PLASMA_SWEEP_HPP
#define PLASMA_SWEEP_HPP

#include <set>
#include <string>
#include <vector>

#include "plasma/estimates.hpp"
#include "plasma/geometry.hpp"

namespace plasma {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sweep request: domains x p x lambda cells, selected check groups, output
/// directory and slack overrides.
struct SweepConfig {
    std::vector<DomainSpec> domains;
    std::vector<double> p_values;
    std::vector<double> lambdas;
    int n = 128;
    std::set<std::string> checks;  // energy linf thresholds levelset sobolev
                                   // variational duality
    std::string out_dir = "out";
    int workers = 1;
    int levelset_levels = 200;
    double slack_grid = 1e-2;
    double slack_oracle = 1e-4;

    static SweepConfig from_json_text(const std::string& text);
    static const std::set<std::string>& known_checks();
    void validate() const;
};

struct SweepSummary {
    int cells = 0;
    int pass = 0, fail = 0, not_applicable = 0;
    int errors = 0;
};

/// Runs every cell (grid solve, plus the radial oracle on disk domains),
/// evaluates the selected check groups, writes per-cell JSON and a combined
/// CSV. Deterministic for a fixed config regardless of worker count.
SweepSummary run_sweep(const SweepConfig& config);

/// CSV rows (domain, p, lambda_star, lambda_star_star, ratio, disk_equality)
/// comparing the explicit threshold formula against the bisected variational
/// threshold.
std::string threshold_table_csv(const SweepConfig& config);
void emit_threshold_table(const SweepConfig& config);

}  // namespace plasma

#endif
