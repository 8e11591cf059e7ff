#ifndef PLASMA_IO_HPP
#define PLASMA_IO_HPP

#include <string>

#include "plasma/estimates.hpp"
#include "plasma/field.hpp"
#include "plasma/levelset.hpp"
#include "plasma/solver.hpp"

namespace plasma {

/// Locale-independent formatting with 12 significant digits ('.' decimal
/// separator, RFC-4180 fields).
std::string format_number(double x);

/// Field CSV: header "index,x,y,value", one row per interior node.
std::string field_to_csv(const ScalarField& f);

/// Solution header {lambda, p, alpha, theta, energy, mass_residual,
/// pde_residual}.
std::string solution_header_json(const PlasmaSolution& sol);

/// Level-set profile CSV: t, mu, m, e, residual.
std::string profile_to_csv(const LevelSetProfile& prof);

std::string report_to_json(const EstimateReport& rep);

void write_file(const std::string& path, const std::string& content);

}  // namespace plasma

#endif
