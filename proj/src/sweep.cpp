#include "plasma/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "plasma/io.hpp"
#include "plasma/sobolev.hpp"
#include "plasma/variational.hpp"

namespace plasma {

namespace {

struct Cell {
    int domain_idx;
    double p, lambda;
};

struct CellOutcome {
    std::vector<EstimateReport> reports;
    std::string error;
};

// Per-domain state shared by every cell; immutable while workers run.
struct DomainContext {
    DomainPtr domain;
    std::unique_ptr<GreenOperator> green;
    std::map<double, double> lambda_star_by_p;
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_entry_rows(std::ostringstream& os, const EstimateReport& rep) {
    for (const auto& e : rep.entries) {
        os << csv_escape(rep.domain_tag) << ',' << format_number(rep.p) << ','
           << format_number(rep.lambda) << ',' << rep.n << ',' << rep.solver_kind << ','
           << csv_escape(e.name) << ',' << format_number(e.lhs) << ','
           << format_number(e.rhs) << ',' << format_number(e.margin) << ','
           << format_number(e.slack) << ','
           << (e.status == EntryStatus::pass
                   ? "pass"
                   : e.status == EntryStatus::fail ? "fail" : "n/a")
           << "\r\n";
    }
}

void run_checks_on(const SolutionPrimitives& prim, const Domain& dom,
                   const SweepConfig& cfg, double lambda_star_val,
                   double lambda_star_disk, EstimateReport& rep) {
    if (cfg.checks.count("energy")) check_energy_theorem(prim, rep);
    if (cfg.checks.count("linf")) check_linf_bounds(prim, dom, rep);
    if (cfg.checks.count("thresholds")) check_thresholds(prim, dom, rep);
    if (cfg.checks.count("sobolev")) {
        EstimateEntry e;
        e.name = "lambda_star_ordering";
        e.lhs = lambda_star_disk;
        e.rhs = lambda_star_val;
        e.margin = e.rhs - e.lhs;
        e.slack = cfg.slack_grid * std::max(1.0, std::abs(e.rhs));
        e.status = (e.margin >= -e.slack) ? EntryStatus::pass : EntryStatus::fail;
        e.note = "lambda_*(Omega) >= lambda_*(D)";
        rep.entries.push_back(e);
        check_positivity_theorem(prim, lambda_star_val, dom.is_disk(), rep);
    }
}

void add_levelset_entries(const LevelSetProfile& prof, double slack_abs, bool with_em,
                          EstimateReport& rep) {
    const double worst = check_integrated_inequality(prof);
    EstimateEntry e;
    e.name = "levelset_integrated";
    e.lhs = worst;
    e.rhs = 0.0;
    e.margin = -worst;
    e.slack = slack_abs;
    e.status = (worst <= e.slack) ? EntryStatus::pass : EntryStatus::fail;
    rep.entries.push_back(e);

    if (with_em) {
        const EmConsistency em = em_consistency(prof);
        EstimateEntry e2;
        e2.name = "levelset_em_consistency";
        e2.lhs = std::max(em.worst_bin, em.total);
        e2.rhs = 0.05;
        e2.margin = e2.rhs - e2.lhs;
        e2.slack = 0;
        e2.status = (e2.margin >= 0) ? EntryStatus::pass : EntryStatus::fail;
        rep.entries.push_back(e2);
    }
}

CellOutcome run_cell(const Cell& cell, const DomainContext& ctx, double lambda_star_disk,
                     const SweepConfig& cfg) {
    CellOutcome out;
    const Domain& dom = *ctx.domain;
    const GreenOperator& g = *ctx.green;
    const double lambda_star_val =
        ctx.lambda_star_by_p.empty() ? 0.0 : ctx.lambda_star_by_p.at(cell.p);

    try {
        PlasmaSolution sol = solve_plm(g, cell.lambda, cell.p);

        EstimateReport rep;
        rep.domain_tag = dom.tag();
        rep.solver_kind = "grid";
        rep.lambda = cell.lambda;
        rep.p = cell.p;
        rep.n = dom.resolution();
        SolutionPrimitives prim = primitives(sol, cfg.slack_grid);
        run_checks_on(prim, dom, cfg, lambda_star_val, lambda_star_disk, rep);

        if (cfg.checks.count("levelset") && cell.lambda > 0) {
            LevelSetProfile prof = profile(g, sol, cfg.levelset_levels);
            const double slack_abs =
                cfg.slack_grid *
                std::max(1.0, cell.lambda * cell.lambda / (8.0 * M_PI));
            add_levelset_entries(prof, slack_abs, true, rep);
        }

        if (cfg.checks.count("duality")) {
            if (cell.p > 1 && cell.lambda > 0) {
                FreeBoundarySolution fb = to_free_boundary(sol);
                PlasmaSolution back = from_free_boundary(g, fb);
                double ident = 0;
                const double ip = std::pow(fb.I, -1.0 / cell.p);
                for (int k = 0; k < sol.psi.size(); ++k) {
                    const double lhs = ip * fb.v.v[k];
                    const double rhs = sol.alpha + cell.lambda * sol.psi.v[k];
                    ident = std::max(ident, std::abs(lhs - rhs));
                }
                ident = std::max(ident, std::abs(back.alpha - sol.alpha));
                ident = std::max(ident, dist_inf(back.psi, sol.psi));
                EstimateEntry e;
                e.name = "duality_roundtrip";
                e.lhs = ident;
                e.rhs = 1e-10;
                e.margin = e.rhs - e.lhs;
                e.slack = 0;
                e.status = (ident <= 1e-10) ? EntryStatus::pass : EntryStatus::fail;
                rep.entries.push_back(e);

                EstimateEntry ec;
                ec.name = "duality_current";
                ec.lhs = std::abs(fb.current_from_source() - fb.I);
                ec.rhs = 1e-4 * std::max(1.0, fb.I);
                ec.margin = ec.rhs - ec.lhs;
                ec.slack = 0;
                ec.status = (ec.margin >= 0) ? EntryStatus::pass : EntryStatus::fail;
                rep.entries.push_back(ec);
            } else {
                EstimateEntry e;
                e.name = "duality_roundtrip";
                e.status = EntryStatus::not_applicable;
                e.note = "duality map needs p > 1 and lambda > 0";
                rep.entries.push_back(e);
            }
        }

        if (cfg.checks.count("variational")) {
            VariationalResult vr = minimize_J(g, cell.lambda, cell.p);
            EstimateEntry e;
            e.name = "variational_alpha_match";
            e.lhs = std::abs(vr.alpha - sol.alpha);
            e.rhs = 1e-3;
            e.margin = e.rhs - e.lhs;
            e.slack = 0;
            e.status = (e.margin >= 0) ? EntryStatus::pass : EntryStatus::fail;
            rep.entries.push_back(e);

            double rho_dev = 0;
            for (int k = 0; k < sol.psi.size(); ++k) {
                const double base = sol.alpha + cell.lambda * sol.psi.v[k];
                const double f = (base > 0) ? std::pow(base, cell.p) : 0.0;
                rho_dev = std::max(rho_dev, std::abs(vr.rho.rho.v[k] - f));
            }
            EstimateEntry e2;
            e2.name = "variational_density_match";
            e2.lhs = rho_dev;
            e2.rhs = 1e-3;
            e2.margin = e2.rhs - e2.lhs;
            e2.slack = 0;
            e2.status = (e2.margin >= 0) ? EntryStatus::pass : EntryStatus::fail;
            rep.entries.push_back(e2);
        }

        out.reports.push_back(std::move(rep));

        if (dom.is_disk()) {
            RadialSolution rad = solve_disk_radial(cell.lambda, cell.p);
            EstimateReport rrep;
            rrep.domain_tag = dom.tag();
            rrep.solver_kind = "radial";
            rrep.lambda = cell.lambda;
            rrep.p = cell.p;
            rrep.n = dom.resolution();
            SolutionPrimitives rprim = primitives(rad, cfg.slack_oracle);
            run_checks_on(rprim, dom, cfg, lambda_star_val, lambda_star_disk, rrep);
            if (cfg.checks.count("levelset") && cell.lambda > 0) {
                LevelSetProfile prof = profile(rad, cfg.levelset_levels);
                add_levelset_entries(prof, 1e-3, false, rrep);
            }
            out.reports.push_back(std::move(rrep));
        }
    } catch (const std::exception& ex) {
        out.error = ex.what();
    }
    return out;
}

std::string cell_file_name(const EstimateReport& rep) {
    std::ostringstream os;
    os << "cell_" << rep.domain_tag << "_p" << format_number(rep.p) << "_lam"
       << format_number(rep.lambda) << "_" << rep.solver_kind << ".json";
    return os.str();
}

}  // namespace

const std::set<std::string>& SweepConfig::known_checks() {
    static const std::set<std::string> k = {"energy",   "linf",    "thresholds",
                                            "levelset", "sobolev", "variational",
                                            "duality"};
    return k;
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    SweepConfig cfg;
    try {
        for (const auto& d : j.at("domains"))
            cfg.domains.push_back(DomainSpec::from_json_text(d.dump()));
        for (const auto& p : j.at("p")) cfg.p_values.push_back(p.get<double>());

        const auto& lam = j.at("lambda");
        if (lam.is_array()) {
            for (const auto& v : lam) cfg.lambdas.push_back(v.get<double>());
        } else if (lam.is_object()) {
            const double lo = lam.at("min").get<double>();
            const double hi = lam.at("max").get<double>();
            const int count = lam.at("count").get<int>();
            const std::string spacing =
                lam.contains("spacing") ? lam.at("spacing").get<std::string>() : "linear";
            if (count < 1) throw ConfigError("lambda count must be positive");
            if (hi < lo) throw ConfigError("lambda range is empty");
            if (spacing == "linear") {
                for (int k = 0; k < count; ++k)
                    cfg.lambdas.push_back(count == 1 ? lo
                                                     : lo + (hi - lo) * k / (count - 1));
            } else if (spacing == "log") {
                if (lo <= 0) throw ConfigError("log spacing requires min > 0");
                for (int k = 0; k < count; ++k)
                    cfg.lambdas.push_back(
                        count == 1
                            ? lo
                            : lo * std::pow(hi / lo,
                                            static_cast<double>(k) / (count - 1)));
            } else {
                throw ConfigError("unknown lambda spacing '" + spacing + "'");
            }
        } else {
            throw ConfigError("lambda must be a list or a range object");
        }

        if (j.contains("n")) cfg.n = j.at("n").get<int>();
        if (j.contains("checks")) {
            for (const auto& c : j.at("checks")) cfg.checks.insert(c.get<std::string>());
        } else {
            cfg.checks = known_checks();
        }
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("levels")) cfg.levelset_levels = j.at("levels").get<int>();
        if (j.contains("slack")) {
            const auto& s = j.at("slack");
            if (s.contains("grid")) cfg.slack_grid = s.at("grid").get<double>();
            if (s.contains("oracle")) cfg.slack_oracle = s.at("oracle").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }

    cfg.validate();
    return cfg;
}

void SweepConfig::validate() const {
    if (domains.empty()) throw ConfigError("config needs at least one domain");
    if (p_values.empty()) throw ConfigError("config needs at least one p value");
    if (lambdas.empty()) throw ConfigError("config needs at least one lambda value");
    for (double p : p_values)
        if (p < 1) throw ConfigError("p values must be >= 1");
    for (double l : lambdas)
        if (l < 0) throw ConfigError("lambda values must be nonnegative");
    for (const auto& c : checks)
        if (!known_checks().count(c))
            throw ConfigError("unknown check group '" + c + "'");
    if (workers < 1) throw ConfigError("workers must be positive");
    if (levelset_levels < 2) throw ConfigError("levels must be at least 2");
    auto slack_ok = [](double s) { return s >= 1e-6 && s <= 1e-1; };
    if (!slack_ok(slack_grid) || !slack_ok(slack_oracle))
        throw ConfigError("slack overrides must lie in [1e-6, 1e-1]");
}

SweepSummary run_sweep(const SweepConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    fs::create_directories(fs::path(config.out_dir) / "cells");

    const bool need_sobolev = config.checks.count("sobolev") > 0;

    // Disk reference constants for the isoperimetric ordering.
    std::map<double, double> disk_lambda_star;
    if (need_sobolev) {
        GreenOperator disk_green(Domain::normalize(DomainSpec::disk(config.n)));
        for (double p : config.p_values)
            disk_lambda_star[p] = lambda_star(disk_green, p);
    }

    std::vector<DomainContext> contexts;
    contexts.reserve(config.domains.size());
    for (const auto& spec : config.domains) {
        DomainContext ctx;
        DomainSpec s = spec;
        s.n = config.n;
        ctx.domain = Domain::normalize(s);
        ctx.green = std::make_unique<GreenOperator>(ctx.domain);
        if (need_sobolev)
            for (double p : config.p_values)
                ctx.lambda_star_by_p[p] = lambda_star(*ctx.green, p);
        contexts.push_back(std::move(ctx));
    }

    // Cells sorted by (domain tag, p, lambda); output order never depends on
    // completion order.
    std::vector<Cell> cells;
    for (int d = 0; d < static_cast<int>(contexts.size()); ++d)
        for (double p : config.p_values)
            for (double l : config.lambdas) cells.push_back({d, p, l});
    std::stable_sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
        const std::string& ta = contexts[a.domain_idx].domain->tag();
        const std::string& tb = contexts[b.domain_idx].domain->tag();
        if (ta != tb) return ta < tb;
        if (a.p != b.p) return a.p < b.p;
        return a.lambda < b.lambda;
    });

    std::vector<CellOutcome> outcomes(cells.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            const double ls_disk = need_sobolev ? disk_lambda_star.at(c.p) : 0.0;
            outcomes[i] = run_cell(c, contexts[c.domain_idx], ls_disk, config);
        }
    };
    const int nw = std::max(1, std::min<int>(config.workers,
                                             static_cast<int>(cells.size())));
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepSummary sum;
    sum.cells = static_cast<int>(cells.size());
    std::ostringstream csv;
    csv << "domain,p,lambda,n,solver,name,lhs,rhs,margin,slack,status\r\n";
    for (size_t i = 0; i < cells.size(); ++i) {
        const CellOutcome& oc = outcomes[i];
        if (!oc.error.empty()) {
            sum.errors += 1;
            const Cell& c = cells[i];
            csv << csv_escape(contexts[c.domain_idx].domain->tag()) << ','
                << format_number(c.p) << ',' << format_number(c.lambda) << ','
                << config.n << ",grid,solver_error,0,0,0,0," << csv_escape(oc.error)
                << "\r\n";
            continue;
        }
        for (const auto& rep : oc.reports) {
            sum.pass += rep.count(EntryStatus::pass);
            sum.fail += rep.count(EntryStatus::fail);
            sum.not_applicable += rep.count(EntryStatus::not_applicable);
            append_entry_rows(csv, rep);
            write_file((fs::path(config.out_dir) / "cells" / cell_file_name(rep)).string(),
                       report_to_json(rep));
        }
    }
    write_file((fs::path(config.out_dir) / "sweep.csv").string(), csv.str());
    return sum;
}

std::string threshold_table_csv(const SweepConfig& config) {
    std::ostringstream csv;
    csv << "domain,p,lambda_star,lambda_star_star,ratio,disk_equality\r\n";

    for (const auto& spec : config.domains) {
        DomainSpec s = spec;
        s.n = config.n;
        DomainPtr dom = Domain::normalize(s);
        GreenOperator g(dom);
        for (double p : config.p_values) {
            const double ls = lambda_star(g, p);
            // bracket from the formula value, widened until the multiplier
            // flips sign
            double lo = 0.60 * ls;
            double hi = 1.08 * ls;
            double lss = 0;
            bool found = false;
            for (int tries = 0; tries < 6 && !found; ++tries) {
                try {
                    lss = positivity_threshold(g, p, lo, hi, 0.005 * ls);
                    found = true;
                } catch (const SolverError&) {
                    hi = lo + (hi - lo) * 1.6;
                }
            }
            if (!found)
                throw SolverError("thresholds: bisection bracket not found for " +
                                  dom->tag());
            const double ratio = lss / ls;
            const bool disk_eq = std::abs(ratio - 1.0) <= 0.02;
            csv << csv_escape(dom->tag()) << ',' << format_number(p) << ','
                << format_number(ls) << ',' << format_number(lss) << ','
                << format_number(ratio) << ',' << (disk_eq ? "true" : "false")
                << "\r\n";
        }
    }
    return csv.str();
}

void emit_threshold_table(const SweepConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    write_file((fs::path(config.out_dir) / "thresholds.csv").string(),
               threshold_table_csv(config));
}

}  // namespace plasma
