// Command-line entry point: single solves, parameter sweeps, threshold
// tables, Sobolev constants and level-set profiles.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plasma/io.hpp"
#include "plasma/sobolev.hpp"
#include "plasma/sweep.hpp"
#include "plasma/variational.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct ShapeFlags {
    std::string shape = "disk";
    double aspect = 1.0;
    std::string vertices;  // JSON [[x,y],...]
    std::string config;    // domain spec file
    int n = 128;

    plasma::DomainSpec resolve() const {
        if (!config.empty()) {
            plasma::DomainSpec s = plasma::DomainSpec::from_json_text(read_file(config));
            return s;
        }
        // round-trip the flags through the JSON schema
        nlohmann::json j;
        j["shape"] = shape;
        if (shape == "rectangle") j["aspect"] = aspect;
        if (shape == "polygon") j["vertices"] = nlohmann::json::parse(vertices);
        j["n"] = n;
        return plasma::DomainSpec::from_json_text(j.dump());
    }
};

void add_shape_flags(CLI::App* cmd, ShapeFlags& f) {
    cmd->add_option("--shape", f.shape, "disk | rectangle | polygon")
        ->check(CLI::IsMember({"disk", "rectangle", "polygon"}));
    cmd->add_option("--aspect", f.aspect, "rectangle aspect ratio");
    cmd->add_option("--vertices", f.vertices, "polygon vertices as JSON [[x,y],...]");
    cmd->add_option("--config", f.config, "domain spec JSON file");
    cmd->add_option("--n", f.n, "grid resolution (cells per unit length)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plasma free boundary solver and estimate verification harness"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve one (domain, p, lambda) cell");
    ShapeFlags solve_shape;
    double solve_p = 2.0, solve_lambda = 1.0;
    std::string solve_out;
    add_shape_flags(solve_cmd, solve_shape);
    solve_cmd->add_option("--p", solve_p, "exponent p >= 1");
    solve_cmd->add_option("--lambda", solve_lambda, "parameter lambda >= 0");
    solve_cmd->add_option("--out", solve_out, "directory for field CSV + header JSON");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep from a config file");
    std::string sweep_config, sweep_out;
    int sweep_n = 0, sweep_workers = 0;
    double sweep_slack = 0;
    sweep_cmd->add_option("--config", sweep_config, "sweep config JSON")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory override");
    sweep_cmd->add_option("--n", sweep_n, "grid resolution override");
    sweep_cmd->add_option("--workers", sweep_workers, "worker thread count");
    sweep_cmd->add_option("--slack", sweep_slack, "grid slack override");

    // thresholds
    auto* thr_cmd = app.add_subcommand(
        "thresholds", "lambda_* formula vs bisected lambda_** table");
    std::string thr_config, thr_out;
    int thr_n = 0;
    thr_cmd->add_option("--config", thr_config, "sweep config JSON (domains + p used)")
        ->required();
    thr_cmd->add_option("--out", thr_out, "output directory override");
    thr_cmd->add_option("--n", thr_n, "grid resolution override");

    // sobolev
    auto* sob_cmd = app.add_subcommand("sobolev", "best Sobolev constant of a domain");
    ShapeFlags sob_shape;
    double sob_s = 2.0;
    add_shape_flags(sob_cmd, sob_shape);
    sob_cmd->add_option("--s", sob_s, "embedding exponent s >= 2");

    // profile
    auto* prof_cmd =
        app.add_subcommand("profile", "level-set distribution CSV for one cell");
    ShapeFlags prof_shape;
    double prof_p = 2.0, prof_lambda = 1.0;
    int prof_levels = 200;
    std::string prof_out;
    add_shape_flags(prof_cmd, prof_shape);
    prof_cmd->add_option("--p", prof_p, "exponent p >= 1");
    prof_cmd->add_option("--lambda", prof_lambda, "parameter lambda > 0");
    prof_cmd->add_option("--levels", prof_levels, "number of levels");
    prof_cmd->add_option("--out", prof_out, "directory for the profile CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            plasma::DomainSpec spec = solve_shape.resolve();
            if (solve_shape.n > 0 && solve_shape.config.empty()) spec.n = solve_shape.n;
            auto dom = plasma::Domain::normalize(spec);
            plasma::GreenOperator g(dom);
            plasma::PlasmaSolution sol = plasma::solve_plm(g, solve_lambda, solve_p);
            std::cout << plasma::solution_header_json(sol) << "\n";
            if (!solve_out.empty()) {
                std::filesystem::create_directories(solve_out);
                plasma::write_file(solve_out + "/solution.json",
                                   plasma::solution_header_json(sol));
                plasma::write_file(solve_out + "/field.csv",
                                   plasma::field_to_csv(sol.psi));
            }
        } else if (*sweep_cmd) {
            plasma::SweepConfig cfg =
                plasma::SweepConfig::from_json_text(read_file(sweep_config));
            if (!sweep_out.empty()) cfg.out_dir = sweep_out;
            if (sweep_n > 0) cfg.n = sweep_n;
            if (sweep_workers > 0) cfg.workers = sweep_workers;
            if (sweep_slack > 0) cfg.slack_grid = sweep_slack;
            cfg.validate();
            plasma::SweepSummary sum = plasma::run_sweep(cfg);
            std::cout << "cells=" << sum.cells << " pass=" << sum.pass
                      << " fail=" << sum.fail << " n/a=" << sum.not_applicable
                      << " errors=" << sum.errors << "\n";
            if (sum.fail > 0 || sum.errors > 0) {
                std::cerr << "sweep had " << sum.fail << " failed entries and "
                          << sum.errors << " solver errors; see " << cfg.out_dir
                          << "/sweep.csv\n";
                return 1;
            }
        } else if (*thr_cmd) {
            plasma::SweepConfig cfg =
                plasma::SweepConfig::from_json_text(read_file(thr_config));
            if (!thr_out.empty()) cfg.out_dir = thr_out;
            if (thr_n > 0) cfg.n = thr_n;
            plasma::emit_threshold_table(cfg);
            std::cout << "wrote " << cfg.out_dir << "/thresholds.csv\n";
        } else if (*sob_cmd) {
            plasma::DomainSpec spec = sob_shape.resolve();
            if (sob_shape.n > 0 && sob_shape.config.empty()) spec.n = sob_shape.n;
            auto dom = plasma::Domain::normalize(spec);
            plasma::GreenOperator g(dom);
            plasma::SobolevResult r = plasma::best_constant(g, sob_s);
            nlohmann::json j;
            j["s"] = r.s;
            j["Lambda"] = r.Lambda;
            j["lambda_star"] =
                (sob_s >= 2.0)
                    ? plasma::lambda_star_from_constant(r.Lambda, sob_s - 1.0)
                    : 0.0;
            j["iterations"] = r.iterations;
            j["residual"] = r.residual;
            std::cout << j.dump(2) << "\n";
        } else if (*prof_cmd) {
            plasma::DomainSpec spec = prof_shape.resolve();
            if (prof_shape.n > 0 && prof_shape.config.empty()) spec.n = prof_shape.n;
            auto dom = plasma::Domain::normalize(spec);
            plasma::GreenOperator g(dom);
            plasma::PlasmaSolution sol = plasma::solve_plm(g, prof_lambda, prof_p);
            plasma::LevelSetProfile prof = plasma::profile(g, sol, prof_levels);
            const std::string csv = plasma::profile_to_csv(prof);
            if (!prof_out.empty()) {
                std::filesystem::create_directories(prof_out);
                plasma::write_file(prof_out + "/profile.csv", csv);
                std::cout << "wrote " << prof_out << "/profile.csv\n";
            } else {
                std::cout << csv;
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
