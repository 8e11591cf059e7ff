#include "plasma/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace plasma {

std::string format_number(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string field_to_csv(const ScalarField& f) {
    const Grid& g = f.domain->grid();
    std::ostringstream os;
    os << "index,x,y,value\r\n";
    for (int k = 0; k < f.size(); ++k)
        os << k << ',' << format_number(g.x(k)) << ',' << format_number(g.y(k)) << ','
           << format_number(f.v[k]) << "\r\n";
    return os.str();
}

std::string solution_header_json(const PlasmaSolution& sol) {
    nlohmann::json j;
    j["lambda"] = sol.lambda;
    j["p"] = sol.p;
    j["alpha"] = sol.alpha;
    j["theta"] = sol.theta;
    j["energy"] = sol.energy;
    j["mass_residual"] = sol.mass_residual;
    j["pde_residual"] = sol.pde_residual;
    return j.dump(2);
}

std::string profile_to_csv(const LevelSetProfile& prof) {
    std::ostringstream os;
    os << "t,mu,m,e,residual\r\n";
    for (int k = 0; k < prof.levels(); ++k)
        os << format_number(prof.t[k]) << ',' << format_number(prof.mu[k]) << ','
           << format_number(prof.m[k]) << ',' << format_number(prof.e[k]) << ','
           << format_number(prof.residual[k]) << "\r\n";
    return os.str();
}

std::string report_to_json(const EstimateReport& rep) {
    nlohmann::json j;
    j["domain"] = rep.domain_tag;
    j["solver"] = rep.solver_kind;
    j["lambda"] = rep.lambda;
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["pass"] = rep.pass();
    auto arr = nlohmann::json::array();
    for (const auto& e : rep.entries) {
        nlohmann::json je;
        je["name"] = e.name;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["margin"] = e.margin;
        je["slack"] = e.slack;
        je["status"] = (e.status == EntryStatus::pass)
                           ? "pass"
                           : (e.status == EntryStatus::fail) ? "fail" : "n/a";
        if (!e.note.empty()) je["note"] = e.note;
        arr.push_back(je);
    }
    j["entries"] = arr;
    return j.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace plasma
