#include "eqlayer/field.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "eqlayer/errors.hpp"
#include "eqlayer/norms.hpp"

namespace eqlayer {

void Field::check() const {
    if (values.rows() != grid.ny + 1 || values.cols() != grid.nz + 1)
        throw ContractViolation("field shape does not match its grid");
    if (!values.allFinite()) throw ContractViolation("field has non-finite entries");
}

void StatePair::check() const {
    v.check();
    psi.check();
    require_same_grid(v.grid, psi.grid, "state pair");
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_as(b)) throw ContractViolation(std::string(what) + ": grids differ");
}

StatePair operator+(const StatePair& a, const StatePair& b) {
    require_same_grid(a.grid(), b.grid(), "operator+");
    StatePair out = a;
    out.v.values += b.v.values;
    out.psi.values += b.psi.values;
    return out;
}

StatePair operator-(const StatePair& a, const StatePair& b) {
    require_same_grid(a.grid(), b.grid(), "operator-");
    StatePair out = a;
    out.v.values -= b.v.values;
    out.psi.values -= b.psi.values;
    return out;
}

StatePair operator*(double c, const StatePair& a) {
    StatePair out = a;
    out.v.values *= c;
    out.psi.values *= c;
    return out;
}

double relative_l2(const StatePair& a, const StatePair& b) {
    require_same_grid(a.grid(), b.grid(), "relative_l2");
    const StatePair d = a - b;
    const double num = l2_squared(d.v) + l2_squared(d.psi);
    const double den = l2_squared(b.v) + l2_squared(b.psi);
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

void write_fields_csv(std::ostream& os, const StatePair& u,
                      const std::map<std::string, std::string>& meta) {
    const Grid& g = u.grid();
    os << "# ny=" << g.ny << "\n# nz=" << g.nz << "\n";
    os << std::setprecision(17);
    os << "# y_max=" << g.y_max << "\n# z_min=" << g.z_min << "\n# z_max=" << g.z_max << "\n";
    os << "# periodic_y=" << (g.periodic_y ? 1 : 0) << "\n";
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
    os << "y,z,v,psi\n";
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j)
            os << g.y(i) << ',' << g.z(j) << ',' << u.v(i, j) << ',' << u.psi(i, j) << '\n';
}

void write_fields_csv(const std::string& path, const StatePair& u,
                      const std::map<std::string, std::string>& meta) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_fields_csv(os, u, meta);
}

StatePair read_fields_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read " + path);
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) != 0) break;
        const auto eq = line.find('=');
        if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    if (line != "y,z,v,psi") throw Error(path + ": missing y,z,v,psi header");
    Grid g;
    try {
        g.ny = std::stoi(meta.at("ny"));
        g.nz = std::stoi(meta.at("nz"));
        g.y_max = std::stod(meta.at("y_max"));
        g.z_min = std::stod(meta.at("z_min"));
        g.z_max = std::stod(meta.at("z_max"));
        g.periodic_y = meta.count("periodic_y") && meta.at("periodic_y") == "1";
    } catch (const std::exception&) {
        throw Error(path + ": incomplete grid metadata");
    }
    check_grid(g);
    StatePair u(g);
    for (int i = 0; i <= g.ny; ++i) {
        for (int j = 0; j <= g.nz; ++j) {
            if (!std::getline(is, line)) throw Error(path + ": truncated field data");
            std::istringstream row(line);
            std::string cell;
            std::vector<double> vals;
            while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
            if (vals.size() != 4) throw Error(path + ": bad row '" + line + "'");
            u.v(i, j) = vals[2];
            u.psi(i, j) = vals[3];
        }
    }
    return u;
}

}  // namespace eqlayer
