#include "eqlayer/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "eqlayer/errors.hpp"

namespace eqlayer {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> split_numbers(const std::string& line, char sep) {
    std::vector<double> out;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, sep)) {
        cell = trim(cell);
        std::size_t used = 0;
        const double x = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        out.push_back(x);
    }
    return out;
}

// Numeric rows of a CSV; comment lines and one non-numeric header are skipped.
std::vector<std::vector<double>> read_table(const std::string& path, std::size_t columns) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open " + path, 0);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        try {
            vals = split_numbers(line, ',');
        } catch (const std::exception&) {
            if (rows.empty()) continue;  // header
            throw ConfigError(path + ": non-numeric row at line " + std::to_string(lineno), 0);
        }
        if (vals.size() != columns)
            throw ConfigError(path + ": expected " + std::to_string(columns) + " columns at line " +
                                  std::to_string(lineno),
                              0);
        rows.push_back(std::move(vals));
    }
    if (rows.size() < 2) throw ConfigError(path + ": needs at least two data rows", 0);
    return rows;
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double t, bool& inside) {
    inside = !(t < x.front() || t > x.back());
    if (!inside) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = it == x.end() ? x.size() - 1 : static_cast<std::size_t>(it - x.begin());
    if (k == 0) k = 1;
    const double s = (t - x[k - 1]) / (x[k] - x[k - 1]);
    return (1.0 - s) * y[k - 1] + s * y[k];
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("expected a boolean, got '" + v + "'", line);
}

double parse_real(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

int parse_int(const std::string& v, int line) {
    const double x = parse_real(v, line);
    if (x != std::floor(x) || x < 1 || x > 1e7) throw ConfigError("expected a positive integer, got '" + v + "'", line);
    return static_cast<int>(x);
}

LambdaChoice parse_lambda(const std::string& v, int line) {
    if (v == "zero") return LambdaChoice::zero();
    if (v == "spectral") return LambdaChoice::spectral();
    if (v.rfind("identity:", 0) == 0) {
        const double c = parse_real(v.substr(9), line);
        if (c > 0.0) throw ConfigError("identity:<c> needs c <= 0", line);
        return LambdaChoice::scaled_identity(c);
    }
    throw ConfigError("lambda_choice must be zero, identity:<c> or spectral", line);
}

}  // namespace

Profile load_profile_csv(const std::string& path) {
    const auto rows = read_table(path, 2);
    auto xs = std::make_shared<std::vector<double>>();
    auto ys = std::make_shared<std::vector<double>>();
    for (const auto& r : rows) {
        if (!xs->empty() && !(r[0] > xs->back())) throw ConfigError(path + ": coordinates must increase", 0);
        xs->push_back(r[0]);
        ys->push_back(r[1]);
    }
    return [xs, ys](double t) {
        bool inside = false;
        return interp(*xs, *ys, t, inside);
    };
}

Source load_source_csv(const std::string& path) {
    const auto rows = read_table(path, 3);
    std::vector<double> ys, zs;
    for (const auto& r : rows) {
        ys.push_back(r[0]);
        zs.push_back(r[1]);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    if (ys.size() < 2 || zs.size() < 2 || ys.size() * zs.size() != rows.size())
        throw ConfigError(path + ": rows must cover a tensor grid exactly once", 0);
    auto vals = std::make_shared<std::vector<double>>(ys.size() * zs.size(), 0.0);
    std::vector<char> seen(vals->size(), 0);
    for (const auto& r : rows) {
        const auto i = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), r[0]) - ys.begin());
        const auto j = static_cast<std::size_t>(std::lower_bound(zs.begin(), zs.end(), r[1]) - zs.begin());
        if (seen[i * zs.size() + j]) throw ConfigError(path + ": duplicate grid point", 0);
        seen[i * zs.size() + j] = 1;
        (*vals)[i * zs.size() + j] = r[2];
    }
    auto yp = std::make_shared<std::vector<double>>(std::move(ys));
    auto zp = std::make_shared<std::vector<double>>(std::move(zs));
    return [yp, zp, vals](double y, double z) {
        const auto& Y = *yp;
        const auto& Z = *zp;
        if (y < Y.front() || y > Y.back() || z < Z.front() || z > Z.back()) return 0.0;
        auto cell = [](const std::vector<double>& a, double t) {
            std::size_t k = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), t) - a.begin());
            k = std::clamp<std::size_t>(k, 1, a.size() - 1);
            return k;
        };
        const std::size_t i = cell(Y, y), j = cell(Z, z);
        const double s = (y - Y[i - 1]) / (Y[i] - Y[i - 1]);
        const double t = (z - Z[j - 1]) / (Z[j] - Z[j - 1]);
        const std::size_t nz = Z.size();
        const auto& v = *vals;
        return (1 - s) * (1 - t) * v[(i - 1) * nz + j - 1] + s * (1 - t) * v[i * nz + j - 1] +
               (1 - s) * t * v[(i - 1) * nz + j] + s * t * v[i * nz + j];
    };
}

Config parse_config(std::istream& is, const std::string& base_dir) {
    Config cfg;
    DomainCase dom;
    int ny = 64, nz = 64;
    bool periodic = false;
    std::map<std::string, int> seen;
    std::string raw;
    int lineno = 0;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
    };
    ProblemSpec& spec = cfg.spec;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
        if (seen.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
        seen[key] = lineno;
        cfg.entries.emplace_back(key, val);
        try {
            if (key == "case") dom.tag = case_from_string(val);
            else if (key == "H") dom.H = parse_real(val, lineno);
            else if (key == "Zmax") dom.z_max = parse_real(val, lineno);
            else if (key == "Ymax") dom.y_max = parse_real(val, lineno);
            else if (key == "Ny") ny = parse_int(val, lineno);
            else if (key == "Nz") nz = parse_int(val, lineno);
            else if (key == "zero_order") spec.zero_order = parse_bool(val, lineno);
            else if (key == "transport") spec.transport = parse_bool(val, lineno);
            else if (key == "periodic_y") periodic = parse_bool(val, lineno);
            else if (key == "lambda_choice") spec.bc.lambda = parse_lambda(val, lineno);
            else if (key == "V") spec.bc.V = load_profile_csv(resolve(val));
            else if (key == "Upsilon") spec.bc.Upsilon = load_profile_csv(resolve(val));
            else if (key == "Psi") spec.bc.Psi = load_profile_csv(resolve(val));
            else if (key == "vH") spec.bc.v_H = load_profile_csv(resolve(val));
            else if (key == "psi_bottom") spec.bc.psi_bottom = load_profile_csv(resolve(val));
            else if (key == "s_v") spec.s_v = load_source_csv(resolve(val));
            else if (key == "s_psi") spec.s_psi = load_source_csv(resolve(val));
            else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_int(val, lineno));
            else if (key == "bump") {
                std::vector<double> b;
                try {
                    b = split_numbers(val, ',');
                } catch (const std::exception&) {
                    throw ConfigError("bump expects y0,z0,width,amplitude", lineno);
                }
                if (b.size() != 4 || !(b[2] > 0.0)) throw ConfigError("bump expects y0,z0,width>0,amplitude", lineno);
                Source prev = spec.s_v;
                spec.s_v = [b, prev](double y, double z) {
                    const double r2 = ((y - b[0]) * (y - b[0]) + (z - b[1]) * (z - b[1])) / (b[2] * b[2]);
                    return eval(prev, y, z) + b[3] * std::exp(-r2);
                };
            } else
                throw ConfigError("unknown key '" + key + "'", lineno);
        } catch (const ConfigError& e) {
            if (e.line() > 0) throw;
            throw ConfigError(e.what(), lineno);
        } catch (const DomainError& e) {
            throw ConfigError(e.what(), lineno);
        }
    }
    spec.domain = dom;
    spec.grid = make_grid(dom, ny, nz, periodic);
    const ValidationReport rep = validate(spec);
    if (!rep.ok()) {
        std::string msg = rep.violations.front();
        int line = 0;
        for (const char* k : {"case", "H", "Zmax", "Ymax", "Ny", "Upsilon", "V"})
            if (msg.find(k) != std::string::npos && seen.count(k)) {
                line = seen[k];
                break;
            }
        throw ConfigError("invalid problem: " + msg, line);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path, 0);
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(is, dir.empty() ? "." : dir.string());
}

std::string describe_spec(const ProblemSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    const auto& d = spec.domain;
    os << "case=" << to_string(d.tag) << '\n'
       << "H=" << d.H << '\n'
       << "Zmax=" << d.z_max << '\n'
       << "Ymax=" << d.y_max << '\n'
       << "Ny=" << spec.grid.ny << '\n'
       << "Nz=" << spec.grid.nz << '\n'
       << "zero_order=" << (spec.zero_order ? "true" : "false") << '\n'
       << "transport=" << (spec.transport ? "true" : "false") << '\n'
       << "periodic_y=" << (spec.grid.periodic_y ? "true" : "false") << '\n'
       << "lambda_choice=" << to_string(spec.bc.lambda) << '\n';
    auto set = [](bool b) { return b ? "set" : "zero"; };
    os << "V=" << set(bool(spec.bc.V)) << '\n'
       << "Upsilon=" << set(bool(spec.bc.Upsilon)) << '\n'
       << "Psi=" << set(bool(spec.bc.Psi)) << '\n'
       << "vH=" << set(bool(spec.bc.v_H)) << '\n'
       << "psi_bottom=" << set(bool(spec.bc.psi_bottom)) << '\n'
       << "s_v=" << set(bool(spec.s_v)) << '\n'
       << "s_psi=" << set(bool(spec.s_psi)) << '\n';
    return os.str();
}

}  // namespace eqlayer
