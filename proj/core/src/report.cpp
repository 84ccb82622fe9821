#include "eqlayer/report.hpp"

#include <fstream>
#include <sstream>

#include "eqlayer/errors.hpp"

namespace eqlayer {

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

Check& DiagnosticsReport::at_most(const std::string& name, double value, double tolerance, std::string detail) {
    checks.push_back({name, value, tolerance, value <= tolerance, std::move(detail)});
    return checks.back();
}

Check& DiagnosticsReport::at_least(const std::string& name, double value, double tolerance, std::string detail) {
    checks.push_back({name, value, tolerance, value >= tolerance, std::move(detail)});
    return checks.back();
}

Check& DiagnosticsReport::boolean(const std::string& name, bool ok, std::string detail) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ok, std::move(detail)});
    return checks.back();
}

void DiagnosticsReport::note(const std::string& key, double value) { values.emplace_back(key, format_double(value)); }

void DiagnosticsReport::note(const std::string& key, const std::string& value) { values.emplace_back(key, value); }

bool DiagnosticsReport::all_passed() const noexcept {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<std::string> DiagnosticsReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.pass) out.push_back(c.name);
    return out;
}

void write_key_values(std::ostream& os, const DiagnosticsReport& report) {
    for (const auto& [k, v] : report.values) os << k << '=' << v << '\n';
    for (const auto& c : report.checks) {
        os << c.name << ".value=" << format_double(c.value) << '\n';
        os << c.name << ".tolerance=" << format_double(c.tolerance) << '\n';
        os << c.name << ".pass=" << (c.pass ? "true" : "false") << '\n';
        if (!c.detail.empty()) os << c.name << ".detail=" << c.detail << '\n';
    }
    os << "all_passed=" << (report.all_passed() ? "true" : "false") << '\n';
}

void write_key_values(const std::string& path, const DiagnosticsReport& report) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_key_values(os, report);
}

void RunManifest::write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "config=" << config_path << '\n';
    os << "output_dir=" << output_dir << '\n';
    std::istringstream spec(spec_echo);
    for (std::string line; std::getline(spec, line);)
        if (!line.empty()) os << "spec." << line << '\n';
    for (const auto& a : artifacts) os << "artifact=" << a << '\n';
    for (const auto& [stage, status] : stages) os << "stage." << stage << ".status=" << status << '\n';
}

}  // namespace eqlayer
