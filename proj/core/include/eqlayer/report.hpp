#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace eqlayer {

/// One named check against a tolerance.
struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct DiagnosticsReport {
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> values;  ///< reported, not asserted

    /// Records value <= tolerance.
    Check& at_most(const std::string& name, double value, double tolerance, std::string detail = {});
    /// Records value >= tolerance.
    Check& at_least(const std::string& name, double value, double tolerance, std::string detail = {});
    Check& boolean(const std::string& name, bool ok, std::string detail = {});
    void note(const std::string& key, double value);
    void note(const std::string& key, const std::string& value);

    bool all_passed() const noexcept;
    std::vector<std::string> failures() const;
};

/// Flat `key=value` lines; check entries expand to name.value / name.tolerance / name.pass.
void write_key_values(std::ostream& os, const DiagnosticsReport& report);
void write_key_values(const std::string& path, const DiagnosticsReport& report);

std::string format_double(double x);

struct RunManifest {
    std::string config_path;
    std::string spec_echo;  ///< key=value lines of the resolved spec
    std::string output_dir;
    std::vector<std::string> artifacts;
    std::vector<std::pair<std::string, int>> stages;  ///< stage name, exit status

    void write(const std::string& path) const;
};

}  // namespace eqlayer
