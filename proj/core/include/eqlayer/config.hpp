#pragma once

#include <istream>
#include <string>
#include <vector>

#include "eqlayer/domain.hpp"

namespace eqlayer {

/// Parsed configuration. Keys (one per line, `#` starts a comment):
///
///   case = I | II | III          H, Zmax, Ymax (reals)     Ny, Nz (integers)
///   zero_order = true|false      transport = true|false    periodic_y = true|false
///   lambda_choice = zero | identity:<c> | spectral
///   V, Upsilon, Psi, vH, psi_bottom = <two-column CSV: coordinate,value>
///   s_v, s_psi = <three-column CSV: y,z,value on a tensor grid>
///   bump = <y0>,<z0>,<width>,<amplitude>   Gaussian added to s_v
///   seed = <integer>
///
/// Relative paths resolve against the directory of the configuration file.
struct Config {
    ProblemSpec spec;
    unsigned seed = 20240611;
    std::vector<std::pair<std::string, std::string>> entries;  ///< as read, for the manifest
};

/// Throws ConfigError with the offending line number.
Config parse_config(std::istream& is, const std::string& base_dir = ".");
Config load_config(const std::string& path);

/// Linear interpolation of a coordinate,value table; 0 outside the table.
Profile load_profile_csv(const std::string& path);

/// Bilinear interpolation of y,z,value rows on a tensor grid; 0 outside.
Source load_source_csv(const std::string& path);

/// key=value echo of the resolved spec (functions shown as set/unset).
std::string describe_spec(const ProblemSpec& spec);

}  // namespace eqlayer
