#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <string>

#include "eqlayer/grid.hpp"

namespace eqlayer {

/// Scalar nodal field, values(i, j) at (y_i, z_j).
struct Field {
    Grid grid;
    Eigen::MatrixXd values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(Eigen::MatrixXd::Zero(g.ny + 1, g.nz + 1)) {}

    double& operator()(int i, int j) { return values(i, j); }
    double operator()(int i, int j) const { return values(i, j); }

    /// Throws ContractViolation when the shape disagrees with the grid or an entry is not finite.
    void check() const;
};

/// The solution state u = (v, psi).
struct StatePair {
    Field v;
    Field psi;

    StatePair() = default;
    explicit StatePair(const Grid& g) : v(g), psi(g) {}

    const Grid& grid() const noexcept { return v.grid; }
    void check() const;
};

StatePair operator+(const StatePair& a, const StatePair& b);
StatePair operator-(const StatePair& a, const StatePair& b);
StatePair operator*(double c, const StatePair& a);

/// Samples f at every node.
template <class F>
Field sample(const Grid& g, F&& f) {
    Field out(g);
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j) out(i, j) = f(g.y(i), g.z(j));
    return out;
}

/// Throws ContractViolation unless both grids coincide.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Relative L2 difference ||a - b|| / ||b|| over both components (trapezoid weights).
double relative_l2(const StatePair& a, const StatePair& b);

/// CSV with `# key=value` metadata lines, a `y,z,v,psi` header, one row per node.
void write_fields_csv(std::ostream& os, const StatePair& u,
                      const std::map<std::string, std::string>& meta = {});
void write_fields_csv(const std::string& path, const StatePair& u,
                      const std::map<std::string, std::string>& meta = {});

/// Reads back a file written by write_fields_csv; the grid is rebuilt from the metadata.
StatePair read_fields_csv(const std::string& path);

}  // namespace eqlayer
