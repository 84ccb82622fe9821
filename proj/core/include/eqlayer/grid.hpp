#pragma once

#include <cstddef>
#include <vector>

namespace eqlayer {

/// Uniform tensor grid over [0, y_max] x [z_min, z_max].
///
/// Nodes are y_i = i*hy (i = 0..ny) and z_j = z_min + j*hz (j = 0..nz). Node
/// (i, j) has flat index i*(nz+1) + j. With periodic_y the line is periodic
/// with period y_max and node ny duplicates node 0.
struct Grid {
    int ny = 0;
    int nz = 0;
    double y_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    bool periodic_y = false;

    double hy() const noexcept { return y_max / ny; }
    double hz() const noexcept { return (z_max - z_min) / nz; }

    double y(int i) const noexcept { return i == ny ? y_max : i * hy(); }
    double z(int j) const noexcept { return j == nz ? z_max : z_min + j * hz(); }

    int y_count() const noexcept { return ny + 1; }
    int z_count() const noexcept { return nz + 1; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(ny + 1) * (nz + 1); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * (nz + 1) + j;
    }

    std::vector<double> y_nodes() const;
    std::vector<double> z_nodes() const;

    /// z-level whose coordinate equals `z` to within 1e-9*hz, or -1.
    int level_of(double z) const noexcept;

    bool same_as(const Grid& other) const noexcept;
};

/// Throws ContractViolation when the fields are not positive / ordered.
void check_grid(const Grid& g);

}  // namespace eqlayer
