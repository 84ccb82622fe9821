#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <string>
#include <vector>

#include "eqlayer/domain.hpp"
#include "eqlayer/field.hpp"

namespace eqlayer {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

enum class RowKind {
    InteriorV,
    InteriorPsi,
    BcY0V,
    BcY0Psi,
    BcY0DPsi,
    BcYmaxV,
    BcYmaxPsi,
    BcYmaxDPsi,
    BcZBottom,
    BcZTop,
    Periodic,
};

std::string to_string(RowKind kind);

/// Discretization of the (v, psi) system with all boundary rows.
///
/// Unknowns: v at every node, then psi at every node (flat index i*(nz+1)+j),
/// then, without periodic_y, one ghost psi value left of y=0 and one right of
/// y=Ymax per z-level. The ghosts carry the two d_y psi conditions so the
/// five-point d_y^4 stencil is used unchanged up to the boundary.
///
/// In z the equations are box-centred: cell c between levels c-1 and c
/// carries (v^c - v^{c-1})/hz plus the level average of every y-term, with
/// the transport coefficient taken at the cell midpoint.
struct DiscreteOperator {
    Grid grid;
    CaseTag tag = CaseTag::QuarterPlane;
    SparseMatrix matrix;     ///< L = T - D/2 - zeta*Z with the boundary rows
    SparseMatrix transport;  ///< T on interior rows, zero elsewhere
    SparseMatrix diffusion;  ///< D = diag(dy^4, -dy^2) on interior rows, zero elsewhere
    Eigen::VectorXd rhs;
    std::vector<RowKind> row_kind;
    std::vector<int> row_i;  ///< y-node of the row
    std::vector<int> row_j;  ///< z-level (boundary rows) or cell index (interior rows)

    Eigen::Index nodes() const noexcept { return static_cast<Eigen::Index>(grid.size()); }
    Eigen::Index dim() const noexcept { return matrix.rows(); }
    Eigen::Index v_index(int i, int j) const noexcept {
        return static_cast<Eigen::Index>(grid.index(i, j));
    }
    Eigen::Index psi_index(int i, int j) const noexcept { return nodes() + v_index(i, j); }

    /// Unknown vector for a state; ghosts are filled by the d_y psi rows' left-hand sides
    /// evaluated with zero data (mirror images).
    Eigen::VectorXd pack(const StatePair& u) const;
    StatePair unpack(const Eigen::VectorXd& x) const;

    /// Per-row test value: the cell average of psi for a v-row, of v for a psi-row, 0 otherwise.
    /// p.(T x) is then the discrete transport form, p.(D x) the dissipation form.
    Eigen::VectorXd pairing(const Eigen::VectorXd& x) const;

    /// Interior-row values of a row vector laid out on nodes (cell c at level c).
    /// Returns (v-equation values, psi-equation values).
    std::pair<Field, Field> interior_values(const Eigen::VectorXd& rows) const;
};

/// Builds the operator and right-hand side. Throws AssemblyError for grids
/// too small for the stencils or a malformed Lambda, DomainError for a
/// positive ScaledIdentity.
DiscreteOperator assemble(const ProblemSpec& spec);

/// Number of y=0 boundary rows per z-level (0 for periodic grids). Throws
/// AssemblyError if the levels disagree.
int count_bc_y0(const DiscreteOperator& op);

/// Dense Lambda on the interior y-nodes (all nodes but the duplicate for periodic grids).
Eigen::MatrixXd lambda_matrix(const LambdaChoice& choice, const Grid& grid);

/// Applies a top-boundary choice to a trace on all y-nodes (endpoints must be zero).
Eigen::VectorXd lambda_case2(const LambdaChoice& choice, const Eigen::VectorXd& v_trace,
                             double y_max);

/// Cut-off used by the lifting: (1+2y/c)(1-y/c)^2 on [0, c], 0 beyond; the
/// polynomial is continued for y < 0 (ghost nodes).
double lift_profile(double y, double cut);

struct Lifting {
    StatePair r;
    Eigen::VectorXd r_vec;  ///< r packed with ghosts
    Eigen::VectorXd Lr;     ///< matrix * r_vec, one entry per row
    Field Ls_psi;           ///< v-equation part of Lr (slot of s_psi)
    Field Ls_v;             ///< psi-equation part of Lr (slot of s_v)
};

/// r_v = V(z) eta(y) (+ the v_H lift in z for UpperStrip), r_psi = (Psi(z) + y Upsilon(z)) eta(y)
/// with eta = lift_profile(., Ymax/4). Throws PreconditionError when a
/// compatibility integral diverges.
Lifting lift(const ProblemSpec& spec, const DiscreteOperator& op);
Lifting lift(const ProblemSpec& spec);

/// Coordinate text dump: `# rows=R cols=C nnz=K` then `row col value` lines.
void write_matrix(std::ostream& os, const SparseMatrix& m);
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
void write_matrix(const std::string& path, const SparseMatrix& m);
void write_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace eqlayer
