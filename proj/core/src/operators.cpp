#include "eqlayer/operators.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "eqlayer/errors.hpp"
#include "eqlayer/parallel.hpp"
#include "eqlayer/spectral.hpp"

namespace eqlayer {

namespace {

using Triplet = Eigen::Triplet<double>;

struct RowSink {
    std::vector<Triplet> full, t, d;
};

class Assembler {
public:
    Assembler(const ProblemSpec& spec, DiscreteOperator& op) : spec_(spec), op_(op), g_(op.grid) {
        n_ = op.nodes();
        nz1_ = g_.nz + 1;
    }

    Eigen::Index v(int i, int j) const { return g_.periodic_y ? op_.v_index(wrap(i), j) : op_.v_index(i, j); }

    Eigen::Index psi(int i, int j) const {
        if (g_.periodic_y) return op_.psi_index(wrap(i), j);
        if (i == -1) return 2 * n_ + j;
        if (i == g_.ny + 1) return 2 * n_ + nz1_ + j;
        return op_.psi_index(i, j);
    }

    int wrap(int i) const { return ((i % g_.ny) + g_.ny) % g_.ny; }

    // Row that column i's s-th equation occupies: slots v(i,0), psi(i,0), v(i,1), ...
    Eigen::Index slot(int i, int s) const { return s % 2 == 0 ? op_.v_index(i, s / 2) : op_.psi_index(i, s / 2); }

    const ProblemSpec& spec_;
    DiscreteOperator& op_;
    const Grid& g_;
    Eigen::Index n_ = 0;
    int nz1_ = 0;
};

Eigen::MatrixXd sample_source(const Source& s, const Grid& g) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.ny + 1, g.nz + 1);
    if (!s) return out;
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j) out(i, j) = s(g.y(i), g.z(j));
    return out;
}

// Interior y-nodes that carry a Lambda row.
int lambda_first(const Grid& g) { return g.periodic_y ? 0 : 1; }
int lambda_count(const Grid& g) { return g.periodic_y ? g.ny : g.ny - 1; }

}  // namespace

std::string to_string(RowKind kind) {
    switch (kind) {
        case RowKind::InteriorV: return "interior_v";
        case RowKind::InteriorPsi: return "interior_psi";
        case RowKind::BcY0V: return "bc_y0_v";
        case RowKind::BcY0Psi: return "bc_y0_psi";
        case RowKind::BcY0DPsi: return "bc_y0_dpsi";
        case RowKind::BcYmaxV: return "bc_ymax_v";
        case RowKind::BcYmaxPsi: return "bc_ymax_psi";
        case RowKind::BcYmaxDPsi: return "bc_ymax_dpsi";
        case RowKind::BcZBottom: return "bc_z_bottom";
        case RowKind::BcZTop: return "bc_z_top";
        case RowKind::Periodic: return "periodic";
    }
    return "?";
}

Eigen::MatrixXd lambda_matrix(const LambdaChoice& choice, const Grid& g) {
    const int n = lambda_count(g);
    switch (choice.kind) {
        case LambdaChoice::Kind::Zero: return Eigen::MatrixXd::Zero(n, n);
        case LambdaChoice::Kind::ScaledIdentity:
            if (choice.scale > 0.0)
                throw DomainError("ScaledIdentity lambda needs c <= 0 (non-positivity)");
            return choice.scale * Eigen::MatrixXd::Identity(n, n);
        case LambdaChoice::Kind::Spectral:
            return g.periodic_y ? lambda_periodic_matrix(g.ny, g.y_max) : lambda_sine_matrix(g.ny, g.y_max);
        case LambdaChoice::Kind::Matrix:
            if (!choice.matrix || choice.matrix->rows() != n || choice.matrix->cols() != n)
                throw AssemblyError("lambda matrix must be " + std::to_string(n) + "x" + std::to_string(n));
            return *choice.matrix;
    }
    return Eigen::MatrixXd::Zero(n, n);
}

Eigen::VectorXd lambda_case2(const LambdaChoice& choice, const Eigen::VectorXd& v_trace, double y_max) {
    const auto n = v_trace.size();
    if (n < 3) throw ContractViolation("lambda_case2: trace too short");
    const double scale = std::max(1.0, v_trace.cwiseAbs().maxCoeff());
    if (std::abs(v_trace(0)) > 1e-12 * scale || std::abs(v_trace(n - 1)) > 1e-12 * scale)
        throw PreconditionError("lambda_case2: trace must vanish at both ends");
    Grid g;
    g.ny = static_cast<int>(n - 1);
    g.nz = 1;
    g.y_max = y_max;
    g.z_max = 1.0;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    if (choice.kind == LambdaChoice::Kind::Zero) return out;
    if (choice.kind == LambdaChoice::Kind::Spectral) {
        out.segment(1, n - 2) = lambda_exact_sine(v_trace.segment(1, n - 2), y_max);
        return out;
    }
    out.segment(1, n - 2) = lambda_matrix(choice, g) * v_trace.segment(1, n - 2);
    return out;
}

Eigen::VectorXd DiscreteOperator::pack(const StatePair& u) const {
    require_same_grid(u.grid(), grid, "pack");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim());
    for (int i = 0; i <= grid.ny; ++i)
        for (int j = 0; j <= grid.nz; ++j) {
            x(v_index(i, j)) = u.v(i, j);
            x(psi_index(i, j)) = u.psi(i, j);
        }
    if (!grid.periodic_y) {
        const Eigen::Index n = nodes();
        const int nz1 = grid.nz + 1;
        for (int j = 0; j <= grid.nz; ++j) {
            x(2 * n + j) = u.psi(1, j);
            x(2 * n + nz1 + j) = u.psi(grid.ny - 1, j);
        }
    }
    return x;
}

StatePair DiscreteOperator::unpack(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw ContractViolation("unpack: vector size");
    StatePair u(grid);
    for (int i = 0; i <= grid.ny; ++i)
        for (int j = 0; j <= grid.nz; ++j) {
            u.v(i, j) = x(v_index(i, j));
            u.psi(i, j) = x(psi_index(i, j));
        }
    return u;
}

Eigen::VectorXd DiscreteOperator::pairing(const Eigen::VectorXd& x) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim());
    for (Eigen::Index r = 0; r < dim(); ++r) {
        const int i = row_i[r];
        const int c = row_j[r];
        if (row_kind[r] == RowKind::InteriorV)
            p(r) = 0.5 * (x(psi_index(i, c - 1)) + x(psi_index(i, c)));
        else if (row_kind[r] == RowKind::InteriorPsi)
            p(r) = 0.5 * (x(v_index(i, c - 1)) + x(v_index(i, c)));
    }
    return p;
}

std::pair<Field, Field> DiscreteOperator::interior_values(const Eigen::VectorXd& rows) const {
    Field fv(grid), fp(grid);
    for (Eigen::Index r = 0; r < dim(); ++r) {
        if (row_kind[r] == RowKind::InteriorV) fv(row_i[r], row_j[r]) = rows(r);
        else if (row_kind[r] == RowKind::InteriorPsi) fp(row_i[r], row_j[r]) = rows(r);
    }
    return {fv, fp};
}

DiscreteOperator assemble(const ProblemSpec& spec) {
    const Grid& g = spec.grid;
    check_grid(g);
    const auto& dom = spec.domain;
    if (g.periodic_y ? g.ny < 5 : g.ny < 2)
        throw AssemblyError("grid too small for the five-point y-stencil (ny=" + std::to_string(g.ny) + ")");
    if (std::abs(g.z_min - dom.z_begin()) > 1e-12 || std::abs(g.z_max - dom.z_end()) > 1e-12)
        throw AssemblyError("grid z-interval does not match case " + to_string(dom.tag));

    DiscreteOperator op;
    op.grid = g;
    op.tag = dom.tag;
    Assembler a(spec, op);
    const Eigen::Index n = op.nodes();
    const int nz1 = g.nz + 1;
    const Eigen::Index dim = g.periodic_y ? 2 * n : 2 * n + 2 * nz1;

    op.rhs = Eigen::VectorXd::Zero(dim);
    op.row_kind.assign(dim, RowKind::Periodic);
    op.row_i.assign(dim, -1);
    op.row_j.assign(dim, -1);
    std::vector<char> assigned(dim, 0);

    const double hy = g.hy();
    const double hz = g.hz();
    const double tau = spec.transport ? 1.0 : 0.0;
    const double zeta = spec.zero_order ? 1.0 : 0.0;
    const Eigen::MatrixXd s_psi = sample_source(spec.s_psi, g);
    const Eigen::MatrixXd s_v = sample_source(spec.s_v, g);

    // Top operator.
    LambdaChoice top_choice = LambdaChoice::spectral();
    if (dom.tag == CaseTag::Strip) top_choice = spec.bc.lambda;
    else if (spec.truncation) top_choice = *spec.truncation;
    const Eigen::MatrixXd lam = lambda_matrix(top_choice, g);
    const int l0 = lambda_first(g);
    const int ln = lambda_count(g);
    // On a periodic line a zero mean multiplier leaves the mean of v free in
    // cases I and II; its top row then pins the mean of v instead.
    const bool pin_mean = g.periodic_y && dom.tag != CaseTag::UpperStrip &&
                          (top_choice.kind == LambdaChoice::Kind::Zero ||
                           top_choice.kind == LambdaChoice::Kind::Spectral);
    Eigen::VectorXd top_rhs = Eigen::VectorXd::Zero(ln);
    if (spec.bc.top_psi || spec.bc.top_v) {
        Eigen::VectorXd tp(ln), tv(ln);
        for (int k = 0; k < ln; ++k) {
            tp(k) = eval(spec.bc.top_psi, g.y(l0 + k));
            tv(k) = eval(spec.bc.top_v, g.y(l0 + k));
        }
        top_rhs = tp - lam * tv;
        if (pin_mean) top_rhs.array() += tv.mean() - tp.mean();
    }

    const int first = g.periodic_y ? 0 : 1;
    const int last = g.periodic_y ? g.ny - 1 : g.ny - 1;
    const int ncol = last - first + 1;
    std::vector<RowSink> sinks(ncol);

    parallel_for(ncol, [&](int col) {
        const int i = first + col;
        RowSink& sk = sinks[col];
        auto put = [&](std::vector<Triplet>& t, Eigen::Index r, Eigen::Index c, double val) {
            t.emplace_back(static_cast<int>(r), static_cast<int>(c), val);
        };
        int s = 0;
        // Bottom row.
        {
            const Eigen::Index r = a.slot(i, s++);
            op.row_kind[r] = RowKind::BcZBottom;
            op.row_i[r] = i;
            op.row_j[r] = 0;
            assigned[r] = 1;
            if (dom.tag == CaseTag::UpperStrip) {
                put(sk.full, r, a.v(i, 0), 1.0);
                op.rhs(r) = eval(spec.bc.v_H, g.y(i));
            } else {
                put(sk.full, r, a.psi(i, 0), 1.0);
                op.rhs(r) = eval(spec.bc.psi_bottom, g.y(i));
            }
        }
        const double c4 = 1.0 / (hy * hy * hy * hy);
        const double c2 = 1.0 / (hy * hy);
        for (int c = 1; c <= g.nz; ++c) {
            const int lo = c - 1;
            const int hi = c;
            const double zm = 0.5 * (g.z(lo) + g.z(hi));
            const double tr = tau * zm / (2.0 * hy) * 0.5;

            // v-equation: dz v + z dy v - 1/2 dy^4 psi - zeta psi = s_psi
            const Eigen::Index rv = a.slot(i, s++);
            op.row_kind[rv] = RowKind::InteriorV;
            op.row_i[rv] = i;
            op.row_j[rv] = c;
            assigned[rv] = 1;
            // psi-equation: dz psi + z dy psi + 1/2 dy^2 v - zeta v = s_v
            const Eigen::Index rp = a.slot(i, s++);
            op.row_kind[rp] = RowKind::InteriorPsi;
            op.row_i[rp] = i;
            op.row_j[rp] = c;
            assigned[rp] = 1;

            auto both = [&](Eigen::Index r, Eigen::Index col_idx, double tval) {
                put(sk.t, r, col_idx, tval);
                put(sk.full, r, col_idx, tval);
            };
            both(rv, a.v(i, hi), 1.0 / hz);
            both(rv, a.v(i, lo), -1.0 / hz);
            both(rp, a.psi(i, hi), 1.0 / hz);
            both(rp, a.psi(i, lo), -1.0 / hz);
            if (tr != 0.0) {
                for (int l : {lo, hi}) {
                    both(rv, a.v(i + 1, l), tr);
                    both(rv, a.v(i - 1, l), -tr);
                    both(rp, a.psi(i + 1, l), tr);
                    both(rp, a.psi(i - 1, l), -tr);
                }
            }
            static constexpr double k4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
            static constexpr double k2[3] = {1.0, -2.0, 1.0};
            for (int l : {lo, hi}) {
                for (int m = 0; m < 5; ++m) {
                    const double dval = 0.5 * k4[m] * c4;
                    put(sk.d, rv, a.psi(i - 2 + m, l), dval);
                    put(sk.full, rv, a.psi(i - 2 + m, l), -0.5 * dval);
                }
                for (int m = 0; m < 3; ++m) {
                    const double dval = -0.5 * k2[m] * c2;
                    put(sk.d, rp, a.v(i - 1 + m, l), dval);
                    put(sk.full, rp, a.v(i - 1 + m, l), -0.5 * dval);
                }
                if (zeta != 0.0) {
                    put(sk.full, rv, a.psi(i, l), -0.5 * zeta);
                    put(sk.full, rp, a.v(i, l), -0.5 * zeta);
                }
            }
            op.rhs(rv) = 0.5 * (s_psi(i, lo) + s_psi(i, hi));
            op.rhs(rp) = 0.5 * (s_v(i, lo) + s_v(i, hi));
        }
        // Top row: psi - Lambda v.
        {
            const Eigen::Index r = a.slot(i, s++);
            op.row_kind[r] = RowKind::BcZTop;
            op.row_i[r] = i;
            op.row_j[r] = g.nz;
            assigned[r] = 1;
            const int row = i - l0;
            put(sk.full, r, a.psi(i, g.nz), 1.0);
            for (int k = 0; k < ln; ++k) {
                double val = -lam(row, k);
                if (pin_mean) val += 1.0 / ln;
                if (val != 0.0) put(sk.full, r, a.v(l0 + k, g.nz), val);
                if (pin_mean) put(sk.full, r, a.psi(l0 + k, g.nz), -1.0 / ln);
            }
            op.rhs(r) = top_rhs(row);
        }
    });

    std::vector<Triplet> full, tt, dd;
    for (auto& sk : sinks) {
        full.insert(full.end(), sk.full.begin(), sk.full.end());
        tt.insert(tt.end(), sk.t.begin(), sk.t.end());
        dd.insert(dd.end(), sk.d.begin(), sk.d.end());
    }

    auto bc_row = [&](Eigen::Index r, RowKind kind, int i, int j) {
        op.row_kind[r] = kind;
        op.row_i[r] = i;
        op.row_j[r] = j;
        assigned[r] = 1;
    };
    if (g.periodic_y) {
        for (int j = 0; j <= g.nz; ++j) {
            const Eigen::Index rv = op.v_index(g.ny, j);
            const Eigen::Index rp = op.psi_index(g.ny, j);
            bc_row(rv, RowKind::Periodic, g.ny, j);
            bc_row(rp, RowKind::Periodic, g.ny, j);
            full.emplace_back(rv, op.v_index(g.ny, j), 1.0);
            full.emplace_back(rv, op.v_index(0, j), -1.0);
            full.emplace_back(rp, op.psi_index(g.ny, j), 1.0);
            full.emplace_back(rp, op.psi_index(0, j), -1.0);
        }
    } else {
        for (int j = 0; j <= g.nz; ++j) {
            const double z = g.z(j);
            Eigen::Index r = op.v_index(0, j);
            bc_row(r, RowKind::BcY0V, 0, j);
            full.emplace_back(r, op.v_index(0, j), 1.0);
            op.rhs(r) = eval(spec.bc.V, z);

            r = op.psi_index(0, j);
            bc_row(r, RowKind::BcY0Psi, 0, j);
            full.emplace_back(r, op.psi_index(0, j), 1.0);
            op.rhs(r) = eval(spec.bc.Psi, z);

            r = 2 * n + j;
            bc_row(r, RowKind::BcY0DPsi, 0, j);
            full.emplace_back(r, op.psi_index(1, j), 1.0 / (2.0 * hy));
            full.emplace_back(r, 2 * n + j, -1.0 / (2.0 * hy));
            op.rhs(r) = eval(spec.bc.Upsilon, z);

            r = op.v_index(g.ny, j);
            bc_row(r, RowKind::BcYmaxV, g.ny, j);
            full.emplace_back(r, op.v_index(g.ny, j), 1.0);

            r = op.psi_index(g.ny, j);
            bc_row(r, RowKind::BcYmaxPsi, g.ny, j);
            full.emplace_back(r, op.psi_index(g.ny, j), 1.0);

            r = 2 * n + nz1 + j;
            bc_row(r, RowKind::BcYmaxDPsi, g.ny, j);
            full.emplace_back(r, 2 * n + nz1 + j, 1.0 / (2.0 * hy));
            full.emplace_back(r, op.psi_index(g.ny - 1, j), -1.0 / (2.0 * hy));
        }
    }

    for (Eigen::Index r = 0; r < dim; ++r)
        if (!assigned[r])
            throw AssemblyError("no equation assigned to unknown " + std::to_string(r) + " (node i=" +
                                std::to_string(op.row_i[r]) + ")");

    op.matrix.resize(dim, dim);
    op.matrix.setFromTriplets(full.begin(), full.end());
    op.matrix.makeCompressed();
    op.transport.resize(dim, dim);
    op.transport.setFromTriplets(tt.begin(), tt.end());
    op.diffusion.resize(dim, dim);
    op.diffusion.setFromTriplets(dd.begin(), dd.end());
    return op;
}

int count_bc_y0(const DiscreteOperator& op) {
    const Grid& g = op.grid;
    std::vector<int> per_level(g.nz + 1, 0);
    for (std::size_t r = 0; r < op.row_kind.size(); ++r) {
        const RowKind k = op.row_kind[r];
        if (k == RowKind::BcY0V || k == RowKind::BcY0Psi || k == RowKind::BcY0DPsi) ++per_level[op.row_j[r]];
    }
    for (int c : per_level)
        if (c != per_level[0]) throw AssemblyError("y=0 boundary row count differs between z-levels");
    return per_level[0];
}

double lift_profile(double y, double cut) {
    if (y >= cut) return 0.0;
    const double t = y / cut;
    return (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
}

Lifting lift(const ProblemSpec& spec, const DiscreteOperator& op) {
    const Grid& g = op.grid;
    const auto& bc = spec.bc;
    const auto& dom = spec.domain;
    const ValidationReport rep = validate(spec);
    if (rep.upsilon.divergent || rep.v_corner.divergent)
        throw PreconditionError("lift: boundary data violates the corner compatibility conditions");

    const double ycut = g.y_max / 4.0;
    const bool upper = dom.tag == CaseTag::UpperStrip;
    const double zcut = (dom.z_end() - dom.z_begin()) / 4.0;
    const double vcorner = upper ? eval(bc.V, dom.H) : 0.0;

    auto r_v = [&](double y, double z) {
        double val = g.periodic_y ? 0.0 : eval(bc.V, z) * lift_profile(y, ycut);
        if (upper)
            val += (eval(bc.v_H, y) - (g.periodic_y ? 0.0 : vcorner * lift_profile(y, ycut))) *
                   lift_profile(z - dom.H, zcut);
        return val;
    };
    auto r_psi = [&](double y, double z) {
        if (g.periodic_y) return 0.0;
        return (eval(bc.Psi, z) + y * eval(bc.Upsilon, z)) * lift_profile(y, ycut);
    };

    Lifting out;
    out.r = StatePair(g);
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j) {
            out.r.v(i, j) = r_v(g.y(i), g.z(j));
            out.r.psi(i, j) = r_psi(g.y(i), g.z(j));
        }
    out.r_vec = op.pack(out.r);
    if (!g.periodic_y) {
        const Eigen::Index n = op.nodes();
        const int nz1 = g.nz + 1;
        for (int j = 0; j <= g.nz; ++j) {
            out.r_vec(2 * n + j) = r_psi(-g.hy(), g.z(j));
            out.r_vec(2 * n + nz1 + j) = r_psi(g.y_max + g.hy(), g.z(j));
        }
    }
    out.Lr = op.matrix * out.r_vec;
    auto [fv, fp] = op.interior_values(out.Lr);
    out.Ls_psi = std::move(fv);
    out.Ls_v = std::move(fp);
    return out;
}

Lifting lift(const ProblemSpec& spec) { return lift(spec, assemble(spec)); }

void write_matrix(std::ostream& os, const SparseMatrix& m) {
    os << "# rows=" << m.rows() << " cols=" << m.cols() << " nnz=" << m.nonZeros() << "\n";
    os << std::setprecision(17);
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    os << "# rows=" << m.rows() << " cols=" << m.cols() << " nnz=" << m.size() << "\n";
    os << std::setprecision(17);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) os << r << ' ' << c << ' ' << m(r, c) << '\n';
}

void write_matrix(const std::string& path, const SparseMatrix& m) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_matrix(os, m);
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_matrix(os, m);
}

}  // namespace eqlayer
