#include "eqlayer/verification.hpp"

#include <Eigen/SVD>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "eqlayer/diagnostics.hpp"
#include "eqlayer/errors.hpp"
#include "eqlayer/linsolve.hpp"
#include "eqlayer/manufactured.hpp"
#include "eqlayer/norms.hpp"
#include "eqlayer/operators.hpp"
#include "eqlayer/spectral.hpp"
#include "eqlayer/transparent.hpp"

namespace eqlayer {

namespace {

constexpr double kPi = 3.14159265358979323846;

double order(double coarse, double fine) { return std::log2(coarse / fine); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

std::string artifact(const VerifyOptions& o, CriterionResult& r, const std::string& name) {
    const std::string path = (std::filesystem::path(o.output_dir) / name).string();
    r.artifacts.push_back(path);
    return path;
}

void write_convergence(const std::string& path, const std::string& study, const std::vector<int>& n,
                       const std::vector<double>& h, const std::vector<double>& err) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os.precision(17);
    os << "study,n,h,error\n";
    for (std::size_t k = 0; k < n.size(); ++k) os << study << ',' << n[k] << ',' << h[k] << ',' << err[k] << '\n';
}

// Compactly supported drive V(z) = 64 ((z/zv)(1 - z/zv))^3 on [0, zv].
Profile bump_profile(double zv) {
    return [zv](double z) {
        if (z <= 0.0 || z >= zv) return 0.0;
        const double s = (z / zv) * (1.0 - z / zv);
        return 64.0 * s * s * s;
    };
}

// ---------------------------------------------------------------------------

void spectral_closed_form(const VerifyOptions&, CriterionResult& r) {
    using State = std::array<double, 2>;
    namespace ode = boost::numeric::odeint;
    double worst = 0.0;
    const double z_end = 2.0;
    for (double xi : {0.5, 1.0, 2.0})
        for (int sigma : {1, -1})
            for (int with_source = 0; with_source < 2; ++with_source) {
                const Complex w0 = with_source ? Complex(0.3, -0.2) : Complex(1.0, 0.0);
                const ModeSource src =
                    with_source ? ModeSource([](double s) { return Complex(1.0 + 0.5 * std::cos(s), 0.0); }) : ModeSource{};
                const Complex closed = mode_evolve(xi, sigma, w0, z_end, src, 1.0);

                const double a3 = std::abs(xi) * std::abs(xi) * std::abs(xi);
                auto rhs = [&](const State& w, State& dw, double z) {
                    // dz w = -(i z xi - sigma |xi|^3) w + s
                    const Complex ww(w[0], w[1]);
                    Complex d = -Complex(-sigma * a3, z * xi) * ww;
                    if (src) d += src(z);
                    dw = {d.real(), d.imag()};
                };
                State w = {w0.real(), w0.imag()};
                ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(1e-15, 1e-15), rhs,
                                        w, 0.0, z_end, 1e-3);
                const Complex ref(w[0], w[1]);
                worst = std::max(worst, std::abs(closed - ref) / std::abs(ref));
            }
    r.report.at_most("spectral.max_relative_error", worst, 1e-8);
    r.summary = "max rel err vs RKF78 = " + fmt(worst);
}

void fd_vs_oracle(const VerifyOptions& o, CriterionResult& r) {
    const double period = 8.0, zmax = 4.0, k1 = 2.0 * kPi / period, zs = 2.0;
    auto g = [zs](double z) { return z > 0.0 && z < zs ? std::pow(z * (zs - z), 2) : 0.0; };
    std::vector<int> ns = {o.grid, 2 * o.grid, 4 * o.grid};
    std::vector<double> errs, hs;
    for (int n : ns) {
        DomainCase d;
        d.y_max = period;
        d.z_max = zmax;
        ProblemSpec s;
        s.domain = d;
        s.grid = make_grid(d, n, n, true);
        s.bc.psi_bottom = [k1](double y) { return std::sin(k1 * y) + 0.5 * std::cos(2.0 * k1 * y); };
        s.s_v = [k1, g](double y, double z) { return std::sin(k1 * y) * g(z); };
        const SolveResult fd = solve(s);

        HalfplaneProblem hp;
        hp.xi = {k1, -k1, 2.0 * k1, -2.0 * k1};
        hp.bc_data = {Complex(0.0, -0.5), Complex(0.0, 0.5), 0.25, 0.25};
        hp.s_v = {[g](double z) { return Complex(0.0, -0.5) * g(z); },
                  [g](double z) { return Complex(0.0, 0.5) * g(z); }, {}, {}};
        hp.support = zs;
        hp.z_nodes = s.grid.z_nodes();
        const SpectralSolution sol = halfplane_solve(hp);
        const auto yv = s.grid.y_nodes();
        const Eigen::MatrixXcd V = reconstruct(sol, sol.v_hat, yv);
        const Eigen::MatrixXcd P = reconstruct(sol, sol.psi_hat, yv);
        StatePair ref(s.grid);
        ref.v.values = V.real();
        ref.psi.values = P.real();
        const double imag = std::max(V.imag().cwiseAbs().maxCoeff(), P.imag().cwiseAbs().maxCoeff());
        r.report.at_most("oracle.hermitian_imag_" + std::to_string(n), imag, 1e-12);
        errs.push_back(relative_l2(fd.u, ref));
        hs.push_back(s.grid.hy());
        r.report.note("oracle.error_" + std::to_string(n), errs.back());
        if (!o.output_dir.empty() && n == ns.back())
            write_fields_csv(artifact(o, r, "oracle_fd_fields.csv"), fd.u, {{"case", "I-periodic"}});
    }
    const double o1 = order(errs[0], errs[1]), o2 = order(errs[1], errs[2]);
    r.report.at_least("oracle.order_" + std::to_string(ns[0]) + "_" + std::to_string(ns[1]), o1, 1.8);
    r.report.at_least("oracle.order_" + std::to_string(ns[1]) + "_" + std::to_string(ns[2]), o2, 1.8);
    r.report.at_most("oracle.error_finest", errs[2], 1e-2);
    if (!o.output_dir.empty()) write_convergence(artifact(o, r, "convergence_oracle.csv"), "oracle", ns, hs, errs);
    r.summary = "rel L2 " + fmt(errs[0]) + " -> " + fmt(errs[1]) + " -> " + fmt(errs[2]) + ", orders " + fmt(o1) +
                ", " + fmt(o2);
}

void uniqueness_zero(const VerifyOptions& o, CriterionResult& r) {
    double worst = 0.0;
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip, CaseTag::UpperStrip}) {
        DomainCase d;
        d.tag = tag;
        ProblemSpec s = make_spec(d, o.grid, o.grid);
        s.zero_order = true;
        const double e = norm_E0(solve(s).u);
        r.report.at_most("zero.case_" + to_string(tag), e, 1e-10);
        worst = std::max(worst, e);
    }
    r.summary = "max ||u||_E0 = " + fmt(worst);
}

void manufactured_convergence(const VerifyOptions& o, CriterionResult& r) {
    std::vector<int> ns = {o.grid, 2 * o.grid, 4 * o.grid};
    std::ostringstream sum;
    double slowest = 0.0;
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip}) {
        DomainCase d;
        d.tag = tag;
        d.y_max = 20.0;
        d.z_max = 6.0;
        d.H = 6.0;
        std::vector<double> errs, hs;
        for (int n : ns) {
            const ProblemSpec s = manufactured_spec(d, n, n, false);
            const auto t0 = std::chrono::steady_clock::now();
            const SolveResult res = solve(s);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            slowest = std::max(slowest, secs);
            errs.push_back(norm_E0(res.u - manufactured_state(s.grid)));
            hs.push_back(s.grid.hy());
            r.report.note("mms.case_" + to_string(tag) + ".error_" + std::to_string(n), errs.back());
            if (n == ns.back())
                r.report.at_most("mms.case_" + to_string(tag) + ".seconds_" + std::to_string(n), secs, 60.0);
        }
        const double o1 = order(errs[0], errs[1]), o2 = order(errs[1], errs[2]);
        r.report.at_least("mms.case_" + to_string(tag) + ".order_" + std::to_string(ns[0]) + "_" + std::to_string(ns[1]), o1, 1.8);
        r.report.at_least("mms.case_" + to_string(tag) + ".order_" + std::to_string(ns[1]) + "_" + std::to_string(ns[2]), o2, 1.8);
        if (!o.output_dir.empty())
            write_convergence(artifact(o, r, "convergence_mms_case_" + to_string(tag) + ".csv"), "mms_" + to_string(tag),
                              ns, hs, errs);
        sum << "case " << to_string(tag) << " orders " << fmt(o1) << ", " << fmt(o2) << "; ";
    }
    sum << "slowest solve " << fmt(slowest) << " s";
    r.summary = sum.str();
}

void energy_identity(const VerifyOptions& o, CriterionResult& r) {
    const double zv = 2.0;
    std::vector<double> mism;
    double min_above = 0.0, min_corrected = 0.0;
    for (int n : {2 * o.grid, 4 * o.grid}) {
        DomainCase d;
        d.y_max = 10.0;
        d.z_max = 10.0;
        ProblemSpec s = make_spec(d, n, n);
        s.bc.V = bump_profile(zv);
        const SolveResult res = solve_lifted(s);
        const EnergyProfile p = energy_profile(res.u, s);
        mism.push_back(energy_mismatch(p));
        r.report.note("energy.mismatch_" + std::to_string(n), mism.back());
        if (n == 2 * o.grid) {
            min_above = 1e300;
            min_corrected = 1e300;
            double min_all = 1e300;
            for (std::size_t j = 0; j < p.z.size(); ++j) {
                if (p.z[j] >= zv) min_above = std::min(min_above, p.dE_fd[j]);
                min_corrected = std::min(min_corrected, p.dE_fd[j] - p.dE_flux[j]);
                min_all = std::min(min_all, p.dE_fd[j]);
            }
            // Inside the drive support dE_fd carries the boundary flux and may be negative.
            r.report.note("energy.min_dE_fd_all_slices", min_all);
            if (!o.output_dir.empty()) {
                write_energy_csv(artifact(o, r, "energy.csv"), p);
                write_fields_csv(artifact(o, r, "energy_fields.csv"), res.u, {{"case", "I"}});
            }
        }
    }
    r.report.at_most("energy.mismatch_" + std::to_string(2 * o.grid), mism[0], 0.05);
    r.report.boolean("energy.mismatch_decreasing", mism[1] < mism[0], fmt(mism[0]) + " -> " + fmt(mism[1]));
    r.report.at_least("energy.min_dE_fd_above_drive", min_above, -1e-3, "slices z >= support of V");
    r.report.at_least("energy.min_dE_fd_minus_flux", min_corrected, -1e-3, "all slices");
    r.summary = "mismatch " + fmt(mism[0]) + " -> " + fmt(mism[1]) + ", min dE_fd (z >= " + fmt(zv) + ") = " +
                fmt(min_above) + ", min(dE_fd - flux) = " + fmt(min_corrected);
}

void lambda_nonpositive(const VerifyOptions& o, CriterionResult& r) {
    const int n = o.grid;
    DomainCase d;
    d.tag = CaseTag::UpperStrip;
    d.H = 2.0;
    d.z_max = 12.0;
    d.y_max = 16.0;
    ProblemSpec s = make_spec(d, n, n);
    s.zero_order = true;
    const LambdaMatrix built = build_lambda(s);
    const Eigen::MatrixXd exact = lambda_sine_matrix(n, d.y_max);
    std::mt19937 rng(o.seed);
    std::normal_distribution<double> normal;
    double worst_exact = -1e300, worst_built = -1e300;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd t(n - 1);
        for (auto& x : t) x = normal(rng);
        const double nn = t.squaredNorm();
        worst_exact = std::max(worst_exact, t.dot(exact * t) / nn);
        worst_built = std::max(worst_built, t.dot(built.entries * t) / nn);
    }
    r.report.at_most("lambda.exact_max_form_ratio", worst_exact, 1e-10);
    r.report.at_most("lambda.built_max_form_ratio", worst_built, 1e-10);
    r.report.note("lambda.built_asymmetry", built.asymmetry());
    if (!o.output_dir.empty()) write_matrix(artifact(o, r, "lambda_built.txt"), built.entries);
    r.summary = "max t.Lt/|t|^2: exact " + fmt(worst_exact) + ", built " + fmt(worst_built);
}

void transparent_splitting(const VerifyOptions& o, CriterionResult& r) {
    const int n = 2 * o.grid;
    DomainCase d;
    d.y_max = 16.0;
    d.z_max = 16.0;
    ProblemSpec s = make_spec(d, n, n);
    s.zero_order = true;
    // Gaussian at (3, 1), cut off smoothly so it vanishes for z >= 2.5 < H.
    s.s_v = [](double y, double z) {
        const double c = z < 2.5 ? std::pow(1.0 - (z / 2.5) * (z / 2.5), 3) : 0.0;
        return c * std::exp(-((y - 3.0) * (y - 3.0) + (z - 1.0) * (z - 1.0)));
    };
    const SplitResult sr = split_solve(s, 4.0);
    r.report.at_most("split.glued_vs_whole", sr.glued_difference, 1e-8);
    r.report.at_most("split.interface_psi", sr.interface_psi_mismatch, 1e-8);
    r.report.at_most("split.interface_v", sr.interface_v_mismatch, 1e-8);
    if (!o.output_dir.empty()) {
        DiagnosticsReport kv = r.report;
        write_key_values(artifact(o, r, "split_report.txt"), kv);
    }
    r.summary = "glued vs whole " + fmt(sr.glued_difference) + ", interface psi " + fmt(sr.interface_psi_mismatch);
}

void no_transport_lambda(const VerifyOptions& o, CriterionResult& r) {
    std::vector<double> diffs;
    std::vector<int> ns = {2 * o.grid, 4 * o.grid};
    for (int n : ns) {
        DomainCase d;
        d.tag = CaseTag::UpperStrip;
        d.H = 1.0;
        d.z_max = 5.0;
        d.y_max = 2.0 * kPi;
        ProblemSpec s;
        s.domain = d;
        s.transport = false;
        s.zero_order = false;
        s.grid = make_grid(d, n, 32, true);
        BuildOptions bo;
        bo.allow_eq1 = true;
        const LambdaMatrix built = build_lambda(s, bo);
        const Eigen::MatrixXd exact = lambda_periodic_matrix(n, d.y_max);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(built.entries - exact);
        diffs.push_back(svd.singularValues()(0));
        r.report.note("notransport.spectral_diff_" + std::to_string(n), diffs.back());
        r.report.at_most("notransport.asymmetry_" + std::to_string(n), built.asymmetry(), 1e-8);
    }
    r.report.at_most("notransport.spectral_diff_" + std::to_string(ns[0]), diffs[0], 1e-2);
    r.report.boolean("notransport.decreasing", diffs[1] < diffs[0], fmt(diffs[0]) + " -> " + fmt(diffs[1]));
    r.summary = "||L_built - L_exact||_2: " + fmt(diffs[0]) + " -> " + fmt(diffs[1]);
}

void hardy_property(const VerifyOptions& o, CriterionResult& r) {
    Grid g;
    g.ny = 4 * o.grid;
    g.nz = 8;
    g.y_max = 30.0;
    g.z_max = 1.0;
    std::mt19937 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        double c[3], b[3], l[3];
        for (int m = 0; m < 3; ++m) {
            c[m] = 2.0 * unit(rng) - 1.0;
            b[m] = 0.2 + 2.8 * unit(rng);
            l[m] = 1.0 + 7.0 * unit(rng);
        }
        const double freq = 6.0 * unit(rng);
        const Field f = sample(g, [&](double y, double z) {
            double s = 0.0;
            for (int m = 0; m < 3; ++m) s += c[m] * (1.0 - std::exp(-b[m] * y)) * std::exp(-y / l[m]);
            return (1.0 + 0.5 * std::sin(freq * z)) * s;
        });
        worst = std::max(worst, hardy_ratio(f, 1).ratio);
    }
    r.report.at_most("hardy.max_ratio_order1", worst, 4.0 * (1.0 + 1e-2), "classical constant 4");
    r.summary = "max ratio over 50 fields = " + fmt(worst);
}

void trace_recovery_order(const VerifyOptions& o, CriterionResult& r) {
    std::vector<int> ns = {o.grid, 2 * o.grid, 4 * o.grid};
    std::ostringstream sum;
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip}) {
        std::vector<double> bottom, top;
        for (int n : ns) {
            DomainCase d;
            d.tag = tag;
            d.y_max = 10.0;
            d.z_max = 10.0;
            d.H = 4.0;
            ProblemSpec s = make_spec(d, n, n);
            s.s_v = [](double y, double z) { return std::exp(-((y - 3.0) * (y - 3.0) + (z - 1.0) * (z - 1.0))); };
            const TraceReport t = trace_recovery(solve(s).u, s);
            bottom.push_back(t.max_bottom);
            top.push_back(t.max_top);
            r.report.note("trace.case_" + to_string(tag) + ".bottom_" + std::to_string(n), t.max_bottom);
        }
        const std::string c = "trace.case_" + to_string(tag);
        const double o1 = order(bottom[0], bottom[1]), o2 = order(bottom[1], bottom[2]);
        r.report.at_least(c + ".bottom_order_" + std::to_string(ns[0]) + "_" + std::to_string(ns[1]), o1, 1.0);
        r.report.at_least(c + ".bottom_order_" + std::to_string(ns[1]) + "_" + std::to_string(ns[2]), o2, 1.0);
        sum << "case " << to_string(tag) << " z=0 orders " << fmt(o1) << ", " << fmt(o2);
        if (tag == CaseTag::Strip) {
            const double t1 = order(top[0], top[1]), t2 = order(top[1], top[2]);
            r.report.at_least(c + ".top_order_" + std::to_string(ns[0]) + "_" + std::to_string(ns[1]), t1, 1.0);
            r.report.at_least(c + ".top_order_" + std::to_string(ns[1]) + "_" + std::to_string(ns[2]), t2, 1.0);
            sum << ", z=H orders " << fmt(t1) << ", " << fmt(t2);
        } else {
            sum << "; ";
        }
    }
    r.summary = sum.str();
}

void scaling_identity(const VerifyOptions&, CriterionResult& r) {
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const ScalingExponents e = scaling_exponents(0.1 * k);
        worst = std::max(worst, std::abs(e.ekman - 0.5));
    }
    const ScalingExponents half = scaling_exponents(0.5);
    r.report.at_most("scaling.ekman_max_deviation", worst, 4.0 * std::numeric_limits<double>::epsilon());
    r.report.at_most("scaling.ey_half", std::abs(half.ey - 0.4), 4.0 * std::numeric_limits<double>::epsilon());
    r.report.at_most("scaling.ez_half", std::abs(half.ez - 0.2), 4.0 * std::numeric_limits<double>::epsilon());
    r.summary = "max |ekman - 1/2| = " + fmt(worst) + ", alpha=1/2 -> (" + fmt(half.ey) + ", " + fmt(half.ez) + ")";
}

struct Entry {
    const char* title;
    void (*run)(const VerifyOptions&, CriterionResult&);
};

const Entry kEntries[kCriterionCount] = {
    {"spectral closed form vs ODE integration", spectral_closed_form},
    {"periodic FD solve vs half-plane oracle", fd_vs_oracle},
    {"zero data gives zero solution", uniqueness_zero},
    {"manufactured-solution convergence", manufactured_convergence},
    {"energy identity and monotonicity", energy_identity},
    {"Lambda non-positivity", lambda_nonpositive},
    {"transparent splitting", transparent_splitting},
    {"no-transport Lambda vs -1/|xi|", no_transport_lambda},
    {"Hardy inequality", hardy_property},
    {"trace recovery", trace_recovery_order},
    {"scaling exponents", scaling_identity},
};

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& options) {
    if (id < 1 || id > kCriterionCount) throw DomainError("criterion id out of range");
    CriterionResult r;
    r.id = id;
    r.title = kEntries[id - 1].title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!options.output_dir.empty()) std::filesystem::create_directories(options.output_dir);
        kEntries[id - 1].run(options, r);
        r.pass = !r.report.checks.empty() && r.report.all_passed();
        if (!r.pass) {
            std::string f;
            for (const auto& name : r.report.failures()) f += (f.empty() ? "" : ", ") + name;
            r.summary += " [failed: " + f + "]";
        }
    } catch (const std::exception& e) {
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
        r.report.boolean("exception", false, e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& options, const std::vector<int>& ids) {
    std::vector<CriterionResult> out;
    if (ids.empty())
        for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
    else
        for (int id : ids) out.push_back(run_criterion(id, options));
    return out;
}

}  // namespace eqlayer
