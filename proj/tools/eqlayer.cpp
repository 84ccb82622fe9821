// eqlayer command-line driver: solve, oracle, lambda, split, verify, scaling.

#include <CLI11.hpp>
#include <unsupported/Eigen/FFT>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "eqlayer/config.hpp"
#include "eqlayer/diagnostics.hpp"
#include "eqlayer/errors.hpp"
#include "eqlayer/linsolve.hpp"
#include "eqlayer/norms.hpp"
#include "eqlayer/operators.hpp"
#include "eqlayer/report.hpp"
#include "eqlayer/spectral.hpp"
#include "eqlayer/transparent.hpp"
#include "eqlayer/verification.hpp"

namespace fs = std::filesystem;
using namespace eqlayer;

namespace {

enum Exit { kOk = 0, kTolerance = 1, kBadInput = 2, kSolverFailure = 3 };

struct Common {
    std::string config;
    std::string out = "eqlayer_out";
    std::string case_name;
    bool zero_order = false;
    bool no_transport = false;
    bool periodic = false;
    int ny = 0;
    int nz = 0;
    unsigned seed = 20240611;
    double solver_tol = 1e-10;
    std::string method = "direct";
    bool unsafe_eq1 = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("-c,--config", c.config, "key=value configuration file")->check(CLI::ExistingFile);
    app->add_option("-o,--out", c.out, "output directory");
    app->add_option("--case", c.case_name, "domain case: I, II or III");
    app->add_flag("--zero-order", c.zero_order, "include the zero-order coupling term");
    app->add_flag("--no-transport", c.no_transport, "drop the z d/dy transport term");
    app->add_flag("--periodic", c.periodic, "periodic in y with period Ymax");
    app->add_option("--ny", c.ny, "y intervals (overrides config)")->check(CLI::PositiveNumber);
    app->add_option("--nz", c.nz, "z intervals (overrides config)")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "seed for randomized test banks");
    app->add_option("--solver-tol", c.solver_tol, "linear residual tolerance");
    app->add_option("--method", c.method, "direct or iterative")->check(CLI::IsMember({"direct", "iterative"}));
}

struct Run {
    Common opt;
    Config cfg;
    RunManifest manifest;

    std::string path(const std::string& name) {
        const std::string p = (fs::path(opt.out) / name).string();
        manifest.artifacts.push_back(p);
        return p;
    }
    SolverOptions solver() const {
        SolverOptions s;
        s.tolerance = opt.solver_tol;
        s.method = opt.method == "iterative" ? SolverOptions::Method::Iterative : SolverOptions::Method::Direct;
        return s;
    }
    void finish(const std::string& stage, int status) {
        manifest.stages.emplace_back(stage, status);
        manifest.write(path("manifest.txt"));
    }
};

void load(Run& run) {
    Common& o = run.opt;
    if (!o.config.empty()) {
        run.cfg = load_config(o.config);
    } else {
        run.cfg.spec = make_spec(DomainCase{}, 64, 64);
    }
    ProblemSpec& s = run.cfg.spec;
    if (!o.case_name.empty()) {
        try {
            s.domain.tag = case_from_string(o.case_name);
        } catch (const Error& e) {
            throw ConfigError(std::string("--case: ") + e.what());
        }
    }
    if (o.zero_order) s.zero_order = true;
    if (o.no_transport) s.transport = false;
    if (o.seed == 20240611 && !o.config.empty()) o.seed = run.cfg.seed;
    const bool periodic = o.periodic || s.grid.periodic_y;
    s.grid = make_grid(s.domain, o.ny > 0 ? o.ny : s.grid.ny, o.nz > 0 ? o.nz : s.grid.nz, periodic);
    const ValidationReport rep = validate(s);
    if (!rep.ok()) {
        std::string msg;
        for (const auto& v : rep.violations) msg += (msg.empty() ? "" : "; ") + v;
        throw ConfigError(msg);
    }
    fs::create_directories(o.out);
    run.manifest.config_path = o.config.empty() ? "(defaults)" : o.config;
    run.manifest.spec_echo = describe_spec(s) + "seed=" + std::to_string(o.seed) + "\n";
    run.manifest.output_dir = o.out;
}

int report_status(const DiagnosticsReport& rep) {
    if (rep.all_passed()) return kOk;
    for (const auto& f : rep.failures()) std::cerr << "failed check: " << f << '\n';
    return kTolerance;
}

int cmd_solve(Run& run) {
    const ProblemSpec& s = run.cfg.spec;
    const SolveResult res = solve(s, run.solver());
    DiagnosticsReport rep;
    rep.at_most("linear_residual", res.residual_norm, run.opt.solver_tol);
    rep.note("iterations", static_cast<double>(res.iterations));
    rep.note("wallclock_seconds", res.wallclock);
    rep.note("norm_E0", norm_E0(res.u));
    rep.note("norm_E00", norm_E00(res.u));
    rep.note("norm_E0tilde", norm_E0tilde(res.u));
    if (s.grid.ny >= 16 && s.grid.nz >= 16)
        rep.note("weak_residual", weak_residual(res.u, s, bump_bank(s.grid, 20, run.opt.seed)));
    const EnergyProfile p = energy_profile(res.u, s);
    rep.note("energy_mismatch", energy_mismatch(p));
    write_fields_csv(run.path("fields.csv"), res.u, {{"case", to_string(s.domain.tag)}});
    write_energy_csv(run.path("energy.csv"), p);
    write_key_values(run.path("diagnostics.txt"), rep);
    write_key_values(std::cout, rep);
    const int status = report_status(rep);
    run.finish("solve", status);
    return status;
}

// Transforms s(y, z) along y at every z level and interpolates linearly in z.
struct ModeTable {
    std::vector<double> z;
    Eigen::MatrixXcd coef;  // (k, level), k = 0..n-1 in FFT order
};

ModeTable transform_levels(const Grid& g, const Source& src) {
    const int n = g.ny;
    ModeTable t{g.z_nodes(), Eigen::MatrixXcd::Zero(n, g.nz + 1)};
    if (!src) return t;
    Eigen::FFT<double> fft;
    std::vector<double> row(n);
    std::vector<std::complex<double>> out;
    for (int j = 0; j <= g.nz; ++j) {
        for (int i = 0; i < n; ++i) row[i] = src(g.y(i), g.z(j));
        fft.fwd(out, row);
        for (int k = 0; k < n; ++k) t.coef(k, j) = out[k] / static_cast<double>(n);
    }
    return t;
}

ModeSource interpolate(const ModeTable& t, int k) {
    if (t.coef.row(k).cwiseAbs().maxCoeff() == 0.0) return {};
    const Eigen::VectorXcd c = t.coef.row(k).transpose();
    const std::vector<double> z = t.z;
    return [c, z](double s) {
        if (s <= z.front()) return c(0);
        if (s >= z.back()) return c(c.size() - 1);
        const auto it = std::upper_bound(z.begin(), z.end(), s);
        const int j = static_cast<int>(it - z.begin()) - 1;
        const double w = (s - z[j]) / (z[j + 1] - z[j]);
        return (1.0 - w) * c(j) + w * c(j + 1);
    };
}

double source_support(const Grid& g, const ModeTable& a, const ModeTable& b) {
    int last = -1;
    for (int j = 0; j <= g.nz; ++j)
        if (a.coef.col(j).cwiseAbs().maxCoeff() > 0.0 || b.coef.col(j).cwiseAbs().maxCoeff() > 0.0) last = j;
    if (last < 0) return 0.0;
    return g.z(std::min(last + 1, g.nz));
}

int cmd_oracle(Run& run) {
    const ProblemSpec& s = run.cfg.spec;
    const Grid& g = s.grid;
    if (s.domain.tag != CaseTag::QuarterPlane || !g.periodic_y)
        throw ConfigError("oracle needs case I with periodic_y = true");
    if (s.zero_order || !s.transport) throw ConfigError("oracle covers the transport problem without zero-order term");
    const double period = g.y_max;
    const int n = g.ny;

    std::vector<double> bottom(n);
    for (int i = 0; i < n; ++i) bottom[i] = eval(s.bc.psi_bottom, g.y(i));
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> bhat;
    fft.fwd(bhat, bottom);
    const ModeTable tv = transform_levels(g, s.s_v), tp = transform_levels(g, s.s_psi);

    HalfplaneProblem hp;
    hp.z_nodes = g.z_nodes();
    hp.support = source_support(g, tv, tp);
    for (int k = 0; k < n; ++k) {
        const int signed_k = k <= n / 2 ? k : k - n;
        hp.xi.push_back(2.0 * 3.14159265358979323846 * signed_k / period);
        hp.bc_data.push_back(bhat[k] / static_cast<double>(n));
        hp.s_v.push_back(interpolate(tv, k));
        hp.s_psi.push_back(interpolate(tp, k));
    }
    const SpectralSolution sol = halfplane_solve(hp);
    const Eigen::MatrixXcd V = reconstruct(sol, sol.v_hat, g.y_nodes());
    const Eigen::MatrixXcd P = reconstruct(sol, sol.psi_hat, g.y_nodes());
    StatePair ref(g);
    ref.v.values = V.real();
    ref.psi.values = P.real();

    const SolveResult fd = solve(s, run.solver());
    DiagnosticsReport rep;
    rep.at_most("linear_residual", fd.residual_norm, run.opt.solver_tol);
    rep.note("relative_l2_fd_vs_oracle", relative_l2(fd.u, ref));
    rep.note("oracle_imaginary_part", std::max(V.imag().cwiseAbs().maxCoeff(), P.imag().cwiseAbs().maxCoeff()));
    write_spectrum_csv(run.path("spectrum.csv"), sol);
    write_fields_csv(run.path("oracle_fields.csv"), ref, {{"source", "oracle"}});
    write_fields_csv(run.path("fd_fields.csv"), fd.u, {{"source", "fd"}});
    write_key_values(run.path("diagnostics.txt"), rep);
    write_key_values(std::cout, rep);
    const int status = report_status(rep);
    run.finish("oracle", status);
    return status;
}

int cmd_lambda(Run& run, double form_tol) {
    const ProblemSpec& s = run.cfg.spec;
    BuildOptions bo;
    bo.allow_eq1 = run.opt.unsafe_eq1;
    const LambdaMatrix built = build_lambda(s, bo);
    const Eigen::MatrixXd exact =
        s.grid.periodic_y ? lambda_periodic_matrix(s.grid.ny, s.grid.y_max) : lambda_sine_matrix(s.grid.ny, s.grid.y_max);
    std::mt19937 rng(run.opt.seed);
    std::normal_distribution<double> normal;
    double worst_built = -1e300, worst_exact = -1e300;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd t(built.entries.rows());
        for (auto& x : t) x = normal(rng);
        worst_built = std::max(worst_built, t.dot(built.entries * t) / t.squaredNorm());
        worst_exact = std::max(worst_exact, t.dot(exact * t) / t.squaredNorm());
    }
    DiagnosticsReport rep;
    rep.at_most("built_max_form_ratio", worst_built, form_tol);
    rep.at_most("exact_max_form_ratio", worst_exact, form_tol);
    rep.note("built_asymmetry", built.asymmetry());
    if (exact.rows() == built.entries.rows()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(built.entries - exact);
        rep.note("spectral_norm_difference", svd.singularValues()(0));
    }
    write_matrix(run.path("lambda_built.txt"), built.entries);
    write_matrix(run.path("lambda_exact.txt"), exact);
    write_key_values(run.path("lambda_report.txt"), rep);
    write_key_values(std::cout, rep);
    const int status = report_status(rep);
    run.finish("lambda", status);
    return status;
}

int cmd_split(Run& run, std::optional<double> H, double glue_tol) {
    const ProblemSpec& s = run.cfg.spec;
    BuildOptions bo;
    bo.allow_eq1 = run.opt.unsafe_eq1;
    const SplitResult r = split_solve(s, H.value_or(s.domain.H), bo);
    DiagnosticsReport rep;
    rep.at_most("glued_vs_whole", r.glued_difference, glue_tol);
    rep.at_most("interface_psi_mismatch", r.interface_psi_mismatch, glue_tol);
    rep.at_most("interface_v_mismatch", r.interface_v_mismatch, glue_tol);
    write_fields_csv(run.path("whole_fields.csv"), r.whole, {{"part", "whole"}});
    write_fields_csv(run.path("bottom_fields.csv"), r.bottom, {{"part", "bottom"}});
    write_fields_csv(run.path("top_fields.csv"), r.top, {{"part", "top"}});
    write_fields_csv(run.path("glued_fields.csv"), r.glued, {{"part", "glued"}});
    write_matrix(run.path("lambda_interface.txt"), r.lambda.entries);
    write_key_values(run.path("split_report.txt"), rep);
    write_key_values(std::cout, rep);
    const int status = report_status(rep);
    run.finish("split", status);
    return status;
}

int cmd_verify(int grid, unsigned seed, const std::string& out, const std::vector<int>& ids) {
    VerifyOptions vo;
    vo.grid = grid;
    vo.seed = seed;
    vo.output_dir = out;
    fs::create_directories(out);
    RunManifest manifest;
    manifest.config_path = "(built-in battery)";
    manifest.spec_echo = "grid=" + std::to_string(grid) + "\nseed=" + std::to_string(seed) + "\n";
    manifest.output_dir = out;
    std::vector<std::string> failed;
    const std::vector<CriterionResult> results = run_verification(vo, ids);
    for (const auto& r : results) {
        std::printf("[%s] %2d %-42s %7.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                    r.summary.c_str());
        char name[32];
        std::snprintf(name, sizeof name, "criterion_%02d.txt", r.id);
        const std::string p = (fs::path(out) / name).string();
        write_key_values(p, r.report);
        manifest.artifacts.push_back(p);
        manifest.artifacts.insert(manifest.artifacts.end(), r.artifacts.begin(), r.artifacts.end());
        manifest.stages.emplace_back("criterion_" + std::to_string(r.id), r.pass ? kOk : kTolerance);
        for (const auto& f : r.report.failures()) failed.push_back(std::to_string(r.id) + ":" + f);
    }
    manifest.write((fs::path(out) / "manifest.txt").string());
    for (const auto& f : failed) std::fprintf(stderr, "failed check: %s\n", f.c_str());
    return failed.empty() ? kOk : kTolerance;
}

int cmd_scaling(const std::vector<double>& alphas) {
    std::printf("%8s %10s %10s %10s\n", "alpha", "ey", "ez", "ekman");
    for (double a : alphas) {
        const ScalingExponents e = scaling_exponents(a);
        std::printf("%8.4g %10.6g %10.6g %10.6g\n", a, e.ey, e.ez, e.ekman);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degenerate equatorial boundary-layer solver"};
    app.require_subcommand(1);

    Run run;
    auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write fields and diagnostics");
    auto* oracle_cmd = app.add_subcommand("oracle", "compare a periodic case-I solve with the Fourier oracle");
    auto* lambda_cmd = app.add_subcommand("lambda", "build the transparent operator of a case-III problem");
    auto* split_cmd = app.add_subcommand("split", "solve a case-I problem whole and split at H");
    for (auto* c : {solve_cmd, oracle_cmd, lambda_cmd, split_cmd}) add_common(c, run.opt);
    for (auto* c : {lambda_cmd, split_cmd})
        c->add_flag("--unsafe-eq1", run.opt.unsafe_eq1, "allow the operator build without the zero-order term");

    double form_tol = 1e-10;
    lambda_cmd->add_option("--form-tol", form_tol, "tolerance for t.Lambda t / |t|^2");
    double glue_tol = 1e-8;
    std::optional<double> split_h;
    split_cmd->add_option("--H", split_h, "interface height (defaults to H from the config)");
    split_cmd->add_option("--glue-tol", glue_tol, "tolerance for glued-vs-whole and interface mismatch");

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance battery");
    int grid = 64;
    unsigned verify_seed = 20240611;
    std::string verify_out = "eqlayer_verify";
    std::vector<int> only;
    verify_cmd->add_option("--grid", grid, "base grid size G (studies use G, 2G, 4G)")->check(CLI::Range(16, 1024));
    verify_cmd->add_option("--seed", verify_seed, "seed for randomized banks");
    verify_cmd->add_option("-o,--out", verify_out, "output directory");
    verify_cmd->add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, kCriterionCount));

    auto* scaling_cmd = app.add_subcommand("scaling", "print the boundary-layer exponent table");
    std::vector<double> alphas = {0.5};
    scaling_cmd->add_option("--alpha", alphas, "alpha values in (0, 1]")->check(CLI::Range(1e-12, 1.0));

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) return cmd_verify(grid, verify_seed, verify_out, only);
        if (scaling_cmd->parsed()) return cmd_scaling(alphas);
        load(run);
        if (run.opt.unsafe_eq1 && !run.cfg.spec.zero_order)
            std::cerr << "warning: --unsafe-eq1: operator built without the zero-order term, uniqueness is not "
                         "guaranteed\n";
        if (solve_cmd->parsed()) return cmd_solve(run);
        if (oracle_cmd->parsed()) return cmd_oracle(run);
        if (lambda_cmd->parsed()) return cmd_lambda(run, form_tol);
        if (split_cmd->parsed()) return cmd_split(run, split_h, glue_tol);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadInput;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kBadInput;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kBadInput;
    } catch (const ContractViolation& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    }
    return kOk;
}
