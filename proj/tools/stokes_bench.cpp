/**
 * @file stokes_bench.cpp
 * @brief Benchmark driver: convergence studies for the CR / EP / Post methods,
 *        iteration-operator spectra, and the RT0-projected comparison. Emits
 *        one CSV per (case, method, viscosity) plus a human-readable summary.
 *
 * Exit codes: 0 success, 1 solver failure, 2 bad configuration.
 */

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stokesfem/stokesfem.hpp"

namespace {

using namespace stokesfem;

void print_rows(const std::vector<StudyRow>& rows) {
    std::printf("%12s %12s %12s %12s %12s %7s %10s\n", "h", "eU0", "eP0", "eU1", "eUD", "iters",
                "seconds");
    for (const StudyRow& r : rows)
        std::printf("%12.5e %12.5e %12.5e %12.5e %12.5e %7d %10.3f\n", r.h, r.e0_u, r.e0_p, r.e1,
                    r.eD, r.iters, r.seconds);
}

Method parse_method(const std::string& name) {
    if (name == "cr") return Method::CR;
    if (name == "ep") return Method::EP;
    if (name == "post") return Method::Post;
    throw CLI::ValidationError("--method", "expected cr|ep|post");
}

struct CommonArgs {
    std::string case_name = "sinus";
    double nu = 1.0;
    std::vector<int> ns;
    std::optional<double> grading;
    std::string out_dir = ".";
};

void validate_common(const CommonArgs& a) {
    if (!(a.nu > 0.0)) throw CLI::ValidationError("--nu", "viscosity must be positive");
    if (a.ns.empty()) throw CLI::ValidationError("--n", "mesh-size list must not be empty");
    for (std::size_t i = 0; i < a.ns.size(); ++i) {
        if (a.ns[i] < 1) throw CLI::ValidationError("--n", "mesh sizes must be >= 1");
        if (i > 0 && a.ns[i] <= a.ns[i - 1])
            throw CLI::ValidationError("--n", "mesh sizes must be strictly increasing");
    }
    if (a.grading && !(*a.grading >= 1.0))
        throw CLI::ValidationError("--grading", "grading must be >= 1");
}

StudyOptions make_options(const CommonArgs& a, int post_iters, double eps) {
    StudyOptions opts;
    opts.post_iters = post_iters;
    opts.eps = eps;
    opts.grading = a.grading.value_or(a.case_name == "lowreg" ? 2.0 : 1.0);
    return opts;
}

int run_study(const CommonArgs& args, const std::string& method_str,
              std::optional<double> lambda, int post_iters, double eps) {
    validate_common(args);
    const Method method = parse_method(method_str);
    const ManufacturedCase cs = make_case(args.case_name);
    const StudyOptions opts = make_options(args, post_iters, eps);
    if (lambda && !(*lambda > 0.0)) throw CLI::ValidationError("--lambda", "lambda must be positive");

    const StudyReport report = convergence_study(cs, method, args.nu, lambda, args.ns, opts);

    std::printf("case=%s method=%s nu=%g lambda=%g grading=%g\n", report.case_name.c_str(),
                method_name(report.method).c_str(), report.nu, report.lambda, opts.grading);
    print_rows(report.rows);
    if (report.rows.size() >= 2)
        std::printf("rates: tau_u=%.3f tau_p=%.3f\n", report.tau_u, report.tau_p);
    if (!report.cr_rows.empty()) {
        std::printf("first-step baseline (cr):\n");
        print_rows(report.cr_rows);
        if (report.cr_rows.size() >= 2)
            std::printf("baseline rates: tau_u=%.3f tau_p=%.3f\n", report.cr_tau_u,
                        report.cr_tau_p);
    }

    std::filesystem::create_directories(args.out_dir);
    const auto path = std::filesystem::path(args.out_dir) /
                      csv_filename(report.case_name, method_name(report.method), report.nu);
    write_csv(path, report.rows);
    std::printf("csv: %s\n", path.string().c_str());
    return 0;
}

int run_spectrum(int n, const std::vector<double>& lambdas, const std::string& pair,
                 int max_pressure_dofs) {
    if (n < 1) throw CLI::ValidationError("--n", "mesh size must be >= 1");
    if (lambdas.empty()) throw CLI::ValidationError("--lambda", "need at least one lambda");
    const Mesh mesh = structured_unit_square(n);
    const SpaceKind kind = pair == "p1" ? SpaceKind::P1Vector : SpaceKind::CRVector;
    const DofMap dm = make_dofmap(mesh, kind);
    const AssembledOperator A = assemble_stiffness(mesh, dm);
    const AssembledOperator B = assemble_coupling(mesh, dm);
    const Vector M = assemble_pressure_mass(mesh);

    double prev = 2.0;
    bool monotone = true;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw CLI::ValidationError("--lambda", "lambda must be positive");
        const SpectrumResult s =
            iteration_matrix_spectrum(A.matrix, B.matrix, M, lambda, max_pressure_dofs);
        std::printf("lambda=%g rho=%.12f restricted_dim=%d kernel_dim=%d\n", lambda, s.rho,
                    static_cast<int>(s.eigenvalues.size()), s.kernel_dim);
        if (s.rho > prev + 1e-12) monotone = false;
        prev = s.rho;
    }
    std::printf("monotone decrease in lambda: %s\n", monotone ? "PASS" : "FAIL");
    return monotone ? 0 : 1;
}

int run_compare_rt(const CommonArgs& args, double eps) {
    validate_common(args);
    const ManufacturedCase cs = make_case(args.case_name);
    const StudyOptions opts = make_options(args, 1, eps);
    const RtCompareReport rep = rt_compare_study(cs, args.nu, args.ns, opts);

    std::printf("case=%s nu=%g (RT0-projected right-hand side)\n", cs.name.c_str(), args.nu);
    std::printf("stage 1: cr with RT0 loads\n");
    print_rows(rep.cr_stage.rows);
    std::printf("stage 2: one post-processing step, lambda=1\n");
    print_rows(rep.post_stage.rows);
    for (std::size_t i = 0; i < rep.cr_stage.rows.size(); ++i) {
        const StudyRow& a = rep.cr_stage.rows[i];
        const StudyRow& b = rep.post_stage.rows[i];
        const double dp = a.e0_p > 0 ? (b.e0_p - a.e0_p) / a.e0_p * 100.0 : 0.0;
        std::printf("h=%.5e velocity %.3e -> %.3e, pressure change %+.2f%%\n", a.h, a.e0_u, b.e0_u,
                    dp);
    }

    std::filesystem::create_directories(args.out_dir);
    const auto dir = std::filesystem::path(args.out_dir);
    const auto path1 = dir / csv_filename(cs.name, "cr-rt0", args.nu);
    const auto path2 = dir / csv_filename(cs.name, "post-rt0", args.nu);
    write_csv(path1, rep.cr_stage.rows);
    write_csv(path2, rep.post_stage.rows);
    std::printf("csv: %s\ncsv: %s\n", path1.string().c_str(), path2.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stokes benchmark: coercive P1xP0 discretization, iterative "
                 "post-processing, and the Crouzeix-Raviart baseline"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string method_str = "cr";
    std::optional<double> lambda;
    int post_iters = 8;
    double eps = 1e-12;

    CLI::App* study = app.add_subcommand("study", "convergence study over a mesh family");
    study->add_option("--case", args.case_name, "test case: linear|sinus|lowreg")
        ->check(CLI::IsMember({"linear", "sinus", "lowreg"}));
    study->add_option("--method", method_str, "method: cr|ep|post")
        ->check(CLI::IsMember({"cr", "ep", "post"}));
    study->add_option("--nu", args.nu, "viscosity");
    study->add_option("--lambda", lambda, "stabilization parameter (defaults per method and nu)");
    study->add_option("--n", args.ns, "comma list of mesh subdivisions, increasing")
        ->delimiter(',');
    study->add_option("--post-iters", post_iters, "max post-processing iterations");
    study->add_option("--eps", eps, "stopping tolerance |dP|_M <= eps |U|_A");
    study->add_option("--grading", args.grading, "mesh grading exponent (default 2 for lowreg)");
    study->add_option("--out", args.out_dir, "output directory for CSV files");

    int spec_n = 4;
    std::vector<double> spec_lambdas{1.0, 10.0};
    std::string spec_pair = "cr";
    int spec_cap = 400;
    CLI::App* spectrum = app.add_subcommand("spectrum", "iteration-operator spectral radius");
    spectrum->add_option("--n", spec_n, "mesh subdivisions");
    spectrum->add_option("--lambda", spec_lambdas, "lambda values")->delimiter(',');
    spectrum->add_option("--pair", spec_pair, "velocity/pressure pair: cr|p1")
        ->check(CLI::IsMember({"cr", "p1"}));
    spectrum->add_option("--max-pressure-dofs", spec_cap, "dense-path size limit");

    CLI::App* compare = app.add_subcommand("compare-rt", "RT0-projected loads + one post step");
    compare->add_option("--case", args.case_name, "test case: linear|sinus|lowreg")
        ->check(CLI::IsMember({"linear", "sinus", "lowreg"}));
    compare->add_option("--nu", args.nu, "viscosity");
    compare->add_option("--n", args.ns, "comma list of mesh subdivisions, increasing")
        ->delimiter(',');
    compare->add_option("--grading", args.grading, "mesh grading exponent");
    compare->add_option("--eps", eps, "post-processing stopping tolerance");
    compare->add_option("--out", args.out_dir, "output directory for CSV files");

    try {
        app.parse(argc, argv);
        if (study->parsed()) return run_study(args, method_str, lambda, post_iters, eps);
        if (spectrum->parsed()) return run_spectrum(spec_n, spec_lambdas, spec_pair, spec_cap);
        if (compare->parsed()) return run_compare_rt(args, eps);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        if (!e.residual_history.empty()) {
            std::cerr << "residual history:";
            for (double r : e.residual_history) std::cerr << ' ' << r;
            std::cerr << "\n";
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
