#pragma once

/**
 * @file study.hpp
 * @brief Convergence studies over mesh families, least-squares rate fitting,
 *        and CSV emission (write-then-rename, exact round trip).
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stokesfem/cases.hpp"
#include "stokesfem/errors.hpp"
#include "stokesfem/mesh.hpp"
#include "stokesfem/solvers.hpp"

namespace stokesfem {

struct StudyRow {
    double h = 0.0;
    double e0_u = 0.0;
    double e0_p = 0.0;
    double e1 = 0.0;
    double eD = 0.0;
    int iters = 0;
    double seconds = 0.0;
};

struct StudyReport {
    std::string case_name;
    Method method = Method::CR;
    double nu = 1.0;
    double lambda = 1.0;
    std::vector<StudyRow> rows;      ///< sorted by decreasing h
    double tau_u = 0.0;              ///< least-squares slope of log e0_u vs log h
    double tau_p = 0.0;

    // Post studies also carry the first-step baseline and per-row checks.
    std::vector<StudyRow> cr_rows;
    double cr_tau_u = 0.0;
    double cr_tau_p = 0.0;
    std::vector<BoundCheck> robust_bound;    ///< EP rows: pressure-robust estimate
    std::vector<BoundCheck> combined_bound;  ///< Post rows: combined transfer bound
    std::vector<BoundCheck> velocity_bound;  ///< Post rows: velocity transfer bound
    std::vector<double> ratio_after_one;     ///< Post rows: eD/e1 after one iteration
    std::vector<double> ratio_after_full;    ///< Post rows: eD/e1 at the returned solution
    std::vector<std::vector<double>> divergence_traces; ///< Post rows: |M^{-1/2} B U^n|_2 per step
};

struct StudyOptions {
    int post_iters = 8;
    double eps = 1e-12;
    double grading = 1.0; ///< 1 = uniform; > 1 grades toward `center`
    Vec2 center{0.5, 0.5};
    Diagonal diagonal = Diagonal::Right;
    LoadMode cr_load = LoadMode::Direct;
};

inline Mesh build_study_mesh(int n, const StudyOptions& opts) {
    if (opts.grading > 1.0) return graded_unit_square(n, opts.center, opts.grading, opts.diagonal);
    return structured_unit_square(n, opts.diagonal);
}

/// Least-squares slope of log(error) against log(h); rows with vanishing error
/// are skipped, fewer than two usable rows give 0.
inline double fit_rate(const std::vector<StudyRow>& rows, double StudyRow::* field) {
    std::vector<double> xs, ys;
    for (const StudyRow& r : rows) {
        const double e = r.*field;
        if (e > 1e-300) {
            xs.push_back(std::log(r.h));
            ys.push_back(std::log(e));
        }
    }
    if (xs.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
}

inline std::string method_name(Method m) {
    switch (m) {
    case Method::CR: return "cr";
    case Method::EP: return "ep";
    case Method::Post: return "post";
    }
    return "?";
}

inline StudyRow make_row(double h, const ErrorReport& e, int iters, double seconds) {
    return StudyRow{h, e.e0_u, e.e0_p, e.e1, e.eD, iters, seconds};
}

/**
 * Run one method over a decreasing-h mesh family and fit the average
 * convergence rates. Mesh sizes must be strictly increasing n (= strictly
 * decreasing h); at least two sizes are needed for rates.
 */
inline StudyReport convergence_study(const ManufacturedCase& cs, Method method, double nu,
                                     std::optional<double> lambda_opt, const std::vector<int>& ns,
                                     const StudyOptions& opts = {}) {
    if (ns.empty()) throw std::invalid_argument("convergence_study: empty mesh-size list");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 1) throw std::invalid_argument("convergence_study: mesh sizes must be >= 1");
        if (i > 0 && ns[i] <= ns[i - 1])
            throw std::invalid_argument("convergence_study: mesh sizes must decrease strictly");
    }
    const double lambda = lambda_opt.value_or(default_lambda(method, nu));

    StudyReport report;
    report.case_name = cs.name;
    report.method = method;
    report.nu = nu;
    report.lambda = lambda;

    for (int n : ns) {
        const Mesh mesh = build_study_mesh(n, opts);
        const double h = 1.0 / n;
        switch (method) {
        case Method::CR: {
            const StokesSolution sol = solve_cr(mesh, cs, nu, CrOptions{opts.cr_load});
            const ErrorReport err = compute_errors(mesh, cs, sol, SpaceKind::CRVector, nu);
            report.rows.push_back(make_row(h, err, sol.diag.pcg_iterations, sol.diag.seconds));
            break;
        }
        case Method::EP: {
            const StokesSolution sol = solve_ep(mesh, cs, nu, lambda);
            const ErrorReport err = compute_errors(mesh, cs, sol, SpaceKind::P1Vector, nu);
            report.rows.push_back(make_row(h, err, 1, sol.diag.seconds));
            report.robust_bound.push_back(pressure_robust_bound(mesh, cs, nu, lambda, sol));
            break;
        }
        case Method::Post: {
            const StokesSolution cr = solve_cr(mesh, cs, nu, CrOptions{opts.cr_load});
            const ErrorReport cr_err = compute_errors(mesh, cs, cr, SpaceKind::CRVector, nu);
            report.cr_rows.push_back(make_row(h, cr_err, cr.diag.pcg_iterations, cr.diag.seconds));

            StokesSolution first;
            const StokesSolution sol = solve_post(mesh, cs, nu, lambda, cr.pressure,
                                                  opts.post_iters, opts.eps, &first);
            const ErrorReport err = compute_errors(mesh, cs, sol, SpaceKind::P1Vector, nu);
            report.rows.push_back(make_row(h, err, sol.diag.outer_iterations,
                                           cr.diag.seconds + sol.diag.seconds));

            const TransferBounds tb = transfer_bounds(mesh, cs, nu, lambda, cr.pressure, first);
            report.combined_bound.push_back(tb.combined);
            report.velocity_bound.push_back(tb.velocity);
            report.divergence_traces.push_back(sol.diag.divergence_norm);
            const ErrorReport first_err = compute_errors(mesh, cs, first, SpaceKind::P1Vector, nu);
            report.ratio_after_one.push_back(first_err.e1 > 0 ? first_err.eD / first_err.e1 : 0.0);
            report.ratio_after_full.push_back(err.e1 > 0 ? err.eD / err.e1 : 0.0);
            break;
        }
        }
    }
    report.tau_u = fit_rate(report.rows, &StudyRow::e0_u);
    report.tau_p = fit_rate(report.rows, &StudyRow::e0_p);
    if (!report.cr_rows.empty()) {
        report.cr_tau_u = fit_rate(report.cr_rows, &StudyRow::e0_u);
        report.cr_tau_p = fit_rate(report.cr_rows, &StudyRow::e0_p);
    }
    return report;
}

/**
 * The H(div)-projected variant: CR with RT0-projected right-hand side, whose
 * pressure then feeds a single post-processing step with lambda = 1.
 */
struct RtCompareReport {
    StudyReport cr_stage;
    StudyReport post_stage;
};

inline RtCompareReport rt_compare_study(const ManufacturedCase& cs, double nu,
                                        const std::vector<int>& ns,
                                        const StudyOptions& opts_in = {}) {
    StudyOptions opts = opts_in;
    opts.cr_load = LoadMode::RT0Projected;

    RtCompareReport rep;
    rep.cr_stage.case_name = rep.post_stage.case_name = cs.name;
    rep.cr_stage.method = Method::CR;
    rep.post_stage.method = Method::Post;
    rep.cr_stage.nu = rep.post_stage.nu = nu;
    rep.cr_stage.lambda = rep.post_stage.lambda = 1.0;

    for (int n : ns) {
        const Mesh mesh = build_study_mesh(n, opts);
        const double h = 1.0 / n;
        const StokesSolution cr = solve_cr(mesh, cs, nu, CrOptions{LoadMode::RT0Projected});
        const ErrorReport cr_err = compute_errors(mesh, cs, cr, SpaceKind::CRVector, nu);
        rep.cr_stage.rows.push_back(make_row(h, cr_err, cr.diag.pcg_iterations, cr.diag.seconds));

        const StokesSolution post = solve_post(mesh, cs, nu, 1.0, cr.pressure, 1, opts.eps);
        const ErrorReport post_err = compute_errors(mesh, cs, post, SpaceKind::P1Vector, nu);
        rep.post_stage.rows.push_back(
            make_row(h, post_err, post.diag.outer_iterations, cr.diag.seconds + post.diag.seconds));
    }
    rep.cr_stage.tau_u = fit_rate(rep.cr_stage.rows, &StudyRow::e0_u);
    rep.cr_stage.tau_p = fit_rate(rep.cr_stage.rows, &StudyRow::e0_p);
    rep.post_stage.tau_u = fit_rate(rep.post_stage.rows, &StudyRow::e0_u);
    rep.post_stage.tau_p = fit_rate(rep.post_stage.rows, &StudyRow::e0_p);
    return rep;
}

// --- CSV ----------------------------------------------------------------------

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Atomic CSV emission: the file appears only complete (write to a temporary
/// name in the same directory, then rename).
inline void write_csv(const std::filesystem::path& path, const std::vector<StudyRow>& rows) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("write_csv: cannot open " + tmp.string());
        out << "h,eU0,eP0,eU1,eUD,iters,seconds\n";
        for (const StudyRow& r : rows) {
            out << format_full(r.h) << ',' << format_full(r.e0_u) << ',' << format_full(r.e0_p)
                << ',' << format_full(r.e1) << ',' << format_full(r.eD) << ',' << r.iters << ','
                << format_full(r.seconds) << '\n';
        }
        if (!out) throw std::runtime_error("write_csv: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<StudyRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "h,eU0,eP0,eU1,eUD,iters,seconds")
        throw std::runtime_error("read_csv: unexpected header in " + path.string());
    std::vector<StudyRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        StudyRow r;
        char comma;
        ss >> r.h >> comma >> r.e0_u >> comma >> r.e0_p >> comma >> r.e1 >> comma >> r.eD >>
            comma >> r.iters >> comma >> r.seconds;
        if (!ss) throw std::runtime_error("read_csv: malformed row in " + path.string());
        rows.push_back(r);
    }
    return rows;
}

/// "<case>-<method>-nu<value>.csv"
inline std::string csv_filename(const std::string& case_name, const std::string& method,
                                double nu) {
    std::ostringstream ss;
    ss << case_name << '-' << method << "-nu" << nu << ".csv";
    return ss.str();
}

} // namespace stokesfem
