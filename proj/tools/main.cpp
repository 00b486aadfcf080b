// gseq: command-line front end for the group sequential design engine.
// Subcommands: design, boundaries, oc, density, simulate, asymptotics,
// compare. Exit codes: 0 success, 2 validation/usage error, 3 numerical
// accuracy error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gseq/asymptotics.hpp"
#include "gseq/boundaries.hpp"
#include "gseq/design.hpp"
#include "gseq/docio.hpp"
#include "gseq/errors.hpp"
#include "gseq/mcengine.hpp"
#include "gseq/sequential_lr.hpp"
#include "gseq/subdensity.hpp"
#include "render.hpp"

namespace {

using namespace gseq;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    out << std::setprecision(12);
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    auto out = open_out(path);
    out << text;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error("cannot parse number \"" + item + "\"");
        }
    }
    if (values.empty()) throw validation_error("empty number list");
    return values;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> values;
    for (double v : parse_double_list(csv)) {
        if (v < 1.0 || v != std::floor(v)) {
            throw validation_error("expected positive integers in list");
        }
        values.push_back(static_cast<std::size_t>(v));
    }
    return values;
}

double resolve_theta(const DesignDocument& doc, std::optional<double> theta,
                     std::optional<double> drift) {
    if (theta && drift) throw validation_error("give either --theta or --drift, not both");
    if (theta) return *theta;
    if (drift) return theta_for_drift(doc.design, *drift);
    throw validation_error("one of --theta or --drift is required");
}

SequentialDesign scale_stages(const SequentialDesign& base, std::size_t n1) {
    SequentialDesign scaled = base;
    const double base_n1 = static_cast<double>(base.stage_n[0]);
    for (auto& n : scaled.stage_n) {
        const double scale = static_cast<double>(n) / base_n1;
        n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(scale * static_cast<double>(n1))));
    }
    return scaled;
}

// ---------------------------------------------------------------- design --

int run_design(const std::string& in, const std::string& out) {
    const DesignDocument doc = read_design_document(in);
    // read_design_document already rejects invalid documents; report shape
    // checks explicitly for scripting use.
    const auto report = validate_design(doc.design);
    std::ostringstream os;
    if (report.empty()) {
        os << "design valid: K=" << doc.design.num_stages << " stage_n=[";
        for (std::size_t i = 0; i < doc.design.stage_n.size(); ++i) {
            os << (i ? "," : "") << doc.design.stage_n[i];
        }
        os << "] boundaries=[";
        for (std::size_t i = 0; i < doc.design.boundaries.size(); ++i) {
            os << (i ? "," : "") << doc.design.boundaries[i];
        }
        os << "] sigma=" << doc.design.sigma << "\n";
    } else {
        for (const auto& line : report) os << "violation: " << line << "\n";
    }
    emit(out, os.str());
    return report.empty() ? 0 : 2;
}

// ------------------------------------------------------------ boundaries --

int run_boundaries(const std::string& plan_path, bool pocock, double alpha,
                   std::size_t stages, std::size_t stage_n, double sigma, double theta0,
                   double theta1, const std::string& out, const std::string& report_path,
                   std::size_t grid_points) {
    PlanDocument plan_doc;
    if (!plan_path.empty()) {
        plan_doc = read_plan_document(plan_path);
    } else if (pocock) {
        plan_doc.plan.kind = SpendingKind::pocock_constant;
        plan_doc.plan.alpha_total = alpha;
        plan_doc.plan.num_stages = stages;
        plan_doc.template_design.num_stages = stages;
        plan_doc.template_design.stage_n.assign(stages, stage_n);
        plan_doc.template_design.boundaries.assign(stages, 0.0);
        plan_doc.template_design.sigma = sigma;
        plan_doc.hyp = {theta0, theta1};
        require_valid(plan_doc.plan);
        require_valid(plan_doc.template_design);
        require_valid(plan_doc.hyp);
    } else {
        throw validation_error("boundaries: give --plan FILE or --pocock");
    }

    BoundarySolution sol;
    if (plan_doc.plan.kind == SpendingKind::pocock_constant) {
        sol = solve_pocock(plan_doc.plan.alpha_total, plan_doc.plan.num_stages,
                           plan_doc.template_design, plan_doc.hyp.theta0, grid_points);
    } else {
        sol = solve_explicit(plan_doc.plan, plan_doc.template_design, plan_doc.hyp.theta0,
                             grid_points);
    }

    DesignDocument solved;
    solved.design = plan_doc.template_design;
    solved.design.boundaries = sol.boundaries;
    solved.hyp = plan_doc.hyp;
    solved.solution = SolutionInfo{sol.achieved_spending, sol.report.residuals,
                                   sol.report.iterations};

    std::ostringstream os;
    os << std::setprecision(10);
    os << "boundaries:";
    for (double c : sol.boundaries) os << " " << c;
    os << "\nachieved_spending:";
    for (double a : sol.achieved_spending) os << " " << a;
    os << "\nresiduals:";
    for (double r : sol.report.residuals) os << " " << r;
    os << "\n";
    std::cout << os.str();

    if (!out.empty()) write_design_document(out, solved);
    if (!report_path.empty()) {
        nlohmann::json j;
        j["boundaries"] = sol.boundaries;
        j["achieved_spending"] = sol.achieved_spending;
        j["residuals"] = sol.report.residuals;
        j["iterations"] = sol.report.iterations;
        auto rep = open_out(report_path);
        rep << j.dump(2) << "\n";
    }
    return 0;
}

// -------------------------------------------------------------------- oc --

int run_oc(const std::string& in, const std::string& out, std::size_t grid_points) {
    const DesignDocument doc = read_design_document(in);
    const auto oc = operational_characteristics(doc.design, doc.hyp, grid_points);
    emit(out, cli::render_oc_table(oc));
    return 0;
}

// --------------------------------------------------------------- density --

int run_density(const std::string& in, std::optional<double> theta,
                std::optional<double> drift, const std::string& out,
                std::size_t grid_points) {
    const DesignDocument doc = read_design_document(in);
    const double th = resolve_theta(doc, theta, drift);
    const auto sd = compute_anatomy(doc.design, th, grid_points);

    std::ostringstream os;
    os << std::setprecision(12);
    os << "stage,t,sub_density,conditional_density\n";
    for (std::size_t d = 1; d <= doc.design.num_stages; ++d) {
        const GridDensity& sub = sd.sub[d - 1];
        const double p = sd.stop_probs[d - 1];
        for (std::size_t i = 0; i < sub.grid.n_points; ++i) {
            const double cond = p > 0.0 ? sub.values[i] / p : 0.0;
            os << d << "," << sub.grid.point(i) << "," << sub.values[i] << "," << cond
               << "\n";
        }
    }
    emit(out, os.str());
    return 0;
}

// -------------------------------------------------------------- simulate --

struct StatRange {
    double lo, hi;
};

StatRange stat_range(const SequentialDesign& design, const StageDistributions& sd,
                     RecordStat stat) {
    const auto cum = cumulative_sizes(design);
    double lo = 1e300, hi = -1e300;
    for (std::size_t d = 0; d < design.num_stages; ++d) {
        double glo = d + 1 < design.num_stages ? sd.continuation[d].grid.lo
                                               : sd.sub[d].grid.lo;
        double ghi = sd.sub[d].grid.hi;
        if (stat == RecordStat::mle) {
            const double scale = design.sigma / std::sqrt(static_cast<double>(cum[d]));
            glo *= scale;
            ghi *= scale;
        }
        lo = std::min(lo, glo);
        hi = std::max(hi, ghi);
    }
    return {lo, hi};
}

int run_simulate(const std::string& in, std::optional<double> theta,
                 std::optional<double> drift, std::size_t reps, std::uint64_t seed,
                 std::size_t bins, unsigned threads, const std::string& prefix,
                 std::size_t grid_points) {
    const DesignDocument doc = read_design_document(in);
    SimConfig cfg;
    cfg.design = doc.design;
    cfg.theta = resolve_theta(doc, theta, drift);
    cfg.replications = reps;
    cfg.seed = seed;
    cfg.histogram_bins = bins;
    require_valid(cfg);

    const auto records = run_simulation(cfg, threads);
    const auto sd = compute_anatomy(cfg.design, cfg.theta, grid_points);
    const std::size_t k = cfg.design.num_stages;

    std::vector<Condition> conditions;
    for (std::size_t d = 1; d <= k; ++d) conditions.push_back(Condition::d_eq(d));
    conditions.push_back(Condition::every());

    nlohmann::json summary;
    summary["version"] = kDocumentVersion;
    summary["replications"] = reps;
    summary["seed"] = seed;
    summary["theta"] = cfg.theta;
    summary["drift_stage1"] = drift_at_stage(cfg.design, cfg.theta, 1);

    std::vector<std::size_t> stop_counts(k, 0);
    std::size_t rejected = 0;
    for (const auto& rec : records) {
        ++stop_counts[rec.stage - 1];
        rejected += rec.rejected;
    }
    summary["stop_counts"] = stop_counts;
    summary["rejection_rate"] =
        static_cast<double>(rejected) / static_cast<double>(records.size());

    summary["conditions"] = nlohmann::json::array();
    for (const auto& cond : conditions) {
        nlohmann::json jc;
        jc["condition"] = cond.label();
        bool have = true;
        for (RecordStat stat : {RecordStat::mle, RecordStat::terminal}) {
            const char* name = stat == RecordStat::mle ? "mle" : "terminal";
            EmpiricalDist dist;
            try {
                dist = empirical_views(records, cond, stat);
            } catch (const validation_error&) {
                have = false;
                break;
            }
            jc["count"] = dist.count;
            jc[std::string(name) + "_mean"] = dist.mean;
            jc[std::string(name) + "_sd"] = dist.sd;

            const StatRange range = stat_range(cfg.design, sd, stat);
            dist = with_histogram(std::move(dist), range.lo, range.hi, bins);
            std::string cond_tag = cond.kind == Condition::Kind::all
                                       ? "all"
                                       : "d" + std::to_string(cond.stage);
            auto out = open_out(prefix + "_hist_" + name + "_" + cond_tag + ".csv");
            out << "bin_lo,bin_hi,count\n";
            for (std::size_t b = 0; b < dist.hist.counts.size(); ++b) {
                out << dist.hist.edges[b] << "," << dist.hist.edges[b + 1] << ","
                    << dist.hist.counts[b] << "\n";
            }
        }
        if (have) summary["conditions"].push_back(jc);
    }

    auto out = open_out(prefix + "_summary.json");
    out << summary.dump(2) << "\n";
    std::cout << "simulate: " << reps << " replications, rejection rate "
              << summary["rejection_rate"].get<double>() << "\n";
    return 0;
}

// ----------------------------------------------------------- asymptotics --

int run_asymptotics(const std::string& in, std::optional<double> h, std::size_t n1,
                    std::size_t reps, std::uint64_t seed, std::size_t points,
                    bool degeneracy, std::optional<double> theta_fixed,
                    const std::string& n1_grid_csv, const std::string& out,
                    std::size_t grid_points) {
    const DesignDocument doc = read_design_document(in);

    if (degeneracy) {
        if (!theta_fixed) throw validation_error("--degeneracy requires --theta");
        const auto grid = parse_size_list(n1_grid_csv.empty() ? "25,100,400" : n1_grid_csv);
        const auto rows = degeneracy_demo(doc.design, *theta_fixed, grid, grid_points);
        std::ostringstream os;
        os << std::setprecision(12);
        os << "n1,stop_prob_stage1\n";
        for (const auto& row : rows) os << row.n1 << "," << row.stop_prob_stage1 << "\n";
        emit(out, os.str());
        return 0;
    }

    if (!h) throw validation_error("asymptotics: --local-drift is required (or use --degeneracy)");
    const auto ratios = RatioLimits::from_design(doc.design);
    const LimitCDF limit = limit_cdf_design(ratios, doc.design, {*h}, grid_points);

    const SequentialDesign scaled = scale_stages(doc.design, n1);
    const double theta = theta_for_drift(scaled, *h);
    const auto sd = compute_anatomy(scaled, theta, grid_points);
    const DistributionView finite_view = design_view(sd);

    SimConfig cfg;
    cfg.design = scaled;
    cfg.theta = theta;
    cfg.replications = reps;
    cfg.seed = seed;
    const auto records = run_simulation(cfg);
    const auto emp = empirical_views(records, Condition::every(), RecordStat::terminal);

    double vlo = 1e300, vhi = -1e300;
    for (const auto& comp : limit.view.components) {
        vlo = std::min(vlo, comp.density.grid.lo);
        vhi = std::max(vhi, comp.density.grid.hi);
    }

    std::ostringstream os;
    os << std::setprecision(12);
    os << "v,limit_cdf,finite_n_cdf,mc_cdf\n";
    for (std::size_t i = 0; i < points; ++i) {
        const double v =
            vlo + (vhi - vlo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const auto it = std::upper_bound(emp.sorted.begin(), emp.sorted.end(), v);
        const double mc = static_cast<double>(it - emp.sorted.begin()) /
                          static_cast<double>(emp.count);
        os << v << "," << limit(v) << "," << finite_view.cdf(v) << "," << mc << "\n";
    }
    emit(out, os.str());
    return 0;
}

// --------------------------------------------------------------- compare --

int run_compare(const std::string& in, const std::string& thetas_csv, std::size_t reps,
                std::size_t calib_reps, std::uint64_t seed, const std::string& competitor,
                const std::string& out, std::size_t grid_points) {
    const DesignDocument doc = read_design_document(in);
    const auto thetas = parse_double_list(thetas_csv);

    CompetingTest test;
    if (competitor == "sign") {
        test = sign_statistic_test();
    } else if (competitor == "z") {
        test = z_statistic_test();
    } else {
        throw validation_error("--competitor must be \"sign\" or \"z\"");
    }

    const CalibrationResult cal = calibrate_competing(doc.design, doc.hyp, test, calib_reps,
                                                      seed ^ 0x9e3779b97f4a7c15ULL,
                                                      grid_points);
    std::cout << "calibrated \"" << test.name << "\" (" << calib_reps
              << " null replications)\n";
    std::cout << std::setprecision(6);
    for (std::size_t d = 0; d < cal.boundaries.size(); ++d) {
        std::cout << "  stage " << d + 1 << ": boundary " << cal.boundaries[d]
                  << " target alpha " << cal.target_alpha[d] << " achieved "
                  << cal.achieved_alpha[d] << "\n";
    }

    const auto report = power_dominance_trial(doc.design, doc.hyp, test, thetas, reps, seed);

    std::ostringstream os;
    os << std::setprecision(12);
    os << "theta,power_lr,se_lr,power_comp,se_comp,flag\n";
    std::size_t flags = 0;
    for (const auto& row : report.rows) {
        os << row.theta << "," << row.power_lr << "," << row.se_lr << "," << row.power_comp
           << "," << row.se_comp << "," << (row.flagged ? 1 : 0) << "\n";
        flags += row.flagged;
    }
    emit(out, os.str());
    std::cout << "compare: " << report.rows.size() << " theta values, " << flags
              << " dominance violation(s) flagged\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gseq: group sequential design engine"};
    app.require_subcommand(1);

    std::string in, out, plan_path, report_path, prefix, thetas_csv, n1_grid_csv;
    std::string competitor = "sign";
    std::optional<double> theta, drift, h, theta_fixed;
    double alpha = 0.025, sigma = 1.0, theta0 = 0.0, theta1 = 0.0;
    std::size_t stages = 2, stage_n = 1, grid_points = kDefaultGridPoints;
    std::size_t reps = 100000, calib_reps = 1000000, bins = 60, points = 41, n1 = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool pocock = false, degeneracy = false;

    auto* c_design = app.add_subcommand("design", "validate a design document");
    c_design->add_option("--in", in, "design document (JSON)")->required();
    c_design->add_option("--out", out, "report path (default stdout)");

    auto* c_bound = app.add_subcommand("boundaries",
                                       "solve stopping boundaries from a spending plan");
    c_bound->add_option("--plan", plan_path, "spending plan document (JSON)");
    c_bound->add_flag("--pocock", pocock, "constant-boundary family from flags");
    c_bound->add_option("--alpha", alpha, "overall one-sided alpha (pocock mode)");
    c_bound->add_option("--stages", stages, "number of stages K (pocock mode)");
    c_bound->add_option("--stage-n", stage_n, "observations per stage (pocock mode)");
    c_bound->add_option("--sigma", sigma, "outcome standard deviation (pocock mode)");
    c_bound->add_option("--theta0", theta0, "null mean (pocock mode)");
    c_bound->add_option("--theta1", theta1, "alternative mean (pocock mode)");
    c_bound->add_option("--out", out, "write the solved design document here");
    c_bound->add_option("--report", report_path, "write the solver report (JSON)");
    c_bound->add_option("--grid-points", grid_points, "recursion grid points (odd)");

    auto* c_oc = app.add_subcommand("oc", "operational characteristics table");
    c_oc->add_option("--in", in, "design document (JSON)")->required();
    c_oc->add_option("--out", out, "table path (default stdout)");
    c_oc->add_option("--grid-points", grid_points, "recursion grid points (odd)");

    auto* c_density = app.add_subcommand("density", "export stage sub-densities as CSV");
    c_density->add_option("--in", in, "design document (JSON)")->required();
    c_density->add_option("--theta", theta, "outcome-scale mean");
    c_density->add_option("--drift", drift, "stage-1 drift on the z-scale");
    c_density->add_option("--out", out, "CSV path (default stdout)");
    c_density->add_option("--grid-points", grid_points, "recursion grid points (odd)");

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo trial simulation");
    c_sim->add_option("--in", in, "design document (JSON)")->required();
    c_sim->add_option("--theta", theta, "outcome-scale mean");
    c_sim->add_option("--drift", drift, "stage-1 drift on the z-scale");
    c_sim->add_option("--reps", reps, "replications")->required();
    c_sim->add_option("--seed", seed, "64-bit seed (default 0)");
    c_sim->add_option("--bins", bins, "histogram bins");
    c_sim->add_option("--threads", threads, "worker threads (0 = GSEQ_THREADS/auto)");
    c_sim->add_option("--out-prefix", prefix, "output file prefix")->required();
    c_sim->add_option("--grid-points", grid_points, "grid points for histogram edges");

    auto* c_asym = app.add_subcommand("asymptotics",
                                      "limiting-mixture CDF tables / degeneracy demo");
    c_asym->add_option("--in", in, "design document (JSON)")->required();
    c_asym->add_option("--local-drift", h, "local-alternative stage-1 drift h (z-scale)");
    c_asym->add_option("--n1", n1, "finite-n stage-1 size for the comparison columns");
    c_asym->add_option("--reps", reps, "Monte Carlo replications for the mc_cdf column");
    c_asym->add_option("--seed", seed, "64-bit seed");
    c_asym->add_option("--points", points, "rows in the CDF table");
    c_asym->add_flag("--degeneracy", degeneracy, "emit Pr(D=1) over an n1 grid instead");
    c_asym->add_option("--theta", theta_fixed, "fixed alternative (degeneracy mode)");
    c_asym->add_option("--n1-grid", n1_grid_csv, "comma list of n1 values (degeneracy)");
    c_asym->add_option("--out", out, "CSV path (default stdout)");
    c_asym->add_option("--grid-points", grid_points, "recursion grid points (odd)");

    auto* c_cmp = app.add_subcommand("compare",
                                     "power comparison: sequential LR vs competitor");
    c_cmp->add_option("--in", in, "design document (JSON)")->required();
    c_cmp->add_option("--thetas", thetas_csv, "comma list of outcome-scale means")
        ->required();
    c_cmp->add_option("--reps", reps, "replications per theta");
    c_cmp->add_option("--calib-reps", calib_reps, "null replications for calibration");
    c_cmp->add_option("--seed", seed, "64-bit seed");
    c_cmp->add_option("--competitor", competitor, "competing statistic: sign | z");
    c_cmp->add_option("--out", out, "CSV path (default stdout)");
    c_cmp->add_option("--grid-points", grid_points, "recursion grid points (odd)");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(c_design)) return run_design(in, out);
        if (app.got_subcommand(c_bound)) {
            return run_boundaries(plan_path, pocock, alpha, stages, stage_n, sigma, theta0,
                                  theta1, out, report_path, grid_points);
        }
        if (app.got_subcommand(c_oc)) return run_oc(in, out, grid_points);
        if (app.got_subcommand(c_density)) {
            return run_density(in, theta, drift, out, grid_points);
        }
        if (app.got_subcommand(c_sim)) {
            return run_simulate(in, theta, drift, reps, seed, bins, threads, prefix,
                                grid_points);
        }
        if (app.got_subcommand(c_asym)) {
            return run_asymptotics(in, h, n1, reps, seed, points, degeneracy, theta_fixed,
                                   n1_grid_csv, out, grid_points);
        }
        if (app.got_subcommand(c_cmp)) {
            return run_compare(in, thetas_csv, reps, calib_reps, seed, competitor, out,
                               grid_points);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
