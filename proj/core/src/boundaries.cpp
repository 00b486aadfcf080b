#include "gseq/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gseq/errors.hpp"
#include "gseq/quadrature.hpp"
#include "gseq/roots.hpp"
#include "gseq/subdensity.hpp"
#include "stage_conv.hpp"

namespace gseq {

using detail::ConvState;
using detail::convolve_at;
using detail::kReferenceWidth;
using detail::kTailHalfWidth;
using detail::make_state;
using detail::std_pdf;
using detail::tabulate_conv;

namespace {

constexpr double kStageResidualTol = 1e-8;
constexpr double kBracketLo = 0.0;
constexpr double kBracketHi = 6.0;

SequentialDesign template_without_boundaries(const SequentialDesign& tmpl,
                                             std::size_t k) {
    SequentialDesign d = tmpl;
    d.num_stages = k;
    d.boundaries.assign(k, 0.0);
    if (d.stage_n.size() != k) {
        throw validation_error("boundary solving: template stage_n must have K entries");
    }
    require_valid(d);
    return d;
}

// Sequential solver state: after fixing c_1..c_{d-1} it holds the
// continuation-restricted density of T_(d-1) under the null.
class StageSolver {
public:
    StageSolver(const SequentialDesign& design, double theta0, std::size_t grid_points)
        : law_(StageLaw::from_design(design, theta0)),
          target_h_(kReferenceWidth / static_cast<double>(grid_points - 1)) {
        if (grid_points < 3 || grid_points % 2 == 0) {
            throw validation_error("boundary solving: grid_points must be odd and >= 3");
        }
    }

    std::size_t num_stages() const { return law_.num_stages(); }
    double reach() const { return reach_; }

    // f_d at t for the current stage (1-based current index = stages_done+1).
    double density_at(double t) const {
        const std::size_t s = stages_done_;
        if (s == 0) return std_pdf(t - law_.stage_mean(1));
        return convolve_at(state_, law_.prev_weight[s], law_.incr_weight[s],
                           law_.drift[s], t);
    }

    // Pr_0(D = d, T_(d) > c) given the earlier boundaries.
    double tail_mass(double c) const {
        const double mean = law_.stage_mean(stages_done_ + 1);
        const double hi = std::max(mean, c) + kTailHalfWidth;
        if (c >= hi) return 0.0;
        const std::size_t n = Grid::odd_points_for(hi - c, target_h_, 3);
        return simpson_integrate([&](double t) { return density_at(t); }, c, hi, n);
    }

    // Fix this stage's boundary and absorb the continuation region into the
    // recursion state. No-op for the final stage.
    void commit(double c) {
        const std::size_t s = stages_done_;
        law_.boundaries[s] = c;
        if (s + 1 >= law_.num_stages()) {
            ++stages_done_;
            return;
        }
        const double mean = law_.stage_mean(s + 1);
        const double lo = std::min(mean, c) - kTailHalfWidth;
        double cont_h = target_h_;
        if (law_.prev_weight[s + 1] > 0.0) {
            cont_h = std::min(cont_h, 0.1 * law_.incr_weight[s + 1] / law_.prev_weight[s + 1]);
        }
        const Grid cont_grid(lo, c, Grid::odd_points_for(c - lo, cont_h, 3));
        std::vector<double> values(cont_grid.n_points);
        for (std::size_t i = 0; i < cont_grid.n_points; ++i) {
            values[i] = density_at(cont_grid.point(i));
        }
        GridDensity cont_d = make_grid_density(cont_grid, std::move(values));
        reach_ = cont_d.mass;
        state_ = make_state(cont_d);
        ++stages_done_;
    }

    const StageLaw& law() const { return law_; }

private:
    StageLaw law_;
    double target_h_;
    ConvState state_;
    double reach_ = 1.0;
    std::size_t stages_done_ = 0;
};

} // namespace

void require_valid(const SpendingPlan& plan) {
    if (!(plan.alpha_total > 0.0) || !(plan.alpha_total < 1.0)) {
        throw validation_error("spending plan: alpha_total must lie in (0,1)");
    }
    if (plan.num_stages < 1) throw validation_error("spending plan: K must be >= 1");
    if (plan.kind == SpendingKind::explicit_increments) {
        if (plan.increments.size() != plan.num_stages) {
            throw validation_error("spending plan: increments must have K entries");
        }
        double sum = 0.0;
        for (double inc : plan.increments) {
            if (!(inc >= 0.0)) throw validation_error("spending plan: negative increment");
            sum += inc;
        }
        if (std::fabs(sum - plan.alpha_total) > 1e-12) {
            throw validation_error("spending plan: increments must sum to alpha_total");
        }
    }
}

BoundarySolution solve_explicit(const SpendingPlan& plan,
                                const SequentialDesign& design_template,
                                double theta0, std::size_t grid_points) {
    require_valid(plan);
    if (plan.kind != SpendingKind::explicit_increments) {
        throw validation_error("solve_explicit: plan kind must be explicit");
    }
    const std::size_t k = plan.num_stages;
    const SequentialDesign design = template_without_boundaries(design_template, k);

    StageSolver solver(design, theta0, grid_points);
    BoundarySolution sol;
    sol.boundaries.resize(k);

    double spent = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
        const double inc = plan.increments[d];
        if (!(inc > 0.0)) {
            std::ostringstream os;
            os << "solve_explicit: stage " << d + 1
               << " increment is zero; the boundary would be infinite";
            throw validation_error(os.str());
        }
        if (inc >= solver.reach() * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << "solve_explicit: stage " << d + 1 << " increment " << inc
               << " exceeds the remaining continuation mass " << solver.reach();
            throw validation_error(os.str());
        }

        auto g = [&](double c) { return solver.tail_mass(c) - inc; };
        double lo = kBracketLo, hi = kBracketHi;
        if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
            // widen once: cover heavy drifts and tiny increments
            const double mean = solver.law().stage_mean(d + 1);
            lo = std::min(lo, mean) - kTailHalfWidth;
            hi = std::max(hi, mean) + kTailHalfWidth;
        }
        const RootResult r = find_root(g, lo, hi, 1e-11);
        if (std::fabs(r.residual) > kStageResidualTol) {
            throw numeric_error("solve_explicit: stage residual above 1e-8");
        }
        sol.boundaries[d] = r.root;
        spent += solver.tail_mass(r.root);
        sol.achieved_spending.push_back(spent);
        sol.report.iterations.push_back(r.iterations);
        sol.report.residuals.push_back(r.residual);
        solver.commit(r.root);
    }
    return sol;
}

namespace {

// Overall null rejection probability of a constant-boundary design,
// computed by one forward pass of the recursion.
double constant_boundary_alpha(const SequentialDesign& design, double c,
                               double theta0, std::size_t grid_points) {
    StageSolver solver(design, theta0, grid_points);
    double alpha = 0.0;
    for (std::size_t d = 0; d < design.num_stages; ++d) {
        alpha += solver.tail_mass(c);
        solver.commit(c);
    }
    return alpha;
}

} // namespace

BoundarySolution solve_pocock(double alpha_total, std::size_t num_stages,
                              const SequentialDesign& design_template,
                              double theta0, std::size_t grid_points) {
    if (!(alpha_total > 0.0) || !(alpha_total < 1.0)) {
        throw validation_error("solve_pocock: alpha_total must lie in (0,1)");
    }
    const SequentialDesign design = template_without_boundaries(design_template, num_stages);
    for (std::size_t d = 1; d < num_stages; ++d) {
        if (design.stage_n[d] != design.stage_n[0]) {
            throw validation_error("solve_pocock: requires equal stage sizes");
        }
    }

    // Coarse pass to localize the constant, fine pass for the 1e-8 target.
    const std::size_t coarse = std::min<std::size_t>(257, grid_points);
    auto g_coarse = [&](double c) {
        return constant_boundary_alpha(design, c, theta0, coarse) - alpha_total;
    };
    double lo = kBracketLo, hi = kBracketHi;
    if (!(g_coarse(lo) > 0.0 && g_coarse(hi) < 0.0)) {
        lo -= 2.0 * kTailHalfWidth;
        hi += kTailHalfWidth;
        if (!(g_coarse(lo) > 0.0 && g_coarse(hi) < 0.0)) {
            std::ostringstream os;
            os << "solve_pocock: no bracket for alpha=" << alpha_total
               << " in [" << lo << ", " << hi << "]";
            throw numeric_error(os.str());
        }
    }
    const RootResult rough = find_root(g_coarse, lo, hi, 1e-4);

    auto g_fine = [&](double c) {
        return constant_boundary_alpha(design, c, theta0, grid_points) - alpha_total;
    };
    double flo = rough.root - 5e-3, fhi = rough.root + 5e-3;
    if (!(g_fine(flo) > 0.0 && g_fine(fhi) < 0.0)) {
        flo = lo;
        fhi = hi;
    }
    const RootResult r = find_root(g_fine, flo, fhi, 1e-11);
    if (std::fabs(r.residual) > kStageResidualTol) {
        throw numeric_error("solve_pocock: residual above 1e-8");
    }

    BoundarySolution sol;
    sol.boundaries.assign(num_stages, r.root);
    SequentialDesign solved = design;
    solved.boundaries = sol.boundaries;
    sol.achieved_spending = achieved_spending(solved, theta0, grid_points);
    sol.report.iterations.push_back(rough.iterations + r.iterations);
    sol.report.residuals.push_back(r.residual);
    return sol;
}

std::vector<double> achieved_spending(const SequentialDesign& design, double theta0,
                                      std::size_t grid_points) {
    require_valid(design);
    const auto sd = compute_anatomy(design, theta0, grid_points);
    const auto rej = rejection_masses(sd);
    std::vector<double> spending(rej.size());
    std::partial_sum(rej.begin(), rej.end(), spending.begin());
    return spending;
}

} // namespace gseq
