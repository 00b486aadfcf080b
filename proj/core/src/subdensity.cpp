#include "gseq/subdensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gseq/errors.hpp"
#include "gseq/quadrature.hpp"
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

constexpr double kMassDeficitTol = 1e-6;
constexpr double kConditionFloor = 1e-12; // below this, conditioning is meaningless

} // namespace

double StageLaw::stage_mean(std::size_t stage) const {
    if (stage == 0 || stage > num_stages()) {
        throw validation_error("StageLaw::stage_mean: stage out of range");
    }
    double m = drift[0];
    for (std::size_t s = 1; s < stage; ++s) m = prev_weight[s] * m + incr_weight[s] * drift[s];
    return m;
}

StageLaw StageLaw::from_design(const SequentialDesign& design, double theta) {
    require_valid(design);
    if (!std::isfinite(theta)) throw validation_error("StageLaw: theta must be finite");
    const auto cum = cumulative_sizes(design);
    const std::size_t k = design.num_stages;
    StageLaw law;
    law.prev_weight.resize(k);
    law.incr_weight.resize(k);
    law.drift.resize(k);
    law.boundaries = design.boundaries;
    for (std::size_t s = 0; s < k; ++s) {
        const double nd = static_cast<double>(design.stage_n[s]);
        const double nc = static_cast<double>(cum[s]);
        law.prev_weight[s] = s == 0 ? 0.0 : std::sqrt(static_cast<double>(cum[s - 1]) / nc);
        law.incr_weight[s] = std::sqrt(nd / nc);
        law.drift[s] = std::sqrt(nd) * theta / design.sigma;
    }
    return law;
}

StageDistributions compute_anatomy(const SequentialDesign& design, double theta,
                                   std::size_t grid_points) {
    auto sd = compute_anatomy(StageLaw::from_design(design, theta), grid_points);
    sd.theta = theta;
    return sd;
}

StageDistributions compute_anatomy(const StageLaw& law, std::size_t grid_points) {
    const std::size_t k = law.num_stages();
    if (k == 0) throw validation_error("compute_anatomy: empty law");
    if (grid_points < 3 || grid_points % 2 == 0) {
        throw validation_error("compute_anatomy: grid_points must be odd and >= 3");
    }
    for (std::size_t s = 0; s < k; ++s) {
        if (!std::isfinite(law.boundaries[s])) {
            throw validation_error("compute_anatomy: boundaries must be finite");
        }
        if (!(law.incr_weight[s] > 0.0)) {
            throw validation_error("compute_anatomy: increment weights must be positive");
        }
    }

    const double target_h = kReferenceWidth / static_cast<double>(grid_points - 1);

    StageDistributions sd;
    sd.theta = std::numeric_limits<double>::quiet_NaN();
    sd.law = law;
    sd.sub.reserve(k);
    sd.continuation.reserve(k - 1);
    sd.stop_probs.assign(k, 0.0);
    sd.reach_probs.assign(k, 0.0);

    ConvState state; // continuation state of the previous stage
    double reach = 1.0;

    for (std::size_t s = 0; s < k; ++s) {
        const double c = law.boundaries[s];
        const double mean = law.stage_mean(s + 1);
        const double lo = std::min(mean, c) - kTailHalfWidth;
        const double hi = std::max(mean, c) + kTailHalfWidth;
        if (!(lo < c && c < hi)) {
            throw validation_error("compute_anatomy: boundary fell outside the stage grid");
        }

        sd.reach_probs[s] = reach;

        // The next convolution integrates over the continuation grid against
        // a kernel of width incr/prev in s; keep ~10 points inside it.
        double cont_h = target_h;
        if (s + 1 < k && law.prev_weight[s + 1] > 0.0) {
            cont_h = std::min(cont_h, 0.1 * law.incr_weight[s + 1] / law.prev_weight[s + 1]);
        }

        auto eval_on = [&](const Grid& g) {
            if (s == 0) {
                std::vector<double> v(g.n_points);
                for (std::size_t i = 0; i < g.n_points; ++i) {
                    v[i] = std_pdf(g.point(i) - mean);
                }
                return v;
            }
            return tabulate_conv(state, law.prev_weight[s], law.incr_weight[s],
                                 law.drift[s], g);
        };

        if (s + 1 < k) {
            const Grid stop_grid(c, hi, Grid::odd_points_for(hi - c, target_h, 3));
            const Grid cont_grid(lo, c, Grid::odd_points_for(c - lo, cont_h, 3));
            GridDensity stop_d = make_grid_density(stop_grid, eval_on(stop_grid));
            GridDensity cont_d = make_grid_density(cont_grid, eval_on(cont_grid));

            sd.mass_deficit =
                std::max(sd.mass_deficit, std::fabs(stop_d.mass + cont_d.mass - reach));

            sd.stop_probs[s] = stop_d.mass;
            reach = cont_d.mass;
            sd.sub.push_back(std::move(stop_d));
            state = make_state(cont_d);
            sd.continuation.push_back(std::move(cont_d));
        } else {
            const Grid full_grid(lo, hi, Grid::odd_points_for(hi - lo, target_h, 3));
            GridDensity term_d = make_grid_density(full_grid, eval_on(full_grid));
            sd.mass_deficit = std::max(sd.mass_deficit, std::fabs(term_d.mass - reach));
            sd.stop_probs[s] = term_d.mass;
            sd.sub.push_back(std::move(term_d));
        }
    }

    if (sd.mass_deficit > kMassDeficitTol) {
        throw numeric_error("compute_anatomy: stage mass deficit exceeds 1e-6");
    }
    return sd;
}

double StageDistributions::reached_density_at(std::size_t stage, double t) const {
    const std::size_t k = law.num_stages();
    if (stage == 0 || stage > k) throw validation_error("reached_density_at: bad stage");
    if (stage == 1) return std_pdf(t - law.stage_mean(1));
    const ConvState st = make_state(continuation[stage - 2]);
    return convolve_at(st, law.prev_weight[stage - 1], law.incr_weight[stage - 1],
                       law.drift[stage - 1], t);
}

double StageDistributions::reached_cdf(std::size_t stage, double v) const {
    const std::size_t k = law.num_stages();
    if (stage == 0 || stage > k) throw validation_error("reached_cdf: bad stage");
    const double lo = stage < k ? continuation[stage - 1].grid.lo : sub[k - 1].grid.lo;
    if (v <= lo) return 0.0;
    const double hi = stage < k ? sub[stage - 1].grid.hi : sub[k - 1].grid.hi;
    const double upper = std::min(v, hi);
    const double h = sub[stage - 1].grid.spacing();
    const std::size_t n = Grid::odd_points_for(upper - lo, h, 3);
    if (stage == 1) {
        const double mean = law.stage_mean(1);
        return simpson_integrate([&](double t) { return std_pdf(t - mean); }, lo, upper, n);
    }
    const ConvState st = make_state(continuation[stage - 2]);
    const double a = law.prev_weight[stage - 1];
    const double b = law.incr_weight[stage - 1];
    const double zeta = law.drift[stage - 1];
    return simpson_integrate([&](double t) { return convolve_at(st, a, b, zeta, t); },
                             lo, upper, n);
}

std::vector<double> rejection_masses(const StageDistributions& sd) {
    const std::size_t k = sd.law.num_stages();
    std::vector<double> rej(sd.stop_probs);
    rej[k - 1] = sd.stop_probs[k - 1] - sd.reached_cdf(k, sd.law.boundaries[k - 1]);
    if (rej[k - 1] < 0.0) rej[k - 1] = 0.0;
    return rej;
}

double DistributionView::cdf(double v) const {
    double acc = 0.0;
    for (const auto& comp : components) acc += comp.weight * comp.cdf(v);
    return std::min(acc, 1.0);
}

double DistributionView::pdf(double v) const {
    double acc = 0.0;
    for (const auto& comp : components) {
        const Grid& g = comp.density.grid;
        if (v < g.lo || v > g.hi) continue;
        const double s = (v - g.lo) / g.spacing();
        auto i = std::min(static_cast<std::size_t>(s), g.n_points - 2);
        const double t = s - static_cast<double>(i);
        acc += comp.weight *
               ((1.0 - t) * comp.density.values[i] + t * comp.density.values[i + 1]);
    }
    return acc;
}

namespace {

DistributionView::Component normalized_component(const GridDensity& sub, double prob,
                                                 double weight) {
    GridDensity norm = sub;
    for (double& v : norm.values) v /= prob;
    norm.mass = sub.mass / prob;
    DistributionView::Component comp;
    comp.weight = weight;
    comp.cdf = TabulatedCdf(norm);
    comp.density = std::move(norm);
    return comp;
}

} // namespace

DistributionView final_view(const StageDistributions& sd, std::size_t stage) {
    const std::size_t k = sd.law.num_stages();
    if (stage == 0 || stage > k) throw validation_error("final_view: stage out of range");
    const double p = sd.stop_probs[stage - 1];
    if (p < kConditionFloor) {
        throw validation_error("final_view: Pr(D=d) is numerically zero");
    }
    DistributionView view;
    view.kind = ViewKind::final_stage;
    view.stage = stage;
    view.components.push_back(normalized_component(sd.sub[stage - 1], p, 1.0));
    return view;
}

DistributionView interim_view(const StageDistributions& sd, std::size_t stage) {
    const std::size_t k = sd.law.num_stages();
    if (stage == 0 || stage > k) throw validation_error("interim_view: stage out of range");
    double tail = 0.0;
    for (std::size_t d = stage; d <= k; ++d) tail += sd.stop_probs[d - 1];
    if (tail < kConditionFloor) {
        throw validation_error("interim_view: Pr(D>=d) is numerically zero");
    }
    DistributionView view;
    view.kind = stage == 1 ? ViewKind::design : ViewKind::interim;
    view.stage = stage;
    for (std::size_t d = stage; d <= k; ++d) {
        const double p = sd.stop_probs[d - 1];
        if (p <= 0.0) continue;
        view.components.push_back(normalized_component(sd.sub[d - 1], p, p / tail));
    }
    return view;
}

DistributionView design_view(const StageDistributions& sd) {
    DistributionView view = interim_view(sd, 1);
    view.kind = ViewKind::design;
    view.stage = 0;
    return view;
}

bool is_possible_path(const SequentialDesign& design, std::span<const double> t_path) {
    require_valid(design);
    if (t_path.size() > design.num_stages) {
        throw validation_error("is_possible_path: path longer than the design");
    }
    for (std::size_t j = 0; j + 1 < t_path.size(); ++j) {
        if (!(t_path[j] <= design.boundaries[j])) return false;
    }
    return true;
}

} // namespace gseq
