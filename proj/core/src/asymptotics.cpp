#include "gseq/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "gseq/errors.hpp"

namespace gseq {

RatioLimits RatioLimits::from_design(const SequentialDesign& design) {
    const auto cum = cumulative_sizes(design);
    const std::size_t k = design.num_stages;
    RatioLimits ratios;
    ratios.r.resize(k);
    ratios.r_cross.resize(k);
    for (std::size_t d = 0; d < k; ++d) {
        ratios.r[d] = static_cast<double>(cum[d]) / static_cast<double>(design.stage_n[d]);
        ratios.r_cross[d].resize(d + 1);
        for (std::size_t j = 0; j <= d; ++j) {
            ratios.r_cross[d][j] =
                static_cast<double>(cum[d]) / static_cast<double>(design.stage_n[j]);
        }
    }
    return ratios;
}

void require_valid(const RatioLimits& ratios) {
    const std::size_t k = ratios.r.size();
    if (k == 0) throw validation_error("RatioLimits: empty");
    if (ratios.r_cross.size() != k) {
        throw validation_error("RatioLimits: r_cross must have K rows");
    }
    for (std::size_t d = 0; d < k; ++d) {
        if (!(ratios.r[d] >= 1.0) || !std::isfinite(ratios.r[d])) {
            throw validation_error("RatioLimits: r_(d) must be finite and >= 1");
        }
        if (ratios.r_cross[d].size() != d + 1) {
            throw validation_error("RatioLimits: r_cross row d must have d+1 entries");
        }
        for (double v : ratios.r_cross[d]) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw validation_error("RatioLimits: cross ratios must lie in (0, inf)");
            }
        }
        if (std::fabs(ratios.r_cross[d][d] - ratios.r[d]) > 1e-9 * ratios.r[d]) {
            throw validation_error("RatioLimits: r_cross[d][d] must equal r[d]");
        }
    }
}

StageLaw limiting_law(const RatioLimits& ratios, const SequentialDesign& design,
                      const LocalAlternative& local) {
    require_valid(ratios);
    require_valid(design);
    if (!std::isfinite(local.h)) throw validation_error("LocalAlternative: h must be finite");
    const std::size_t k = ratios.r.size();
    if (design.num_stages != k) {
        throw validation_error("limiting_law: ratio count must match the design stages");
    }
    StageLaw law;
    law.prev_weight.resize(k);
    law.incr_weight.resize(k);
    law.drift.resize(k);
    law.boundaries = design.boundaries;
    for (std::size_t d = 0; d < k; ++d) {
        const double rd = ratios.r[d];
        // n_(d-1)/n_(d) = 1 - n_d/n_(d) = 1 - 1/r_(d)
        law.prev_weight[d] = d == 0 ? 0.0 : std::sqrt(1.0 - 1.0 / rd);
        law.incr_weight[d] = std::sqrt(1.0 / rd);
        // n_d/n_1 = r_(d)1 / r_(d)
        law.drift[d] = local.h * std::sqrt(ratios.r_cross[d][0] / rd);
    }
    if (k > 0 && std::fabs(ratios.r[0] - 1.0) > 1e-9) {
        throw validation_error("limiting_law: r_(1) must equal 1");
    }
    return law;
}

LimitCDF limit_cdf_design(const RatioLimits& ratios, const SequentialDesign& design,
                          const LocalAlternative& local, std::size_t grid_points) {
    const StageLaw law = limiting_law(ratios, design, local);
    const StageDistributions sd = compute_anatomy(law, grid_points);
    LimitCDF out;
    out.kind = ViewKind::design;
    out.stage = 0;
    out.view = design_view(sd);
    return out;
}

LimitCDF limit_cdf_conditional(const RatioLimits& ratios, const SequentialDesign& design,
                               const LocalAlternative& local, LimitCondition condition,
                               std::size_t stage, std::size_t grid_points) {
    const StageLaw law = limiting_law(ratios, design, local);
    const StageDistributions sd = compute_anatomy(law, grid_points);
    LimitCDF out;
    out.stage = stage;
    if (condition == LimitCondition::stage_eq) {
        out.kind = ViewKind::final_stage;
        out.view = final_view(sd, stage);
    } else {
        out.kind = ViewKind::interim;
        out.view = interim_view(sd, stage);
    }
    return out;
}

std::vector<DegeneracyRow> degeneracy_demo(const SequentialDesign& design_template,
                                           double theta_fixed,
                                           std::span<const std::size_t> n1_grid,
                                           std::size_t grid_points) {
    require_valid(design_template);
    if (!std::isfinite(theta_fixed)) {
        throw validation_error("degeneracy_demo: theta_fixed must be finite");
    }
    if (n1_grid.empty()) throw validation_error("degeneracy_demo: empty n1 grid");

    const double base_n1 = static_cast<double>(design_template.stage_n[0]);
    std::vector<DegeneracyRow> rows;
    rows.reserve(n1_grid.size());
    for (std::size_t n1 : n1_grid) {
        if (n1 < 1) throw validation_error("degeneracy_demo: n1 must be >= 1");
        SequentialDesign scaled = design_template;
        for (std::size_t s = 0; s < scaled.num_stages; ++s) {
            const double scale = static_cast<double>(design_template.stage_n[s]) / base_n1;
            const auto ns = static_cast<std::size_t>(
                std::llround(scale * static_cast<double>(n1)));
            scaled.stage_n[s] = std::max<std::size_t>(1, ns);
        }
        const auto sd = compute_anatomy(scaled, theta_fixed, grid_points);
        rows.push_back({n1, sd.stop_probs[0]});
    }
    return rows;
}

} // namespace gseq
