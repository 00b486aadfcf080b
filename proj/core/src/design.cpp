#include "gseq/design.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gseq/errors.hpp"
#include "gseq/subdensity.hpp"

namespace gseq {

namespace {

constexpr double kReachFloor = 1e-12;

} // namespace

std::vector<std::size_t> cumulative_sizes(const SequentialDesign& design) {
    require_valid(design);
    std::vector<std::size_t> cum(design.stage_n.size());
    std::partial_sum(design.stage_n.begin(), design.stage_n.end(), cum.begin());
    return cum;
}

std::vector<std::string> validate_design(const SequentialDesign& design) {
    std::vector<std::string> report;
    if (design.num_stages < 1) report.push_back("K must be >= 1");
    if (design.stage_n.size() != design.num_stages) {
        report.push_back("stage_n must have K entries");
    }
    for (std::size_t i = 0; i < design.stage_n.size(); ++i) {
        if (design.stage_n[i] < 1) {
            std::ostringstream os;
            os << "stage size must be >= 1 (stage " << i + 1 << ")";
            report.push_back(os.str());
        }
    }
    if (design.boundaries.size() != design.num_stages) {
        report.push_back("boundaries must have K entries");
    }
    for (std::size_t i = 0; i < design.boundaries.size(); ++i) {
        if (!std::isfinite(design.boundaries[i])) {
            std::ostringstream os;
            os << "boundary must be finite (stage " << i + 1 << ")";
            report.push_back(os.str());
        }
    }
    if (!(design.sigma > 0.0) || !std::isfinite(design.sigma)) {
        report.push_back("sigma must be positive and finite");
    }
    return report;
}

void require_valid(const SequentialDesign& design) {
    const auto report = validate_design(design);
    if (report.empty()) return;
    std::string msg = "invalid design:";
    for (const auto& line : report) msg += " [" + line + "]";
    throw validation_error(msg);
}

void require_valid(const Hypotheses& hyp) {
    if (!std::isfinite(hyp.theta0) || !std::isfinite(hyp.theta1)) {
        throw validation_error("hypotheses must be finite");
    }
    if (!(hyp.theta1 > hyp.theta0)) {
        throw validation_error("theta1 must exceed theta0");
    }
}

double drift_at_stage(const SequentialDesign& design, double theta, std::size_t stage) {
    const auto cum = cumulative_sizes(design);
    if (stage == 0 || stage > design.num_stages) {
        throw validation_error("drift_at_stage: stage out of range");
    }
    return theta * std::sqrt(static_cast<double>(cum[stage - 1])) / design.sigma;
}

double theta_for_drift(const SequentialDesign& design, double delta1) {
    require_valid(design);
    return delta1 * design.sigma / std::sqrt(static_cast<double>(design.stage_n[0]));
}

OperationalCharacteristics operational_characteristics(const SequentialDesign& design,
                                                       const Hypotheses& hyp,
                                                       std::size_t grid_points) {
    require_valid(design);
    require_valid(hyp);
    const std::size_t k = design.num_stages;
    const auto cum = cumulative_sizes(design);

    const auto sd0 = compute_anatomy(design, hyp.theta0, grid_points);
    const auto sd1 = compute_anatomy(design, hyp.theta1, grid_points);

    for (std::size_t d = 0; d < k; ++d) {
        if (sd0.reach_probs[d] < kReachFloor || sd1.reach_probs[d] < kReachFloor) {
            std::ostringstream os;
            os << "stage " << d + 1 << " is numerically unreachable";
            throw validation_error(os.str());
        }
    }

    const auto rej0 = rejection_masses(sd0);
    const auto rej1 = rejection_masses(sd1);

    OperationalCharacteristics oc;
    oc.alpha_stage.resize(k);
    oc.alpha_spending.resize(k);
    oc.beta_stage.resize(k);
    oc.beta_spending.resize(k);
    oc.stop_probs_null = sd0.stop_probs;
    oc.stop_probs_alt = sd1.stop_probs;

    double spend = 0.0;
    double no_reject = 1.0;
    for (std::size_t d = 0; d < k; ++d) {
        oc.alpha_stage[d] = rej0[d] / sd0.reach_probs[d];
        spend += rej0[d];
        oc.alpha_spending[d] = spend;
        oc.beta_stage[d] = 1.0 - rej1[d] / sd1.reach_probs[d];
        no_reject *= oc.beta_stage[d];
        oc.beta_spending[d] = no_reject;
    }
    oc.overall_alpha = oc.alpha_spending[k - 1];

    double power = 0.0;
    for (double r : rej1) power += r;
    oc.overall_power = power;

    oc.expected_n = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
        oc.expected_n += static_cast<double>(cum[d]) * sd1.stop_probs[d];
    }
    return oc;
}

} // namespace gseq
