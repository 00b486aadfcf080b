#include "render.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

namespace gseq::cli {

namespace {

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string render_oc_table(const OperationalCharacteristics& oc) {
    const std::size_t k = oc.alpha_stage.size();
    struct Row {
        const char* name;
        const std::vector<double>* values;
    };
    std::vector<double> stage_power(k), cum_power(k);
    for (std::size_t d = 0; d < k; ++d) {
        stage_power[d] = 1.0 - oc.beta_stage[d];
        cum_power[d] = 1.0 - oc.beta_spending[d];
    }
    const Row rows[] = {
        {"alpha_stage", &oc.alpha_stage},
        {"alpha_spending", &oc.alpha_spending},
        {"beta_stage", &oc.beta_stage},
        {"beta_spending", &oc.beta_spending},
        {"stage_power", &stage_power},
        {"cumulative_power", &cum_power},
        {"stop_prob_null", &oc.stop_probs_null},
        {"stop_prob_alt", &oc.stop_probs_alt},
    };

    std::ostringstream os;
    os << "feature";
    for (std::size_t d = 1; d <= k; ++d) os << "\tstage_" << d;
    os << "\n";
    for (const auto& row : rows) {
        os << row.name;
        for (double v : *row.values) os << "\t" << fmt6(v);
        os << "\n";
    }
    os << "\n";
    os << "overall_alpha\t" << fmt6(oc.overall_alpha) << "\n";
    os << "overall_power\t" << fmt6(oc.overall_power) << "\n";
    os << "expected_n_alt\t" << fmt6(oc.expected_n) << "\n";
    return os.str();
}

} // namespace gseq::cli
