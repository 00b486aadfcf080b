#pragma once

#include <cstddef>
#include <vector>

#include "gseq/design.hpp"

namespace gseq {

enum class SpendingKind { pocock_constant, explicit_increments };

/// Prescribed type-I-error spending. For explicit plans, increments[d] is
/// the unconditional rejection probability to be spent at stage d+1 under
/// the null; they must be positive and sum to alpha_total.
struct SpendingPlan {
    SpendingKind kind = SpendingKind::pocock_constant;
    double alpha_total = 0.025;
    std::size_t num_stages = 1;
    std::vector<double> increments; // explicit plans only
};

void require_valid(const SpendingPlan& plan);

struct SolverReport {
    std::vector<int> iterations;    // per solved stage (one entry for pocock)
    std::vector<double> residuals;  // achieved minus target at convergence
};

struct BoundarySolution {
    std::vector<double> boundaries;
    std::vector<double> achieved_spending; // cumulative, under the null
    SolverReport report;
};

/// Solves c_1..c_K sequentially so that each stage's null rejection mass
/// equals the plan increment, given the earlier boundaries. The design
/// template supplies K, stage sizes and sigma; its boundaries are ignored.
/// Residuals are below 1e-8 per stage.
BoundarySolution solve_explicit(const SpendingPlan& plan,
                                const SequentialDesign& design_template,
                                double theta0 = 0.0,
                                std::size_t grid_points = kDefaultGridPoints);

/// Finds the single constant boundary with overall null rejection
/// probability alpha_total (outer root-find around the recursion).
/// Requires equal stage sizes.
BoundarySolution solve_pocock(double alpha_total, std::size_t num_stages,
                              const SequentialDesign& design_template,
                              double theta0 = 0.0,
                              std::size_t grid_points = kDefaultGridPoints);

/// Cumulative rejection probability under theta0 through each stage
/// (the alpha-spending sequence realized by the design).
std::vector<double> achieved_spending(const SequentialDesign& design,
                                      double theta0 = 0.0,
                                      std::size_t grid_points = kDefaultGridPoints);

} // namespace gseq
