#pragma once

/// Design and spending-plan documents: versioned JSON with a closed schema
/// (unknown fields are rejected so typos cannot silently fall back to
/// defaults). Formats are documented in docs/formats.md.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gseq/boundaries.hpp"
#include "gseq/design.hpp"

namespace gseq {

inline constexpr int kDocumentVersion = 1;

/// Solver metadata carried inside a solved design document.
struct SolutionInfo {
    std::vector<double> achieved_spending;
    std::vector<double> residuals;
    std::vector<int> iterations;
};

struct DesignDocument {
    SequentialDesign design;
    Hypotheses hyp;
    std::optional<SolutionInfo> solution;
};

struct PlanDocument {
    SpendingPlan plan;
    SequentialDesign template_design; // boundaries unset
    Hypotheses hyp;
};

DesignDocument parse_design_document(const std::string& json_text);
DesignDocument read_design_document(const std::filesystem::path& path);
std::string design_document_to_string(const DesignDocument& doc);
void write_design_document(const std::filesystem::path& path, const DesignDocument& doc);

PlanDocument parse_plan_document(const std::string& json_text);
PlanDocument read_plan_document(const std::filesystem::path& path);
std::string plan_document_to_string(const PlanDocument& doc);
void write_plan_document(const std::filesystem::path& path, const PlanDocument& doc);

} // namespace gseq
