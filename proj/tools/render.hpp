#pragma once

#include <string>

#include "gseq/design.hpp"

namespace gseq::cli {

/// Operational-characteristics table: one row per feature with stage
/// columns, six significant digits, scalar summary lines after.
std::string render_oc_table(const OperationalCharacteristics& oc);

} // namespace gseq::cli
