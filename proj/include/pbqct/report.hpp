#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbqct/analysis.hpp"

namespace pbqct {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Locale-independent shortest form with 12 significant digits.
std::string format_number(double value);

/// 1/(1-F); infinite when F = 1.
double inv_gap(double F);

void write_csv(std::ostream& out, const std::vector<FidelityRecord>& records, bool with_inv_gap);

Json record_json(const FidelityRecord& record);
Json class_report_json(const ClassReport& report);
Json matrix_json(const Matrix& m);  // rows of [re, im] pairs

}  // namespace pbqct
