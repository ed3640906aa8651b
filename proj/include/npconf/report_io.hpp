#pragma once

#include <string>
#include <string_view>

#include "npconf/conformance.hpp"

namespace npconf {

inline constexpr std::string_view kReportSchema = "npnet-report/1";

/// Overall verdict of a report: fits, does_not_fit or inconclusive.
Verdict overall_verdict(const ConformanceReport& report);

std::string render_structured(const ConformanceReport& report);
std::string render_text(const ConformanceReport& report);

}  // namespace npconf
