#pragma once

#include <string>
#include <string_view>

#include "npconf/errors.hpp"
#include "npconf/nested_net.hpp"
#include "npconf/validation.hpp"

namespace npconf {

inline constexpr std::string_view kModelSchema = "npnet-model/1";

struct ModelDocument {
  NestedNet model;
  /// Problems found while assembling the nets (overlapping or repeated ids,
  /// dangling arcs, agents placed twice). The offending items are dropped.
  ValidationReport load_issues;
};

/// Throws ParseError for malformed text or documents of the wrong shape.
ModelDocument parse_model(std::string_view text);

/// Load issues, well-formedness and conservativeness violations together.
ValidationReport validate_model(const ModelDocument& doc);

struct ModelError : Error {
  explicit ModelError(ValidationReport report)
      : Error("model is not valid (" + std::to_string(report.violations().size()) + " violations)"),
        report(std::move(report)) {}
  ValidationReport report;
};

/// parse_model + validate_model. Throws ParseError or ModelError.
NestedNet load_model(std::string_view text);

/// Canonical text form accepted by parse_model.
std::string serialize_model(const NestedNet& np);

}  // namespace npconf
