#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ucm/model.hpp"

namespace ucm {

enum class Severity { warning, error };

struct Finding {
  Severity severity = Severity::error;
  std::string location;  // e.g. "cpt perception row 3 (unknown)"
  std::string message;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  /// Ordered by (variable/gate name, row index).
  std::vector<Finding> findings;

  bool ok() const;  // no error-severity findings
  std::size_t error_count() const;

  bool operator==(const ValidationReport&) const = default;
};

/// Checks every structural invariant of a parsed document. Problems are
/// reported, never thrown.
ValidationReport validate(const ModelDocument& doc);

/// Throws ModelError carrying the first error finding, if any.
void require_valid(const ModelDocument& doc);

}  // namespace ucm
