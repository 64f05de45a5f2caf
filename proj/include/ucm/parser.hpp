#pragma once

#include <string>
#include <string_view>

#include "ucm/model.hpp"

namespace ucm {

/// Parses `.ucm` model text. Only syntax is checked here; run validate()
/// before analysing the result.
///
/// Throws ParseError (with line and column) on malformed input, unknown
/// keywords, bad number literals, or a repeated section.
ModelDocument parse_model(std::string_view text);

/// Reads and parses a file. Throws std::runtime_error if it cannot be read.
ModelDocument load_model(const std::string& path);

/// Canonical `.ucm` text. parse_model(serialize(doc)) == doc for any
/// document whose names are valid identifiers.
std::string serialize(const ModelDocument& doc);

}  // namespace ucm
