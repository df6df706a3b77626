#pragma once

#include <iosfwd>

#include "json.hpp"

namespace dixie::cli {

using Json = nlohmann::ordered_json;

/// Indented `key: value` records; arrays of objects become tables.
void render_text(const Json& envelope, std::ostream& out);

/// results.rows as CSV with a header line. Returns false if there are none.
bool render_csv(const Json& envelope, std::ostream& out);

}  // namespace dixie::cli
