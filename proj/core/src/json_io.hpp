#pragma once

// Private JSON helpers shared by the corpus, eval and service code.

#include <json.hpp>

#include "mwpr/record.hpp"

namespace mwpr::detail {

using json = nlohmann::json;

/// Native record object. `with_numbers` adds "textNumbers" (index files).
json record_to_json(const MWPRecord& r, bool with_numbers = false);

/// Accepts the native schema; text numbers are taken from "textNumbers"
/// when present, otherwise extracted from the text. Throws InvalidRecord.
MWPRecord record_from_json(const json& j);

}  // namespace mwpr::detail
