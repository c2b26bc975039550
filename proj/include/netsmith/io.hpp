#pragma once

// JSON documents and file helpers. Transfer functions are stored as
//   {"num": [...], "den": [...], "h": seconds}
// with coefficients in descending powers of z.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "netsmith/gain_analysis.hpp"
#include "netsmith/lti.hpp"
#include "netsmith/smith_design.hpp"
#include "netsmith/stability.hpp"

namespace netsmith::io {

using nlohmann::json;

json tf_to_json(const lti::RationalTF& tf);
lti::RationalTF tf_from_json(const json& j);

json design_to_json(const PredictorDesign& d);
PredictorDesign design_from_json(const json& j);

json verdict_to_json(const StabilityVerdict& v);
json residuals_to_json(const DesignResiduals& r);

/// Parses a JSON file; ValidationError on I/O or syntax errors.
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Stable text form used for hashing: compact dump with sorted keys.
std::string canonical(const json& j);
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
inline std::string hash_of(const json& j) { return hex64(fnv1a64(canonical(j))); }

}  // namespace netsmith::io
