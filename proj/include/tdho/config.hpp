#pragma once

// JSON (de)serialization of profiles and system specs.
//
//   {"t0": 0.0,
//    "nu": {"family": "linear", "params": {"intercept": 0, "slope": 0.5}, "domain": [0, 100]},
//    "h2": {"family": "constant", "params": {"value": 0.5}}}
//
// Families and their params:
//   constant    {value}
//   linear      {intercept, slope}
//   sinusoidal  {offset, amplitude, frequency, phase}
//   polynomial  {coefficients: [c0, c1, ...]}
//   tabulated   {times: [...], values: [...]} or {csv: "path"}; optional
//               "interpolation": "monotone_cubic" (default) | "linear"
// "domain" is optional (unbounded) and ignored for tabulated profiles.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tdho/profile.hpp"

namespace tdho {

TimeProfile profile_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json profile_to_json(const TimeProfile& p);

SystemSpec spec_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json spec_to_json(const SystemSpec& spec);

SystemSpec load_spec_file(const std::string& path);

/// Two-column (time,value) CSV; a non-numeric first line is treated as a header.
TimeProfile load_tabulated_csv(const std::string& path,
                               Interpolation interpolation = Interpolation::monotone_cubic);

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string spec_hash(const SystemSpec& spec);

}  // namespace tdho
