#ifndef DFRC_CONFIG_HPP
#define DFRC_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "dfrc/types.hpp"

namespace dfrc {

/// Parse a key/value scenario file. Keys mirror the ScenarioConfig field
/// names; a leading `[scenario]` section header is accepted. Unknown keys
/// raise std::invalid_argument naming the key.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_stream(std::istream& in);

/// Canonical textual form of a config (also the hashing input).
std::string scenario_to_text(const ScenarioConfig& cfg);

/// FNV-1a hash of the canonical config text, for artifact headers.
std::string scenario_hash(const ScenarioConfig& cfg);

}  // namespace dfrc

#endif  // DFRC_CONFIG_HPP
