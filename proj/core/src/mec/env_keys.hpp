#pragma once

#include <string>

#include "bcmec/mec/config.hpp"

namespace bcmec::mec::detail {

// Applies one "section.key" entry of the [env]/[mining]/[gas] sections.
// Returns false if the key does not belong to those sections; throws
// ConfigError for an unknown key inside them.
bool apply_env_key(EnvConfig& config, const std::string& key, const std::string& value);

}  // namespace bcmec::mec::detail
