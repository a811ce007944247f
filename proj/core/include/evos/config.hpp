#pragma once

#include <map>
#include <string>
#include <vector>

#include "evos/trainer.hpp"

namespace evos {

// Flat key=value config file: one pair per line, '#' comments, blank
// lines ignored. Later keys win.
std::map<std::string, std::string> parseKeyValueFile(const std::string& path);

// Applies one key=value pair; throws on unknown keys or unparsable
// values. The key set is documented in the README.
void applyOption(ExperimentConfig& config, const std::string& key, const std::string& value);

// Config file (optional) + command-line overrides, in that order.
ExperimentConfig buildConfig(const std::string& configPath,
                             const std::vector<std::string>& overrides);

// Round-trippable echo of every option.
std::string serializeConfig(const ExperimentConfig& config);

}  // namespace evos
