#pragma once

#include <filesystem>
#include <string>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Reads a `key = value` config file ('#' starts a comment). Unknown keys are
// a ParseError, out-of-range values a ValidationError. Missing keys keep
// their defaults.
PipelineConfig read_config(const std::filesystem::path& path);

// Applies a single `key=value` override (as passed on a command line).
void apply_config_override(PipelineConfig& config, const std::string& key,
                           const std::string& value);

void write_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace dualgroup
