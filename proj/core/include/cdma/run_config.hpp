// SPDX-License-Identifier: Apache-2.0
//
// Key-value experiment configuration (# comments, one `key = value` per
// line). Unset keys take the standard defaults; unknown keys are errors. The
// run manifest is itself a valid configuration document whose metadata lives
// in comment lines, so a run can be replayed from its manifest verbatim.
#pragma once

#include <string>
#include <string_view>

#include "cdma/monte_carlo.hpp"

namespace cdma {

/// Parses a configuration document into an experiment spec.
/// Throws ParseError (with line number), UnknownKey, or InvalidValue.
ExperimentSpec parse_config(std::string_view text);

/// Reads and parses a configuration file. Throws IoError if unreadable.
ExperimentSpec load_config_file(const std::string& path);

/// Renders the fully resolved spec plus run metadata (as comments).
std::string render_manifest(const ExperimentSpec& spec, std::string_view tool_version,
                            std::string_view csv_filename, std::string_view started_at,
                            double wall_seconds);

}  // namespace cdma
