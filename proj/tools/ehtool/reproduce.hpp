#pragma once

#include <filesystem>
#include <string>

#include "common.hpp"

namespace ehtool {

// Scripted pipelines behind `ehtool reproduce <id>`; returns the summary that
// was also written to <out>/<id>/summary.json. Throws eh::validation_error
// for unknown ids.
json run_reproduce(const std::string& id, const std::filesystem::path& out_root);

}  // namespace ehtool
