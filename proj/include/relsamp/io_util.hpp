#pragma once

#include <string>

namespace relsamp {

// Write via a temp file in the same directory and rename into place, so an
// interrupted run never leaves a partial artifact.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace relsamp
