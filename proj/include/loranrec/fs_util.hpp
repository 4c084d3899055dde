#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace loranrec {

// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, fsyncs and renames over `path`, so readers
// observe either the old or the new content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace loranrec
