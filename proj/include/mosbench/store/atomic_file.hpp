#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mosbench::store {

/// Writes `content` to a temporary sibling and renames it over `path`, so readers
/// see either the old or the new file. Creates parent directories. Throws Error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole file as a string; throws InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace mosbench::store
