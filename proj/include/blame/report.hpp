#pragma once

// Small I/O helpers shared by every artifact writer.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace blame {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Shortest round-trippable decimal for a double ("%.17g" trimmed).
std::string format_double(double v);
// Fixed number of decimals.
std::string format_fixed(double v, int decimals);

// Writes to `path.tmp` then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);  // throws MissingArtifact

std::vector<std::string> split_tab(std::string_view line);

}  // namespace blame
