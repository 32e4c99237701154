#pragma once

#include <filesystem>
#include <string>

namespace awf {

std::string now_iso8601();

// Seconds since the Unix epoch as a double (sub-second resolution).
double now_epoch_seconds();

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Hard-links src to dst, copying when linking fails (cross-device, perms).
void link_or_copy(const std::filesystem::path& src, const std::filesystem::path& dst);

std::string random_hex(std::size_t bytes);

} // namespace awf
