#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"

namespace dh::fs {

namespace stdfs = std::filesystem;

Bytes read_file(const stdfs::path& path);                 // throws on failure
std::optional<Bytes> try_read_file(const stdfs::path& path);
std::string read_text_file(const stdfs::path& path);

// Writes via a temp file in the same directory and renames into place.
void write_file(const stdfs::path& path, BytesView data);
void write_file(const stdfs::path& path, std::string_view data);

std::vector<std::string> read_lines(const stdfs::path& path);

// Sorted list of regular files under dir (non-recursive), relative names.
std::vector<std::string> list_files(const stdfs::path& dir);

}  // namespace dh::fs
