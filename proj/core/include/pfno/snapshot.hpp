#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pfno/field.hpp"

namespace pfno {

using Meta = std::map<std::string, std::string>;

std::vector<char> snapshot_bytes(const std::vector<Field2D>& channels);
std::vector<Field2D> snapshot_parse(const std::vector<char>& bytes, double length = 1.0);

void snapshot_write(const std::vector<Field2D>& channels, const std::filesystem::path& path,
                    const Meta& meta = {});
// The file stores no domain length; callers supply it.
std::vector<Field2D> snapshot_read(const std::filesystem::path& path, double length = 1.0);

// Reads `<path>.meta`; empty when the sidecar is absent.
Meta snapshot_meta(const std::filesystem::path& path);

std::vector<char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<char>& bytes);

}  // namespace pfno
