#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace edhg::cli {

// Writes through a sibling temporary file and renames it into place, so
// readers never observe a partial file. Throws IoError.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& writer);

// Lower-case hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace edhg::cli
