#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wiresynth {

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& cause)
      : std::runtime_error(path.string() + ": " + cause), path_(path) {}

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary and rename; creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace wiresynth
