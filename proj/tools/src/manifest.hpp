#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <lanemden/io.hpp>

namespace lanemden::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Collects the files a command writes and emits manifest.json next to them.
class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  // Records a file already written under dir().
  void add(const std::string& name) { files_.push_back(name); }

  void write_manifest(const Json& config, const std::string& command, double wall_seconds, int exit_code) const;

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

}  // namespace lanemden::cli
