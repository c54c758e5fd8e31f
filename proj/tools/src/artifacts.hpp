// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spn::cli {

/// "%.17g"; non-finite values print as nan / inf.
std::string num(double v);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Output directory that records every file it writes. Files are written to
/// a temporary name and renamed into place; writes are serialised.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& doc);

  struct FileEntry {
    std::string name;
    std::uintmax_t bytes = 0;
    std::string sha256;
  };
  std::vector<FileEntry> inventory() const;

 private:
  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::map<std::string, FileEntry> files_;
};

/// Writes `content` to `path` through a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Small CSV builder with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

}  // namespace spn::cli
