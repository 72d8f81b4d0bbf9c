#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace esqpt {

/// Content-addressed on-disk store. Keys are SHA-256 digests of a canonical
/// description; entries are written to a temporary file and renamed into place,
/// so readers never see partial content and concurrent writers of one key are safe.
class Cache {
 public:
  explicit Cache(std::filesystem::path root);

  static std::string key(std::string_view description);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, std::string_view content) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path path_of(const std::string& key) const;
  std::filesystem::path root_;
};

std::string sha256_hex(std::string_view data);

}  // namespace esqpt
