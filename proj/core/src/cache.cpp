#include "esqpt/cache.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <random>

#include <openssl/evp.h>

#include "esqpt/error.hpp"

namespace esqpt {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(2 * len, '0');
  for (unsigned i = 0; i < len; ++i) {
    out[2 * i] = hex[md[i] >> 4];
    out[2 * i + 1] = hex[md[i] & 0xF];
  }
  return out;
}

Cache::Cache(std::filesystem::path root) : root_(std::move(root)) { std::filesystem::create_directories(root_); }

std::string Cache::key(std::string_view description) { return sha256_hex(description); }

std::filesystem::path Cache::path_of(const std::string& key) const {
  if (key.size() < 3) throw InvalidSpec("cache key too short");
  return root_ / key.substr(0, 2) / key;
}

std::optional<std::string> Cache::get(const std::string& key) const {
  std::ifstream in(path_of(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Cache::put(const std::string& key, std::string_view content) const {
  static std::atomic<unsigned long> counter{0};
  const auto final_path = path_of(key);
  std::filesystem::create_directories(final_path.parent_path());
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::random_device{}() << '.' << counter++;
  const auto tmp = final_path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace esqpt
