#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>

namespace esqpt {

/// key = value lines; '#' starts a comment; blank lines are ignored.
/// Throws InvalidSpec on lines without '=' or with an empty key.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> load_config(const std::filesystem::path& path);

}  // namespace esqpt
