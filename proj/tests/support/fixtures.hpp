#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace meshscore::testing {

inline std::string fixture(const std::string& name) {
  return std::string(MESHSCORE_FIXTURES) + "/" + name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("meshscore_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace meshscore::testing
