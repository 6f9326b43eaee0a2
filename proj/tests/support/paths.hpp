#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace ipricing::testing {

inline std::filesystem::path repo_root() { return std::filesystem::path(IPRICING_REPO_ROOT); }
inline std::filesystem::path fixture(const std::string& rel) { return repo_root() / "fixtures" / rel; }
inline std::filesystem::path prompts_dir() { return repo_root() / "prompts"; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("ipricing_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path dir_;
};

}  // namespace ipricing::testing
