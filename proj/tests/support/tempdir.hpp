#ifndef TEMPORA_TESTS_TEMPDIR_HPP
#define TEMPORA_TESTS_TEMPDIR_HPP

#include <atomic>
#include <filesystem>
#include <string>

namespace testsupport {

// A unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tempora-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport

#endif  // TEMPORA_TESTS_TEMPDIR_HPP
