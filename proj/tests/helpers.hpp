#pragma once

#include "concierge/config.hpp"
#include "concierge/corpus_store.hpp"
#include "concierge/textprep.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

inline std::filesystem::path source_dir() { return CONCIERGE_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("concierge-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Shipped data files, state kept in `state`.
inline concierge::Config test_config(const std::filesystem::path& state) {
  auto c = concierge::Config::defaults(source_dir());
  c.state_dir = state;
  c.lda.iterations = 50;
  return c;
}

// Writes a config file pointing at the shipped data and `state`.
inline std::filesystem::path write_config(const TempDir& dir, const std::string& extra = "") {
  const auto path = dir / "concierge.conf";
  write_file(path, "data_dir = " + data_dir().string() + "\nstate_dir = " + (dir / "state").string() +
                       "\nlda.iterations = 50\n" + extra);
  return path;
}

inline concierge::textprep::TokenizedText tok(std::string_view text) { return concierge::textprep::tokenize(text); }

}  // namespace testing
