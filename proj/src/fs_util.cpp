#include "opinion/fs_util.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "opinion/error.hpp"

namespace opinion {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());

  auto temp = path;
  temp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
          "." + std::to_string(counter++);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write '" + temp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::MissingFile, "short write to '" + temp.string() + "'");
  }
  std::filesystem::rename(temp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace opinion
