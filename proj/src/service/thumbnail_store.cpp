#include "tmvis/service/thumbnail_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "tmvis/simhash/hash128.hpp"

namespace tmvis::service {

namespace fs = std::filesystem;

ThumbnailStore::ThumbnailStore(fs::path directory, std::size_t max_bytes)
    : directory_(std::move(directory)), max_bytes_(max_bytes) {
  fs::create_directories(directory_);
  for (const auto& entry : fs::directory_iterator(directory_))
    if (entry.is_regular_file()) used_ += entry.file_size();
}

fs::path ThumbnailStore::path_for(const std::string& uri_m, unsigned attempt) const {
  const auto h = simhash::murmur3_x64_128(uri_m, 0);
  char name[64];
  std::snprintf(name, sizeof name, "%016llx%016llx_%u.png",
                static_cast<unsigned long long>(h.hi), static_cast<unsigned long long>(h.lo),
                attempt);
  return directory_ / name;
}

std::optional<std::string> ThumbnailStore::find(const std::string& uri_m,
                                                unsigned attempt) const {
  std::lock_guard lock(mutex_);
  std::ifstream in(path_for(uri_m, attempt), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return bytes.str();
}

void ThumbnailStore::put(const std::string& uri_m, unsigned attempt, const std::string& png) {
  std::lock_guard lock(mutex_);
  const fs::path target = path_for(uri_m, attempt);
  std::error_code ec;
  if (fs::exists(target, ec)) used_ -= std::min<std::size_t>(used_, fs::file_size(target, ec));
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(png.data(), std::streamsize(png.size()));
    if (!out) return;
  }
  fs::rename(temp, target, ec);
  if (ec) return;
  used_ += png.size();
  evict_locked();
}

std::size_t ThumbnailStore::bytes_used() const {
  std::lock_guard lock(mutex_);
  return used_;
}

void ThumbnailStore::evict_locked() {
  if (used_ <= max_bytes_) return;
  struct File {
    fs::path path;
    fs::file_time_type mtime;
    std::size_t size;
  };
  std::vector<File> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(directory_, ec))
    if (entry.is_regular_file()) files.push_back({entry.path(), entry.last_write_time(), entry.file_size()});
  std::sort(files.begin(), files.end(),
            [](const File& a, const File& b) { return a.mtime < b.mtime; });
  for (const auto& f : files) {
    if (used_ <= max_bytes_) break;
    if (fs::remove(f.path, ec)) used_ -= std::min(used_, f.size);
  }
}

}  // namespace tmvis::service
