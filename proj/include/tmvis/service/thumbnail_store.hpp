#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace tmvis::service {

/// Successful renders on disk, keyed by (uri_m, attempt) and shared by all
/// jobs. The oldest files go once the directory exceeds `max_bytes`.
class ThumbnailStore {
 public:
  ThumbnailStore(std::filesystem::path directory, std::size_t max_bytes);

  std::optional<std::string> find(const std::string& uri_m, unsigned attempt) const;
  void put(const std::string& uri_m, unsigned attempt, const std::string& png);
  std::size_t bytes_used() const;

 private:
  std::filesystem::path path_for(const std::string& uri_m, unsigned attempt) const;
  void evict_locked();

  std::filesystem::path directory_;
  std::size_t max_bytes_;
  mutable std::mutex mutex_;
  std::size_t used_ = 0;
};

}  // namespace tmvis::service
