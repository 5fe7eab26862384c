#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmvis/memento/timemap.hpp"
#include "tmvis/simhash/simhash.hpp"

namespace tmvis::cache {

/// Bumped whenever the file layout or the token hash seed changes.
inline constexpr int kFormatVersion = 1;

enum class CacheKind { Histogram, SimHash };

struct CacheKey {
  std::string archive_label;  // "ia" | "ait"
  std::string collection;     // "all" or a numeric Archive-It collection
  memento::OriginalUri uri_r;

  static CacheKey of(const memento::ArchiveSource& archive, const memento::OriginalUri& uri_r);

  friend auto operator<=>(const CacheKey&, const CacheKey&) = default;
};

/// `<kind>_<archive>_<collection>_<uri_r percent-encoded>.json`
std::string cache_key_filename(const CacheKey& key, CacheKind kind);

struct HistogramCache {
  int format_version = kFormatVersion;
  memento::MementoDatetime fetched_at;
  std::vector<memento::MementoDatetime> datetimes;

  friend bool operator==(const HistogramCache&, const HistogramCache&) = default;
};

struct SimHashEntry {
  memento::MementoDatetime datetime;
  std::string uri_m;
  simhash::SimHashValue simhash;

  friend bool operator==(const SimHashEntry&, const SimHashEntry&) = default;
};

struct SimHashCache {
  int format_version = kFormatVersion;
  /// Oldest first.
  std::vector<SimHashEntry> entries;

  friend bool operator==(const SimHashCache&, const SimHashCache&) = default;
};

class CacheMiss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable file or foreign format version; callers treat it as a miss.
class CacheCorrupt : public CacheMiss {
 public:
  using CacheMiss::CacheMiss;
};

/// Directory of JSON cache documents. Writes go to a temp file that is then
/// renamed over the target, so readers never observe a partial document.
class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const { return directory_; }
  std::filesystem::path path_for(const CacheKey& key, CacheKind kind) const;

  void store_histogram(const CacheKey& key, const HistogramCache& cache);
  /// Throws CacheMiss or CacheCorrupt.
  HistogramCache load_histogram(const CacheKey& key) const;

  void store_simhash_cache(const CacheKey& key, const SimHashCache& cache);
  /// Throws CacheMiss or CacheCorrupt.
  SimHashCache load_simhash_cache(const CacheKey& key) const;

  /// Serializes writers of one key inside this process.
  std::mutex& writer_lock(const CacheKey& key);

 private:
  void write_atomically(const std::filesystem::path& path, const std::string& bytes);
  std::string read_file(const std::filesystem::path& path) const;

  std::filesystem::path directory_;
  std::mutex locks_guard_;
  std::map<CacheKey, std::unique_ptr<std::mutex>> locks_;
};

std::string serialize_histogram(const HistogramCache& cache);
std::string serialize_simhash_cache(const SimHashCache& cache);

struct UpToDate {};
struct UpdateCache {
  std::vector<memento::MementoRecord> missing;
};
struct DeleteExtra {
  std::vector<SimHashEntry> working_set;
};
using ReconcileAction = std::variant<UpToDate, UpdateCache, DeleteExtra>;

/// Compares cached fingerprints with the live working set by datetime.
///
/// - Same datetimes: UpToDate.
/// - Live has datetimes the cache lacks and the cache has none live lacks,
///   or live is strictly larger: UpdateCache with the live records whose
///   datetimes are not cached.
/// - Otherwise: DeleteExtra with the cached entries whose datetimes are live.
ReconcileAction reconcile(const SimHashCache& cached,
                          std::span<const memento::MementoRecord> live);

struct SkippedMemento {
  memento::MementoRecord record;
  std::string reason;
};

struct UpdateResult {
  SimHashCache cache;
  std::vector<SkippedMemento> skipped;
};

using FetchHtml = std::function<std::string(const std::string& uri_m)>;
using ComputeSimHash = std::function<simhash::SimHashValue(std::string_view html)>;

/// Fingerprints only `missing`, merges with `cached`, sorts oldest first and
/// overwrites the key's SimHash cache file. Mementos whose fetch fails with
/// MementoGone or MementoUnreachable are skipped and reported.
UpdateResult apply_update_cache(CacheStore& store, const CacheKey& key,
                                const SimHashCache& cached,
                                std::span<const memento::MementoRecord> missing,
                                const FetchHtml& fetch_html, const ComputeSimHash& hash);

/// Cached entries whose datetimes are live. Never touches the cache file:
/// mementos missing today may come back.
std::vector<SimHashEntry> apply_delete_extra(const SimHashCache& cached,
                                             std::span<const memento::MementoRecord> live);

}  // namespace tmvis::cache
