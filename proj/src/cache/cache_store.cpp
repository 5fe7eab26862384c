#include "tmvis/cache/cache_store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tmvis/memento/archive_client.hpp"

namespace tmvis::cache {
namespace {

using nlohmann::json;
using memento::MementoDatetime;
using memento::MementoRecord;

const char* kind_prefix(CacheKind kind) {
  return kind == CacheKind::Histogram ? "histogram" : "simhash";
}

MementoDatetime parse_datetime(const json& value) {
  const auto dt = MementoDatetime::parse_14digit(value.get<std::string>());
  if (!dt) throw CacheCorrupt("bad datetime in cache file");
  return *dt;
}

json parse_document(const std::string& bytes, const char* kind) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw CacheCorrupt(std::string(kind) + " cache unparseable: " + e.what());
  }
  if (!doc.is_object() || doc.value("format_version", 0) != kFormatVersion)
    throw CacheCorrupt(std::string(kind) + " cache has a foreign format version");
  return doc;
}

std::vector<MementoDatetime> sorted_datetimes(std::span<const MementoRecord> records) {
  std::vector<MementoDatetime> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.datetime);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MementoDatetime> sorted_datetimes(std::span<const SimHashEntry> entries) {
  std::vector<MementoDatetime> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.datetime);
  std::sort(out.begin(), out.end());
  return out;
}

bool contains(const std::vector<MementoDatetime>& sorted, MementoDatetime dt) {
  return std::binary_search(sorted.begin(), sorted.end(), dt);
}

}  // namespace

CacheKey CacheKey::of(const memento::ArchiveSource& archive,
                      const memento::OriginalUri& uri_r) {
  const bool ia = archive.kind == memento::ArchiveKind::InternetArchive;
  return {archive.label(), ia || archive.collection.empty() ? "all" : archive.collection,
          uri_r};
}

std::string cache_key_filename(const CacheKey& key, CacheKind kind) {
  const std::string collection = key.collection.empty() ? "all" : key.collection;
  return std::string(kind_prefix(kind)) + "_" + key.archive_label + "_" +
         memento::percent_encode_strict(collection) + "_" +
         memento::percent_encode_strict(key.uri_r.str()) + ".json";
}

std::string serialize_histogram(const HistogramCache& cache) {
  json doc;
  doc["format_version"] = cache.format_version;
  doc["fetched_at"] = cache.fetched_at.digits14();
  json datetimes = json::array();
  for (const auto& dt : cache.datetimes) datetimes.push_back(dt.digits14());
  doc["datetimes"] = std::move(datetimes);
  return doc.dump(1) + "\n";
}

std::string serialize_simhash_cache(const SimHashCache& cache) {
  json doc;
  doc["format_version"] = cache.format_version;
  json entries = json::array();
  for (const auto& e : cache.entries) {
    entries.push_back({{"datetime", e.datetime.digits14()},
                       {"uri_m", e.uri_m},
                       {"simhash", std::string(e.simhash.hex())}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1) + "\n";
}

CacheStore::CacheStore(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

std::filesystem::path CacheStore::path_for(const CacheKey& key, CacheKind kind) const {
  return directory_ / cache_key_filename(key, kind);
}

void CacheStore::write_atomically(const std::filesystem::path& path,
                                  const std::string& bytes) {
  static std::atomic<unsigned long> counter{0};
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << "." << counter++;
  auto temp = path;
  temp += suffix.str();
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("cannot write cache file " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

std::string CacheStore::read_file(const std::filesystem::path& path) const {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheMiss("no cache file " + path.filename().string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void CacheStore::store_histogram(const CacheKey& key, const HistogramCache& cache) {
  write_atomically(path_for(key, CacheKind::Histogram), serialize_histogram(cache));
}

HistogramCache CacheStore::load_histogram(const CacheKey& key) const {
  const json doc = parse_document(read_file(path_for(key, CacheKind::Histogram)), "histogram");
  HistogramCache cache;
  try {
    cache.format_version = doc.at("format_version").get<int>();
    cache.fetched_at = parse_datetime(doc.at("fetched_at"));
    for (const auto& dt : doc.at("datetimes")) cache.datetimes.push_back(parse_datetime(dt));
  } catch (const json::exception& e) {
    throw CacheCorrupt(std::string("histogram cache malformed: ") + e.what());
  }
  if (!std::is_sorted(cache.datetimes.begin(), cache.datetimes.end()))
    throw CacheCorrupt("histogram cache datetimes out of order");
  return cache;
}

void CacheStore::store_simhash_cache(const CacheKey& key, const SimHashCache& cache) {
  write_atomically(path_for(key, CacheKind::SimHash), serialize_simhash_cache(cache));
}

SimHashCache CacheStore::load_simhash_cache(const CacheKey& key) const {
  const json doc = parse_document(read_file(path_for(key, CacheKind::SimHash)), "simhash");
  SimHashCache cache;
  try {
    cache.format_version = doc.at("format_version").get<int>();
    for (const auto& e : doc.at("entries")) {
      auto hash = simhash::SimHashValue::from_hex(e.at("simhash").get<std::string>());
      if (!hash || e.at("simhash").get<std::string>() != hash->hex())
        throw CacheCorrupt("simhash cache holds an invalid fingerprint");
      cache.entries.push_back(
          {parse_datetime(e.at("datetime")), e.at("uri_m").get<std::string>(), *hash});
    }
  } catch (const json::exception& e) {
    throw CacheCorrupt(std::string("simhash cache malformed: ") + e.what());
  }
  if (!std::is_sorted(cache.entries.begin(), cache.entries.end(),
                      [](const auto& a, const auto& b) { return a.datetime < b.datetime; }))
    throw CacheCorrupt("simhash cache entries out of order");
  return cache;
}

std::mutex& CacheStore::writer_lock(const CacheKey& key) {
  std::lock_guard guard(locks_guard_);
  auto& slot = locks_[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ReconcileAction reconcile(const SimHashCache& cached, std::span<const MementoRecord> live) {
  const auto cached_dts = sorted_datetimes(cached.entries);
  const auto live_dts = sorted_datetimes(live);
  if (cached_dts == live_dts) return UpToDate{};

  std::vector<MementoRecord> missing;
  for (const auto& record : live)
    if (!contains(cached_dts, record.datetime)) missing.push_back(record);
  const bool has_extra = std::any_of(cached_dts.begin(), cached_dts.end(), [&](auto dt) {
    return !contains(live_dts, dt);
  });

  if (missing.empty() && !has_extra) return UpToDate{};
  if (!missing.empty() && (!has_extra || live.size() > cached.entries.size()))
    return UpdateCache{std::move(missing)};
  return DeleteExtra{apply_delete_extra(cached, live)};
}

UpdateResult apply_update_cache(CacheStore& store, const CacheKey& key,
                                const SimHashCache& cached,
                                std::span<const MementoRecord> missing,
                                const FetchHtml& fetch_html, const ComputeSimHash& hash) {
  UpdateResult result;
  result.cache = cached;
  if (missing.empty()) return result;

  for (const auto& record : missing) {
    try {
      const std::string html = fetch_html(record.uri_m);
      result.cache.entries.push_back({record.datetime, record.uri_m, hash(html)});
    } catch (const memento::MementoGone& e) {
      result.skipped.push_back({record, e.what()});
    } catch (const memento::MementoUnreachable& e) {
      result.skipped.push_back({record, e.what()});
    }
  }
  std::stable_sort(result.cache.entries.begin(), result.cache.entries.end(),
                   [](const SimHashEntry& a, const SimHashEntry& b) {
                     if (a.datetime != b.datetime) return a.datetime < b.datetime;
                     return a.uri_m < b.uri_m;
                   });
  result.cache.format_version = kFormatVersion;
  store.store_simhash_cache(key, result.cache);
  return result;
}

std::vector<SimHashEntry> apply_delete_extra(const SimHashCache& cached,
                                             std::span<const MementoRecord> live) {
  const auto live_dts = sorted_datetimes(live);
  std::vector<SimHashEntry> working;
  for (const auto& entry : cached.entries)
    if (contains(live_dts, entry.datetime)) working.push_back(entry);
  return working;
}

}  // namespace tmvis::cache
