#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "tmvis/cache/cache_store.hpp"
#include "tmvis/memento/archive_client.hpp"

using namespace tmvis;
using namespace tmvis::cache;
using memento::MementoDatetime;
using memento::MementoRecord;
using memento::OriginalUri;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("tmvis-cache-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

MementoDatetime day(int i) {
  return MementoDatetime(MementoDatetime::from_civil(2010, 1, 1).instant() + std::chrono::days(i));
}

MementoRecord record(int i) {
  return {"http://archive.test/web/" + day(i).digits14() + "/http://example.com/", day(i),
          OriginalUri("http://example.com/")};
}

simhash::SimHashValue fake_hash(std::string_view html) {
  return simhash::simhash_html(html);
}

SimHashEntry entry(int i) {
  const auto r = record(i);
  return {r.datetime, r.uri_m, fake_hash("page " + std::to_string(i))};
}

const CacheKey kKey{"ia", "all", OriginalUri("http://example.com/")};

}  // namespace

TEST_CASE("cache file names") {
  const CacheKey key = CacheKey::of(memento::ArchiveSource::internet_archive(), OriginalUri("http://odu.edu/"));
  CHECK(cache_key_filename(key, CacheKind::Histogram) == "histogram_ia_all_http%3A%2F%2Fodu.edu%2F.json");
  CHECK(cache_key_filename(key, CacheKind::SimHash) == "simhash_ia_all_http%3A%2F%2Fodu.edu%2F.json");
  const CacheKey ait = CacheKey::of(memento::ArchiveSource::archive_it("1068"), OriginalUri("http://odu.edu/"));
  CHECK(cache_key_filename(ait, CacheKind::SimHash) == "simhash_ait_1068_http%3A%2F%2Fodu.edu%2F.json");
  CHECK(cache_key_filename(CacheKey::of(memento::ArchiveSource::internet_archive(), OriginalUri("http://odu.edu/a")),
                           CacheKind::SimHash) != cache_key_filename(key, CacheKind::SimHash));
  // Collection is ignored for the Internet Archive.
  memento::ArchiveSource ia;
  ia.collection = "77";
  CHECK(CacheKey::of(ia, OriginalUri("http://odu.edu/")).collection == "all");
}

TEST_CASE("store and load round-trip byte-exactly") {
  TempDir dir;
  CacheStore store(dir.path);
  CHECK_THROWS_AS(store.load_histogram(kKey), CacheMiss);
  CHECK_THROWS_AS(store.load_simhash_cache(kKey), CacheMiss);

  HistogramCache h{kFormatVersion, day(100), {day(1), day(2), day(50)}};
  store.store_histogram(kKey, h);
  CHECK(store.load_histogram(kKey) == h);
  CHECK(slurp(store.path_for(kKey, CacheKind::Histogram)) == serialize_histogram(h));

  SimHashCache s{kFormatVersion, {entry(1), entry(2), entry(3)}};
  store.store_simhash_cache(kKey, s);
  const auto loaded = store.load_simhash_cache(kKey);
  CHECK(loaded == s);
  CHECK(serialize_simhash_cache(loaded) == slurp(store.path_for(kKey, CacheKind::SimHash)));

  // No temp files left behind.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path)) ++files;
  CHECK(files == 2);
}

TEST_CASE("corrupt and foreign-version files are CacheCorrupt") {
  TempDir dir;
  CacheStore store(dir.path);
  SimHashCache s{kFormatVersion, {entry(1), entry(2)}};
  store.store_simhash_cache(kKey, s);
  const auto path = store.path_for(kKey, CacheKind::SimHash);
  const std::string bytes = slurp(path);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(store.load_simhash_cache(kKey), CacheCorrupt);

  std::string future = bytes;
  future.replace(future.find("\"format_version\": 1"), 19, "\"format_version\": 2");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << future;
  }
  CHECK_THROWS_AS(store.load_simhash_cache(kKey), CacheCorrupt);

  std::string bad_hex = bytes;
  bad_hex.replace(bad_hex.find(std::string(entry(1).simhash.hex())), 32, std::string(32, 'z'));
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bad_hex;
  }
  CHECK_THROWS_AS(store.load_simhash_cache(kKey), CacheCorrupt);
}

TEST_CASE("reconcile classification") {
  const SimHashCache cached{kFormatVersion, {entry(1), entry(2)}};
  std::vector<MementoRecord> live{record(1), record(2)};
  CHECK(std::holds_alternative<UpToDate>(reconcile(cached, live)));

  live = {record(1), record(2), record(3), record(4), record(5)};
  const auto update = reconcile(cached, live);
  REQUIRE(std::holds_alternative<UpdateCache>(update));
  const auto& missing = std::get<UpdateCache>(update).missing;
  REQUIRE(missing.size() == 3);
  CHECK(missing[0] == record(3));
  CHECK(missing[2] == record(5));

  live = {record(2)};
  const auto extra = reconcile(cached, live);
  REQUIRE(std::holds_alternative<DeleteExtra>(extra));
  CHECK(std::get<DeleteExtra>(extra).working_set == std::vector<SimHashEntry>{entry(2)});

  // Same size, one swapped datetime: extras present and live is not larger.
  live = {record(1), record(9)};
  CHECK(std::holds_alternative<DeleteExtra>(reconcile(cached, live)));

  // Live larger and also missing a cached one: update first.
  live = {record(2), record(3), record(4)};
  CHECK(std::holds_alternative<UpdateCache>(reconcile(cached, live)));

  CHECK(std::holds_alternative<UpToDate>(reconcile(SimHashCache{}, {})));
}

TEST_CASE("reconcile against set-difference oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    SimHashCache cached;
    std::vector<MementoRecord> live;
    std::set<int> cached_days, live_days;
    for (int d = 0; d < 30; ++d) {
      if (rng() % 2) cached_days.insert(d);
      if (rng() % 2) live_days.insert(d);
    }
    for (int d : cached_days) cached.entries.push_back(entry(d));
    for (int d : live_days) live.push_back(record(d));
    std::vector<int> missing, extra;
    std::set_difference(live_days.begin(), live_days.end(), cached_days.begin(), cached_days.end(),
                        std::back_inserter(missing));
    std::set_difference(cached_days.begin(), cached_days.end(), live_days.begin(), live_days.end(),
                        std::back_inserter(extra));
    const auto action = reconcile(cached, live);
    if (missing.empty() && extra.empty()) {
      CHECK(std::holds_alternative<UpToDate>(action));
    } else if (!missing.empty() && (extra.empty() || live.size() > cached.entries.size())) {
      REQUIRE(std::holds_alternative<UpdateCache>(action));
      const auto& got = std::get<UpdateCache>(action).missing;
      REQUIRE(got.size() == missing.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == record(missing[i]));
    } else {
      REQUIRE(std::holds_alternative<DeleteExtra>(action));
      const auto& ws = std::get<DeleteExtra>(action).working_set;
      std::vector<int> both;
      std::set_intersection(live_days.begin(), live_days.end(), cached_days.begin(), cached_days.end(),
                            std::back_inserter(both));
      REQUIRE(ws.size() == both.size());
      for (std::size_t i = 0; i < ws.size(); ++i) CHECK(ws[i] == entry(both[i]));
    }
  }
}

TEST_CASE("update cache hashes only the missing mementos") {
  TempDir dir;
  CacheStore store(dir.path);
  const SimHashCache cached{kFormatVersion, {entry(2), entry(4)}};
  store.store_simhash_cache(kKey, cached);
  const std::vector<MementoRecord> live{record(1), record(2), record(3), record(4), record(5)};

  std::size_t fetches = 0, hashes = 0;
  const FetchHtml fetch = [&](const std::string& uri_m) {
    ++fetches;
    for (int d = 0; d < 10; ++d)
      if (record(d).uri_m == uri_m) return "page " + std::to_string(d);
    throw memento::MementoGone(404);
  };
  const ComputeSimHash hash = [&](std::string_view html) {
    ++hashes;
    return simhash::simhash_html(html);
  };
  const auto action = reconcile(cached, live);
  REQUIRE(std::holds_alternative<UpdateCache>(action));
  const auto& missing = std::get<UpdateCache>(action).missing;
  const auto result = apply_update_cache(store, kKey, cached, missing, fetch, hash);
  CHECK(fetches == 3);
  CHECK(hashes == 3);
  CHECK(result.skipped.empty());
  REQUIRE(result.cache.entries.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(result.cache.entries[std::size_t(i)] == entry(i + 1));
  CHECK(store.load_simhash_cache(kKey) == result.cache);
  CHECK(std::holds_alternative<UpToDate>(reconcile(result.cache, live)));

  // Nothing missing: unchanged, nothing hashed.
  hashes = 0;
  const auto same = apply_update_cache(store, kKey, result.cache, {}, fetch, hash);
  CHECK(same.cache == result.cache);
  CHECK(hashes == 0);
}

TEST_CASE("gone mementos are skipped and reported") {
  TempDir dir;
  CacheStore store(dir.path);
  const SimHashCache cached{kFormatVersion, {entry(1), entry(2)}};
  const std::vector<MementoRecord> missing{record(3), record(4), record(5)};
  const FetchHtml fetch = [&](const std::string& uri_m) -> std::string {
    if (uri_m == record(4).uri_m) throw memento::MementoGone(404);
    if (uri_m == record(5).uri_m) throw memento::MementoUnreachable("timeout");
    return "page 3";
  };
  const auto result = apply_update_cache(store, kKey, cached, missing, fetch, fake_hash);
  CHECK(result.cache.entries.size() == 3);
  REQUIRE(result.skipped.size() == 2);
  CHECK(result.skipped[0].record == record(4));
  CHECK(result.skipped[1].record == record(5));
}

TEST_CASE("delete-extra never touches the file") {
  TempDir dir;
  CacheStore store(dir.path);
  const SimHashCache cached{kFormatVersion, {entry(1), entry(2), entry(3)}};
  store.store_simhash_cache(kKey, cached);
  const auto path = store.path_for(kKey, CacheKind::SimHash);
  const std::string before = slurp(path);
  const auto mtime = std::filesystem::last_write_time(path);

  const std::vector<MementoRecord> live{record(1), record(3)};
  const auto action = reconcile(cached, live);
  REQUIRE(std::holds_alternative<DeleteExtra>(action));
  CHECK(std::get<DeleteExtra>(action).working_set == std::vector<SimHashEntry>{entry(1), entry(3)});
  CHECK(apply_delete_extra(cached, live) == std::vector<SimHashEntry>{entry(1), entry(3)});
  CHECK(apply_delete_extra(cached, {}).empty());
  CHECK(apply_delete_extra(cached, std::vector<MementoRecord>{record(1), record(2), record(3)}) == cached.entries);
  CHECK(slurp(path) == before);
  CHECK(std::filesystem::last_write_time(path) == mtime);
}

TEST_CASE("writer locks are per key") {
  TempDir dir;
  CacheStore store(dir.path);
  const CacheKey other{"ia", "all", OriginalUri("http://other.com/")};
  CHECK(&store.writer_lock(kKey) == &store.writer_lock(kKey));
  CHECK(&store.writer_lock(kKey) != &store.writer_lock(other));
}
