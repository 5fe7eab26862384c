#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tmvis/cache/cache_store.hpp"
#include "tmvis/memento/archive_client.hpp"
#include "tmvis/render/backend.hpp"
#include "tmvis/render/gif.hpp"
#include "tmvis/service/config.hpp"
#include "tmvis/service/job.hpp"
#include "tmvis/service/thumbnail_store.hpp"

namespace httplib {
class Server;
}

namespace tmvis::service {

/// Error carrying the HTTP status it maps to.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// Below this many mementos the whole TimeMap may be rendered.
inline constexpr std::size_t kSmallTimeMap = 12;

struct TimeMapOverview {
  std::vector<memento::OriginalUri> uri_rs;
  std::size_t memento_count = 0;
  memento::Histogram histogram;
  memento::MementoDatetime first;
  memento::MementoDatetime last;
  bool small_timemap = false;
  std::size_t malformed = 0;
};

/// Which mementos to render: a menu count, every memento, or explicit
/// positions into the job's fingerprinted list.
struct Selection {
  enum class Kind { Count, All, Indices } kind = Kind::Count;
  std::size_t count = 0;
  std::vector<std::size_t> indices;
};

class Service {
 public:
  /// `backend` defaults to the one named by config.render_backend.
  explicit Service(ServiceConfig config, std::shared_ptr<render::RenderBackend> backend = nullptr);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  TimeMapOverview timemap_overview(const std::vector<memento::OriginalUri>& uri_rs,
                                   const memento::ArchiveSource& archive);

  /// Queues the summarization pipeline and returns immediately.
  std::shared_ptr<Job> start_summarize(JobRequest request);

  /// Throws ApiError (409 wrong phase, 400 bad selection).
  std::vector<render::Thumbnail> render_thumbnails(Job& job, const Selection& selection);
  /// Throws ApiError (404 uri_m not among the job's thumbnails, 409 the
  /// selection was re-rendered meanwhile).
  render::Thumbnail refresh_thumbnail(Job& job, const std::string& uri_m);

  /// URI-Ms of the current selection, chronological, filtered by `include`
  /// when it is non-empty. `count` picks a menu option when nothing has been
  /// rendered yet.
  std::vector<memento::MementoRecord> selected_records(
      const Job& job, const std::vector<std::string>& include,
      std::optional<std::size_t> count = std::nullopt) const;
  std::string gif(const Job& job, const render::GifSpec& spec,
                  const std::vector<std::string>& include) const;

  JobStore& jobs() { return jobs_; }
  cache::CacheStore& cache() { return cache_; }
  const ServiceConfig& config() const { return config_; }
  /// SimHash computations since start-up, across all jobs.
  std::uint64_t simhash_computations() const { return simhash_count_.load(); }

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Pools;

  void run_pipeline(const std::shared_ptr<Job>& job);
  memento::TimeMap fetch_merged(const std::vector<memento::OriginalUri>& uri_rs,
                                const memento::ArchiveSource& archive, std::size_t& malformed,
                                const std::function<void(std::size_t)>& on_fetched);
  std::vector<summary::FingerprintedMemento> fingerprint(
      Job& job, const memento::TimeMap& sampled, std::size_t& skipped);
  render::Thumbnail capture(const memento::MementoRecord& record, unsigned attempt);
  std::vector<render::Thumbnail> capture_all(const std::vector<memento::MementoRecord>& records);
  void install_routes();

  ServiceConfig config_;
  std::shared_ptr<render::RenderBackend> backend_;
  memento::ArchiveClient client_;
  cache::CacheStore cache_;
  ThumbnailStore thumbnails_;
  JobStore jobs_;
  std::atomic<std::uint64_t> simhash_count_{0};
  std::unique_ptr<Pools> pools_;
  std::unique_ptr<httplib::Server> server_;
  std::thread server_thread_;
};

/// `stub` or a DevTools endpoint URL.
std::shared_ptr<render::RenderBackend> make_backend(const std::string& spec);

}  // namespace tmvis::service
