#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmvis/memento/timemap.hpp"
#include "tmvis/render/thumbnail.hpp"
#include "tmvis/summarizer.hpp"

namespace tmvis::service {

enum class JobState { Created, Fetching, Hashing, Selecting, MenuReady, Rendering, Done, Failed };

std::string_view state_name(JobState state);

struct ProgressEvent {
  std::uint64_t seq = 0;
  JobState stage = JobState::Created;
  std::string detail;
  double fraction = 0;
};

struct DateRange {
  memento::MementoDatetime start;
  memento::MementoDatetime end;
};

struct JobRequest {
  std::vector<memento::OriginalUri> uri_rs;
  memento::ArchiveSource archive;
  std::optional<DateRange> date_range;
};

/// What the summarization pipeline leaves behind for the rendering phase.
struct JobSummary {
  /// Date-filtered TimeMap before sampling.
  std::size_t filtered_count = 0;
  std::vector<summary::FingerprintedMemento> fingerprints;
  summary::SummaryMenu menu;
  std::size_t skipped = 0;
};

struct JobSnapshot {
  JobState state = JobState::Created;
  std::string error;
  std::shared_ptr<const JobSummary> summary;
  std::vector<render::Thumbnail> thumbnails;
  /// Positions into summary->fingerprints of the last rendered selection.
  std::vector<std::size_t> selection;
};

/// One summarization job and its progress log.
///
/// The log is append-only and ends with the first done or failed event;
/// state changes after that (re-renders, refreshes) are not logged.
class Job {
 public:
  Job(std::string id, JobRequest request);

  const std::string& id() const { return id_; }
  const JobRequest& request() const { return request_; }
  std::chrono::steady_clock::time_point created() const { return created_; }

  JobState state() const;
  JobSnapshot snapshot() const;

  /// Moves to `stage` and logs an event.
  void advance(JobState stage, std::string detail, double fraction);
  void fail(std::string error);
  void set_summary(std::shared_ptr<const JobSummary> summary);

  /// MenuReady or Done -> Rendering. False when the job is elsewhere.
  bool begin_render();
  void finish_render(std::vector<render::Thumbnail> thumbnails, std::vector<std::size_t> selection);
  /// Rendering -> MenuReady, for a render that could not start.
  void abort_render();
  /// Replaces the thumbnail with the same uri_m. False when there is none.
  bool replace_thumbnail(const render::Thumbnail& thumbnail);

  /// Events with seq > `after`, waiting up to `wait` for one to arrive.
  /// `closed` is set once the terminal event is among those returned or
  /// earlier.
  std::vector<ProgressEvent> events_after(std::uint64_t after, std::chrono::milliseconds wait,
                                          bool& closed) const;

 private:
  void log_locked(JobState stage, std::string detail, double fraction);

  const std::string id_;
  const JobRequest request_;
  const std::chrono::steady_clock::time_point created_;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  JobState state_ = JobState::Created;
  std::string error_;
  std::vector<ProgressEvent> log_;
  bool log_closed_ = false;
  std::shared_ptr<const JobSummary> summary_;
  std::vector<render::Thumbnail> thumbnails_;
  std::vector<std::size_t> selection_;
};

/// Jobs by id. Jobs older than the TTL are dropped when new ones are made.
class JobStore {
 public:
  explicit JobStore(std::chrono::seconds ttl) : ttl_(ttl) {}

  std::shared_ptr<Job> create(JobRequest request);
  std::shared_ptr<Job> find(const std::string& id) const;
  std::size_t size() const;

 private:
  std::string fresh_id_locked();

  std::chrono::seconds ttl_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::uint64_t counter_ = 0;
};

}  // namespace tmvis::service
