#include "tmvis/service/job.hpp"

#include <algorithm>
#include <random>

namespace tmvis::service {

std::string_view state_name(JobState state) {
  switch (state) {
    case JobState::Created: return "created";
    case JobState::Fetching: return "fetching";
    case JobState::Hashing: return "hashing";
    case JobState::Selecting: return "selecting";
    case JobState::MenuReady: return "menu_ready";
    case JobState::Rendering: return "rendering";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "unknown";
}

Job::Job(std::string id, JobRequest request)
    : id_(std::move(id)), request_(std::move(request)), created_(std::chrono::steady_clock::now()) {}

JobState Job::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

JobSnapshot Job::snapshot() const {
  std::lock_guard lock(mutex_);
  return {state_, error_, summary_, thumbnails_, selection_};
}

void Job::log_locked(JobState stage, std::string detail, double fraction) {
  if (log_closed_) return;
  const std::uint64_t seq = log_.empty() ? 1 : log_.back().seq + 1;
  log_.push_back({seq, stage, std::move(detail), std::clamp(fraction, 0.0, 1.0)});
  if (stage == JobState::Done || stage == JobState::Failed) log_closed_ = true;
  changed_.notify_all();
}

void Job::advance(JobState stage, std::string detail, double fraction) {
  std::lock_guard lock(mutex_);
  state_ = stage;
  log_locked(stage, std::move(detail), fraction);
}

void Job::fail(std::string error) {
  std::lock_guard lock(mutex_);
  state_ = JobState::Failed;
  error_ = error;
  log_locked(JobState::Failed, std::move(error), 1.0);
}

void Job::set_summary(std::shared_ptr<const JobSummary> summary) {
  std::lock_guard lock(mutex_);
  summary_ = std::move(summary);
}

bool Job::begin_render() {
  std::lock_guard lock(mutex_);
  if (state_ != JobState::MenuReady && state_ != JobState::Done) return false;
  state_ = JobState::Rendering;
  log_locked(JobState::Rendering, "rendering thumbnails", 0.9);
  return true;
}

void Job::finish_render(std::vector<render::Thumbnail> thumbnails,
                        std::vector<std::size_t> selection) {
  std::lock_guard lock(mutex_);
  thumbnails_ = std::move(thumbnails);
  selection_ = std::move(selection);
  state_ = JobState::Done;
  const auto ok = std::count_if(thumbnails_.begin(), thumbnails_.end(),
                                [](const render::Thumbnail& t) { return t.ok(); });
  log_locked(JobState::Done,
             std::to_string(ok) + " of " + std::to_string(thumbnails_.size()) +
                 " thumbnails rendered",
             1.0);
}

void Job::abort_render() {
  std::lock_guard lock(mutex_);
  if (state_ == JobState::Rendering) state_ = JobState::MenuReady;
}

bool Job::replace_thumbnail(const render::Thumbnail& thumbnail) {
  std::lock_guard lock(mutex_);
  for (auto& t : thumbnails_) {
    if (t.record.uri_m == thumbnail.record.uri_m) {
      t = thumbnail;
      return true;
    }
  }
  return false;
}

std::vector<ProgressEvent> Job::events_after(std::uint64_t after, std::chrono::milliseconds wait,
                                             bool& closed) const {
  std::unique_lock lock(mutex_);
  const auto has_new = [&] { return !log_.empty() && log_.back().seq > after; };
  changed_.wait_for(lock, wait, [&] { return has_new() || log_closed_; });
  std::vector<ProgressEvent> out;
  for (const auto& e : log_)
    if (e.seq > after) out.push_back(e);
  closed = log_closed_;
  return out;
}

std::shared_ptr<Job> JobStore::create(JobRequest request) {
  std::lock_guard lock(mutex_);
  const auto now = std::chrono::steady_clock::now();
  std::erase_if(jobs_, [&](const auto& entry) {
    const auto state = entry.second->state();
    const bool busy = state == JobState::Fetching || state == JobState::Hashing ||
                      state == JobState::Selecting || state == JobState::Rendering;
    return !busy && now - entry.second->created() > ttl_;
  });
  auto job = std::make_shared<Job>(fresh_id_locked(), std::move(request));
  jobs_.emplace(job->id(), job);
  return job;
}

std::shared_ptr<Job> JobStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second;
}

std::size_t JobStore::size() const {
  std::lock_guard lock(mutex_);
  return jobs_.size();
}

std::string JobStore::fresh_id_locked() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  std::uint64_t bits = rng() ^ (++counter_ << 48);
  for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(kHex[bits & 0xF]);
  return jobs_.contains(id) ? fresh_id_locked() : id;
}

}  // namespace tmvis::service
