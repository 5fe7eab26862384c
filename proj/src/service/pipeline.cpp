#include <boost/asio/post.hpp>

#include <algorithm>
#include <future>
#include <iostream>
#include <set>

#include "tmvis/memento/link_format.hpp"
#include "tmvis/render/png.hpp"
#include "pools.hpp"

namespace tmvis::service {

using memento::MementoDatetime;
using memento::MementoRecord;
using memento::OriginalUri;
using memento::TimeMap;

namespace {

MementoDatetime now_utc() {
  return MementoDatetime(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

std::vector<OriginalUri> unique_uris(const std::vector<OriginalUri>& uri_rs) {
  std::vector<OriginalUri> out;
  for (const auto& u : uri_rs)
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
  return out;
}

std::string plural(std::size_t n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

}  // namespace

std::shared_ptr<render::RenderBackend> make_backend(const std::string& spec) {
  if (spec.empty() || spec == "stub") return std::make_shared<render::StubBackend>();
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return std::make_shared<render::DevToolsBackend>(spec);
  throw std::invalid_argument("render backend must be 'stub' or an http:// DevTools endpoint");
}

TimeMapOverview Service::timemap_overview(const std::vector<OriginalUri>& uri_rs,
                                          const memento::ArchiveSource& archive) {
  if (uri_rs.empty()) throw ApiError(400, "at least one uri_r is required");
  TimeMapOverview overview;
  overview.uri_rs = unique_uris(uri_rs);
  std::vector<MementoDatetime> all;
  const auto now = now_utc();
  for (const auto& uri_r : overview.uri_rs) {
    const auto key = cache::CacheKey::of(archive, uri_r);
    std::optional<cache::HistogramCache> cached;
    try {
      cached = cache_.load_histogram(key);
    } catch (const cache::CacheCorrupt& e) {
      std::cerr << "warning: ignoring unreadable histogram cache: " << e.what() << "\n";
    } catch (const cache::CacheMiss&) {
    }
    if (cached && cached->fetched_at <= now &&
        now.instant() - cached->fetched_at.instant() < config_.histogram_ttl) {
      all.insert(all.end(), cached->datetimes.begin(), cached->datetimes.end());
      continue;
    }
    memento::ParsedTimeMap parsed;
    try {
      parsed = client_.fetch_timemap(archive, uri_r);
    } catch (const memento::EmptyTimeMap&) {
      continue;
    }
    overview.malformed += parsed.malformed_datetimes;
    cache::HistogramCache fresh{cache::kFormatVersion, now, {}};
    for (const auto& m : parsed.timemap.mementos()) fresh.datetimes.push_back(m.datetime);
    {
      std::lock_guard lock(cache_.writer_lock(key));
      cache_.store_histogram(key, fresh);
    }
    all.insert(all.end(), fresh.datetimes.begin(), fresh.datetimes.end());
  }
  if (all.empty()) throw memento::EmptyTimeMap(overview.uri_rs.front().str());
  std::sort(all.begin(), all.end());
  overview.memento_count = all.size();
  overview.histogram = memento::build_histogram(all);
  overview.first = all.front();
  overview.last = all.back();
  overview.small_timemap = all.size() < kSmallTimeMap;
  return overview;
}

std::shared_ptr<Job> Service::start_summarize(JobRequest request) {
  if (request.uri_rs.empty()) throw ApiError(400, "at least one uri_r is required");
  if (request.date_range && request.date_range->start > request.date_range->end)
    throw ApiError(400, memento::InvertedRange().what());
  request.uri_rs = unique_uris(request.uri_rs);
  auto job = jobs_.create(std::move(request));
  boost::asio::post(pools_->jobs, [this, job] { run_pipeline(job); });
  return job;
}

TimeMap Service::fetch_merged(const std::vector<OriginalUri>& uri_rs,
                              const memento::ArchiveSource& archive, std::size_t& malformed,
                              const std::function<void(std::size_t)>& on_fetched) {
  std::vector<TimeMap> maps;
  const auto now = now_utc();
  for (std::size_t i = 0; i < uri_rs.size(); ++i) {
    try {
      auto parsed = client_.fetch_timemap(archive, uri_rs[i]);
      malformed += parsed.malformed_datetimes;
      const auto key = cache::CacheKey::of(archive, uri_rs[i]);
      cache::HistogramCache histogram{cache::kFormatVersion, now, {}};
      for (const auto& m : parsed.timemap.mementos()) histogram.datetimes.push_back(m.datetime);
      {
        std::lock_guard lock(cache_.writer_lock(key));
        cache_.store_histogram(key, histogram);
      }
      maps.push_back(std::move(parsed.timemap));
    } catch (const memento::EmptyTimeMap&) {
      if (uri_rs.size() == 1) throw;
    }
    on_fetched(i + 1);
  }
  TimeMap merged = memento::merge_timemaps(maps);
  if (merged.empty()) throw memento::EmptyTimeMap(uri_rs.front().str());
  return merged;
}

std::vector<summary::FingerprintedMemento> Service::fingerprint(Job& job, const TimeMap& sampled,
                                                                std::size_t& skipped) {
  std::map<OriginalUri, std::vector<MementoRecord>> by_uri;
  for (const auto& m : sampled.mementos()) by_uri[m.source_uri_r].push_back(m);

  const std::size_t total = std::max<std::size_t>(1, sampled.size());
  std::size_t progressed = 0;
  const auto report = [&](std::string detail) {
    job.advance(JobState::Hashing, std::move(detail),
                0.2 + 0.6 * double(std::min(progressed, total)) / double(total));
  };

  std::vector<summary::FingerprintedMemento> fps;
  for (auto& [uri_r, live] : by_uri) {
    const auto key = cache::CacheKey::of(job.request().archive, uri_r);
    std::lock_guard lock(cache_.writer_lock(key));
    cache::SimHashCache cached;
    try {
      cached = cache_.load_simhash_cache(key);
    } catch (const cache::CacheCorrupt& e) {
      std::cerr << "warning: ignoring unreadable SimHash cache: " << e.what() << "\n";
    } catch (const cache::CacheMiss&) {
    }

    const auto fetch = [this](const std::string& uri_m) {
      return client_.fetch_memento_html(uri_m);
    };
    std::size_t hashed_here = 0;
    const auto hash = [&](std::string_view html) {
      const auto value = simhash::simhash_html(html);
      ++simhash_count_;
      ++hashed_here;
      ++progressed;
      report("fingerprinted " + std::to_string(progressed) + " of " + std::to_string(total));
      return value;
    };

    std::vector<cache::SimHashEntry> working;
    while (true) {
      auto action = cache::reconcile(cached, live);
      if (std::holds_alternative<cache::UpToDate>(action)) {
        working = cached.entries;
        break;
      }
      std::vector<MementoRecord> missing;
      if (auto* update = std::get_if<cache::UpdateCache>(&action)) {
        missing = std::move(update->missing);
      } else {
        auto& extra = std::get<cache::DeleteExtra>(action);
        std::set<MementoDatetime> have;
        for (const auto& e : extra.working_set) have.insert(e.datetime);
        for (const auto& r : live)
          if (!have.contains(r.datetime)) missing.push_back(r);
        if (missing.empty()) {
          working = std::move(extra.working_set);
          break;
        }
      }
      auto result = cache::apply_update_cache(cache_, key, cached, missing, fetch, hash);
      cached = std::move(result.cache);
      for (const auto& s : result.skipped) {
        std::erase_if(live, [&](const MementoRecord& r) { return r.uri_m == s.record.uri_m; });
        ++skipped;
        ++progressed;
      }
    }

    std::map<MementoDatetime, simhash::SimHashValue> by_datetime;
    for (const auto& e : working) by_datetime.emplace(e.datetime, e.simhash);
    std::size_t matched = 0;
    for (const auto& r : live) {
      if (const auto it = by_datetime.find(r.datetime); it != by_datetime.end()) {
        fps.push_back({r, it->second});
        ++matched;
      }
    }
    const std::size_t reused = matched - std::min(matched, hashed_here);
    progressed += reused;
    report(uri_r.str() + ": " + plural(reused, "cached fingerprint") + " reused");
  }
  std::stable_sort(fps.begin(), fps.end(), [](const auto& a, const auto& b) {
    return memento::chronological(a.record, b.record);
  });
  return fps;
}

void Service::run_pipeline(const std::shared_ptr<Job>& job) {
  const auto& request = job->request();
  try {
    job->advance(JobState::Fetching, "fetching " + plural(request.uri_rs.size(), "TimeMap"), 0.0);
    std::size_t malformed = 0;
    const std::size_t n = request.uri_rs.size();
    const TimeMap merged =
        fetch_merged(request.uri_rs, request.archive, malformed, [&](std::size_t done) {
          job->advance(JobState::Fetching,
                       "fetched TimeMap " + std::to_string(done) + " of " + std::to_string(n),
                       0.2 * double(done) / double(n));
        });

    TimeMap filtered = merged;
    if (request.date_range) {
      filtered = memento::filter_by_date_range(merged, request.date_range->start,
                                               request.date_range->end);
      if (filtered.empty()) {
        job->fail("empty range: no mementos between " + request.date_range->start.iso8601() +
                  " and " + request.date_range->end.iso8601());
        return;
      }
    }
    const TimeMap sampled = sampling::sample_timemap(filtered, config_.sampling);
    std::string detail = plural(merged.size(), "memento") + " found";
    if (filtered.size() != merged.size()) detail += ", " + std::to_string(filtered.size()) + " in range";
    if (sampled.size() != filtered.size()) detail += ", " + std::to_string(sampled.size()) + " sampled";
    if (malformed > 0) detail += ", " + plural(malformed, "malformed entry") + " ignored";
    job->advance(JobState::Hashing, detail, 0.2);

    auto result = std::make_shared<JobSummary>();
    result->filtered_count = filtered.size();
    result->fingerprints = fingerprint(*job, sampled, result->skipped);
    if (result->fingerprints.empty()) {
      job->fail("no memento could be fetched for fingerprinting");
      return;
    }

    job->advance(JobState::Selecting, "comparing fingerprints at thresholds 1..32", 0.8);
    result->menu = summary::enumerate_menu(result->fingerprints);
    std::string options;
    for (const auto& o : result->menu.options)
      options += (options.empty() ? "" : ", ") + std::to_string(o.count);
    if (result->menu.three_option) options += ", 3";
    job->set_summary(result);
    job->advance(JobState::MenuReady, "choose among " + options + " representatives", 0.9);
  } catch (const std::exception& e) {
    job->fail(e.what());
  }
}

render::Thumbnail Service::capture(const MementoRecord& record, unsigned attempt) {
  if (auto png = thumbnails_.find(record.uri_m, attempt)) {
    if (const auto dims = render::png_dimensions(*png)) {
      return {record, std::move(*png), dims->first, dims->second, attempt,
              render::ThumbnailStatus::Ok, {}};
    }
  }
  auto thumb = render::capture_thumbnail(*backend_, record, attempt, config_.capture);
  if (thumb.ok()) thumbnails_.put(record.uri_m, attempt, thumb.image);
  return thumb;
}

std::vector<render::Thumbnail> Service::capture_all(const std::vector<MementoRecord>& records) {
  std::vector<std::future<render::Thumbnail>> pending;
  for (const auto& record : records) {
    auto task = std::make_shared<std::packaged_task<render::Thumbnail()>>(
        [this, record] { return capture(record, 1); });
    pending.push_back(task->get_future());
    boost::asio::post(pools_->renders, [task] { (*task)(); });
  }
  std::vector<render::Thumbnail> out;
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

std::vector<render::Thumbnail> Service::render_thumbnails(Job& job, const Selection& selection) {
  const auto snap = job.snapshot();
  if ((snap.state != JobState::MenuReady && snap.state != JobState::Done) || !snap.summary)
    throw ApiError(409, "job is " + std::string(state_name(snap.state)) + ", not menu_ready");
  const auto& fps = snap.summary->fingerprints;

  std::vector<std::size_t> positions;
  switch (selection.kind) {
    case Selection::Kind::Count: {
      const auto* option = snap.summary->menu.find(selection.count);
      if (!option) throw ApiError(400, "no menu option with " + std::to_string(selection.count) + " representatives");
      positions = option->indices;
      break;
    }
    case Selection::Kind::All:
      if (snap.summary->filtered_count >= kSmallTimeMap)
        throw ApiError(400, "'all' is only available for TimeMaps with fewer than 12 mementos");
      positions.resize(fps.size());
      for (std::size_t i = 0; i < fps.size(); ++i) positions[i] = i;
      break;
    case Selection::Kind::Indices:
      positions = selection.indices;
      std::sort(positions.begin(), positions.end());
      positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
      if (positions.empty()) throw ApiError(400, "empty selection");
      if (positions.back() >= fps.size()) throw ApiError(400, "selection index out of range");
      break;
  }

  if (!job.begin_render()) throw ApiError(409, "job is not ready for rendering");
  std::vector<MementoRecord> records;
  for (const auto p : positions) records.push_back(fps[p].record);
  try {
    auto thumbs = capture_all(records);
    job.finish_render(thumbs, positions);
    return thumbs;
  } catch (...) {
    job.abort_render();
    throw;
  }
}

render::Thumbnail Service::refresh_thumbnail(Job& job, const std::string& uri_m) {
  const auto snap = job.snapshot();
  const auto it = std::find_if(snap.thumbnails.begin(), snap.thumbnails.end(),
                               [&](const render::Thumbnail& t) { return t.record.uri_m == uri_m; });
  if (it == snap.thumbnails.end()) throw ApiError(404, "no thumbnail for " + uri_m + " in this job");
  auto fresh = capture(it->record, it->attempt + 1);
  if (!job.replace_thumbnail(fresh)) throw ApiError(409, "selection changed during refresh");
  return fresh;
}

std::vector<MementoRecord> Service::selected_records(const Job& job,
                                                     const std::vector<std::string>& include,
                                                     std::optional<std::size_t> count) const {
  const auto snap = job.snapshot();
  if (!snap.summary || snap.state == JobState::Failed)
    throw ApiError(409, "job is " + std::string(state_name(snap.state)) + ", not menu_ready");
  std::vector<std::size_t> positions = snap.selection;
  if (positions.empty()) {
    const summary::ThresholdSummary* option =
        count ? snap.summary->menu.find(*count) : &snap.summary->menu.options.front().summary;
    if (!option) throw ApiError(400, "no menu option with " + std::to_string(*count) + " representatives");
    positions = option->indices;
  }
  const std::set<std::string> keep(include.begin(), include.end());
  std::vector<MementoRecord> out;
  for (const auto p : positions) {
    const auto& record = snap.summary->fingerprints[p].record;
    if (keep.empty() || keep.contains(record.uri_m)) out.push_back(record);
  }
  return out;
}

std::string Service::gif(const Job& job, const render::GifSpec& spec,
                         const std::vector<std::string>& include) const {
  const auto snap = job.snapshot();
  if (snap.thumbnails.empty()) throw ApiError(409, "no thumbnails have been rendered");
  const std::set<std::string> keep(include.begin(), include.end());
  std::vector<render::Thumbnail> frames;
  for (const auto& t : snap.thumbnails)
    if (keep.empty() || keep.contains(t.record.uri_m)) frames.push_back(t);
  try {
    (void)spec.delay_centiseconds();
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, e.what());
  }
  try {
    return render::assemble_gif(frames, spec);
  } catch (const render::NoRenderableFrames& e) {
    throw ApiError(409, e.what());
  }
}

}  // namespace tmvis::service
