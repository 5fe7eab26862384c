#include <httplib.h>

#include <json.hpp>
#include <set>

#include "tmvis/memento/link_format.hpp"
#include "tmvis/render/png.hpp"
#include "pools.hpp"

namespace tmvis::service {
namespace {

using nlohmann::json;
using memento::MementoDatetime;
using memento::OriginalUri;

const char* const kJson = "application/json";

std::vector<std::string> param_values(const httplib::Request& req, const std::string& name) {
  std::vector<std::string> out;
  const auto n = req.get_param_value_count(name);
  for (std::size_t i = 0; i < n; ++i) out.push_back(req.get_param_value(name, i));
  return out;
}

std::string param_or(const httplib::Request& req, const std::string& name, std::string fallback) {
  return req.has_param(name) ? req.get_param_value(name) : std::move(fallback);
}

bool flag_param(const httplib::Request& req, const std::string& name) {
  const std::string v = param_or(req, name, "0");
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ApiError(400, name + " must be 0 or 1");
}

memento::ArchiveSource archive_of(const std::string& name, const std::string& collection) {
  try {
    if (auto archive = memento::parse_archive(name, collection)) return *archive;
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, e.what());
  }
  throw ApiError(400, "unknown archive '" + name + "' (expected ia or ait)");
}

OriginalUri uri_of(const std::string& text) {
  if (auto uri = OriginalUri::try_parse(text)) return *uri;
  throw ApiError(400, "not an absolute http(s) URI: " + text);
}

std::vector<OriginalUri> uris_of(const std::vector<std::string>& texts) {
  if (texts.empty()) throw ApiError(400, "at least one uri_r is required");
  std::vector<OriginalUri> out;
  for (const auto& t : texts) out.push_back(uri_of(t));
  return out;
}

MementoDatetime datetime_of(const json& value, bool end_of_day) {
  if (!value.is_string()) throw ApiError(400, "date_range bounds must be strings");
  if (auto dt = MementoDatetime::parse_flexible(value.get<std::string>(), end_of_day)) return *dt;
  throw ApiError(400, "unrecognized date: " + value.get<std::string>());
}

std::shared_ptr<Job> job_of(Service& service, const httplib::Request& req) {
  auto job = service.jobs().find(req.matches[1]);
  if (!job) throw ApiError(404, "unknown job");
  return job;
}

json body_of(const httplib::Request& req) {
  try {
    return req.body.empty() ? json::object() : json::parse(req.body);
  } catch (const json::exception&) {
    throw ApiError(400, "request body is not valid JSON");
  }
}

std::string image_url(const std::string& job_id, const render::Thumbnail& t) {
  return "/api/jobs/" + job_id + "/image?uri_m=" + memento::encode_query_value(t.record.uri_m) +
         "&attempt=" + std::to_string(t.attempt);
}

json thumbnail_json(const std::string& job_id, const render::Thumbnail& t) {
  json out{{"uri_m", t.record.uri_m},
           {"datetime", t.record.datetime.iso8601()},
           {"source_uri_r", t.record.source_uri_r.str()},
           {"image_url", image_url(job_id, t)},
           {"status", t.ok() ? "ok" : "failed"},
           {"attempt", t.attempt},
           {"width", t.width},
           {"height", t.height}};
  if (!t.ok()) out["error"] = t.error;
  return out;
}

json event_json(const ProgressEvent& e) {
  return {{"seq", e.seq}, {"stage", state_name(e.stage)}, {"detail", e.detail}, {"fraction", e.fraction}};
}

json menu_json(const summary::SummaryMenu& menu) {
  json options = json::array();
  for (const auto& o : menu.options)
    options.push_back({{"count", o.count}, {"threshold", o.summary.threshold}, {"three_option", false}});
  if (menu.three_option)
    options.push_back({{"count", menu.three_option->indices.size()},
                       {"threshold", menu.three_option->threshold},
                       {"three_option", true}});
  return options;
}

json job_json(const Job& job) {
  const auto snap = job.snapshot();
  const auto& request = job.request();
  json uri_rs = json::array();
  for (const auto& u : request.uri_rs) uri_rs.push_back(u.str());
  json out{{"id", job.id()},
           {"state", state_name(snap.state)},
           {"uri_rs", uri_rs},
           {"archive", request.archive.label()},
           {"collection", request.archive.collection}};
  if (request.date_range)
    out["date_range"] = {{"start", request.date_range->start.iso8601()},
                         {"end", request.date_range->end.iso8601()}};
  if (!snap.error.empty()) out["error"] = snap.error;
  if (snap.summary) {
    out["memento_count"] = snap.summary->filtered_count;
    out["fingerprinted"] = snap.summary->fingerprints.size();
    out["skipped"] = snap.summary->skipped;
    out["small_timemap"] = snap.summary->filtered_count < kSmallTimeMap;
    out["menu"] = menu_json(snap.summary->menu);
  }
  json thumbs = json::array();
  for (const auto& t : snap.thumbnails) thumbs.push_back(thumbnail_json(job.id(), t));
  out["thumbnails"] = thumbs;
  return out;
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string base_url(const ServiceConfig& config, const httplib::Request& req) {
  if (!config.public_url.empty()) return config.public_url;
  const std::string host = req.get_header_value("Host");
  return "http://" + (host.empty() ? config.host + ":" + std::to_string(config.port) : host);
}

/// Thumbnails of the job in `include`, or all of them when `include` is empty.
/// Unknown URI-Ms are rejected.
std::vector<render::Thumbnail> included_thumbnails(const Job& job,
                                                   const std::vector<std::string>& include) {
  const auto snap = job.snapshot();
  if (snap.thumbnails.empty()) throw ApiError(409, "no thumbnails have been rendered");
  if (include.empty()) return snap.thumbnails;
  std::set<std::string> known;
  for (const auto& t : snap.thumbnails) known.insert(t.record.uri_m);
  for (const auto& u : include)
    if (!known.contains(u)) throw ApiError(400, "not a thumbnail of this job: " + u);
  const std::set<std::string> keep(include.begin(), include.end());
  std::vector<render::Thumbnail> out;
  for (const auto& t : snap.thumbnails)
    if (keep.contains(t.record.uri_m)) out.push_back(t);
  return out;
}

std::string embed_page(const Job& job, const std::string& kind,
                       const std::vector<render::Thumbnail>& thumbs) {
  const bool multi = job.request().uri_rs.size() > 1;
  std::string items;
  for (const auto& t : thumbs) {
    std::string src = image_url(job.id(), t);
    if (multi) src += "&uristamp=1";
    items += "<a href=\"" + html_escape(t.record.uri_m) + "\" target=\"_blank\"><img src=\"" +
             html_escape(src) + "\" alt=\"" + html_escape(t.record.datetime.iso8601()) +
             "\" title=\"" + html_escape(t.record.datetime.iso8601()) + "\"></a>\n";
  }
  std::string page =
      "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>TimeMap summary</title>\n"
      "<style>body{margin:0;font-family:sans-serif}img{width:240px;display:block}"
      ".grid{display:flex;flex-wrap:wrap;gap:4px}.slider a{display:none}"
      ".slider a.on{display:block}.slider{position:relative;width:240px}</style></head><body>\n";
  if (kind == "grid") {
    page += "<div class=\"grid\">\n" + items + "</div>\n";
  } else {
    page += "<div class=\"slider\" id=\"s\">\n" + items +
            "</div>\n<script>\n"
            "const s=document.getElementById('s'),a=[...s.querySelectorAll('a')];\n"
            "const show=i=>a.forEach((e,k)=>e.classList.toggle('on',k===i));show(0);\n"
            "s.addEventListener('mousemove',ev=>{const r=s.getBoundingClientRect();"
            "show(Math.min(a.length-1,Math.max(0,Math.floor((ev.clientX-r.left)/r.width*a.length))));});\n"
            "</script>\n";
  }
  return page + "</body></html>\n";
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), kJson);
}

}  // namespace

Service::Service(ServiceConfig config, std::shared_ptr<render::RenderBackend> backend)
    : config_(std::move(config)),
      backend_(backend ? std::move(backend) : make_backend(config_.render_backend)),
      client_(config_.endpoints, config_.http),
      cache_(config_.cache_dir),
      thumbnails_(config_.cache_dir / "thumbs", config_.thumbnail_cache_bytes),
      jobs_(config_.job_ttl),
      pools_(std::make_unique<Pools>(config_.job_workers, config_.render_workers)) {
  config_.sampling.validate();
  install_routes();
}

Service::~Service() {
  stop();
  pools_->jobs.join();
  pools_->renders.join();
}

void Service::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  auto& srv = *server_;
  const std::size_t threads = std::max<std::size_t>(2, config_.http_threads);
  srv.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const ApiError& e) {
      reply_error(res, e.status(), e.what());
    } catch (const memento::EmptyTimeMap& e) {
      reply_error(res, 404, e.what());
    } catch (const memento::ArchiveUnreachable& e) {
      reply_error(res, 502, e.what());
    } catch (const memento::ArchiveError& e) {
      reply_error(res, 502, e.what());
    } catch (const memento::MalformedLinkFormat& e) {
      reply_error(res, 502, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });

  srv.Get("/api/timemap", [this](const httplib::Request& req, httplib::Response& res) {
    const auto archive = archive_of(param_or(req, "archive", "ia"), param_or(req, "collection", ""));
    const auto overview = timemap_overview(uris_of(param_values(req, "uri_r")), archive);
    json bins = json::array();
    for (const auto& b : overview.histogram.bins) bins.push_back({{"month", b.year_month}, {"count", b.count}});
    json uri_rs = json::array();
    for (const auto& u : overview.uri_rs) uri_rs.push_back(u.str());
    res.set_content(json{{"uri_rs", uri_rs},
                         {"memento_count", overview.memento_count},
                         {"histogram", bins},
                         {"date_range", {{"start", overview.first.iso8601()}, {"end", overview.last.iso8601()}}},
                         {"small_timemap", overview.small_timemap},
                         {"malformed", overview.malformed}}
                        .dump(),
                    kJson);
  });

  srv.Post("/api/summarize", [this](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    JobRequest request;
    std::vector<std::string> uris;
    const json raw = body.value("uri_rs", json::array());
    if (raw.is_string()) {
      uris.push_back(raw.get<std::string>());
    } else if (raw.is_array()) {
      for (const auto& u : raw) {
        if (!u.is_string()) throw ApiError(400, "uri_rs must hold strings");
        uris.push_back(u.get<std::string>());
      }
    } else {
      throw ApiError(400, "uri_rs must be a string or a list of strings");
    }
    request.uri_rs = uris_of(uris);
    const auto text = [&](const char* key) {
      const json v = body.value(key, json(""));
      if (!v.is_string()) throw ApiError(400, std::string(key) + " must be a string");
      return v.get<std::string>();
    };
    request.archive = archive_of(text("archive").empty() ? "ia" : text("archive"), text("collection"));
    if (body.contains("date_range") && !body["date_range"].is_null()) {
      const json& range = body["date_range"];
      if (!range.is_object() || !range.contains("start") || !range.contains("end"))
        throw ApiError(400, "date_range needs start and end");
      request.date_range = DateRange{datetime_of(range["start"], false), datetime_of(range["end"], true)};
    }
    const auto job = start_summarize(std::move(request));
    res.status = 202;
    res.set_content(json{{"job_id", job->id()}}.dump(), kJson);
  });

  srv.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"simhash_computations", simhash_computations()}, {"jobs", jobs_.size()}}.dump(), kJson);
  });

  srv.Get(R"(/api/jobs/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    res.set_content(job_json(*job_of(*this, req)).dump(), kJson);
  });

  srv.Get(R"(/api/jobs/([0-9a-f]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    auto last = std::make_shared<std::uint64_t>(0);
    if (const auto resume = req.get_header_value("Last-Event-ID"); !resume.empty()) {
      try {
        *last = std::stoull(resume);
      } catch (const std::exception&) {
        throw ApiError(400, "Last-Event-ID must be a sequence number");
      }
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [job, last](std::size_t, httplib::DataSink& sink) {
          bool closed = false;
          const auto events = job->events_after(*last, std::chrono::seconds(1), closed);
          for (const auto& e : events) {
            const std::string frame = "id: " + std::to_string(e.seq) +
                                      "\nevent: progress\ndata: " + event_json(e).dump() + "\n\n";
            if (!sink.write(frame.data(), frame.size())) return false;
            *last = e.seq;
          }
          if (closed) {
            sink.done();
          } else if (events.empty()) {
            static const std::string ping = ": keep-alive\n\n";
            if (!sink.write(ping.data(), ping.size())) return false;
          }
          return true;
        });
  });

  srv.Post(R"(/api/jobs/([0-9a-f]+)/thumbnails)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    const json body = body_of(req);
    if (!body.contains("selection")) throw ApiError(400, "selection is required");
    const json& sel = body["selection"];
    Selection selection;
    if (sel.is_string() && sel.get<std::string>() == "all") {
      selection.kind = Selection::Kind::All;
    } else if (sel.is_number_unsigned()) {
      selection.count = sel.get<std::size_t>();
    } else if (sel.is_array()) {
      selection.kind = Selection::Kind::Indices;
      for (const auto& i : sel) {
        if (!i.is_number_unsigned()) throw ApiError(400, "selection indices must be non-negative integers");
        selection.indices.push_back(i.get<std::size_t>());
      }
    } else {
      throw ApiError(400, "selection must be a count, \"all\" or a list of indices");
    }
    const auto thumbs = render_thumbnails(*job, selection);
    json out = json::array();
    for (const auto& t : thumbs) out.push_back(thumbnail_json(job->id(), t));
    res.set_content(json{{"thumbnails", out}}.dump(), kJson);
  });

  srv.Post(R"(/api/jobs/([0-9a-f]+)/thumbnails/(.+)/refresh)",
           [this](const httplib::Request& req, httplib::Response& res) {
             const auto job = job_of(*this, req);
             const auto thumb = refresh_thumbnail(*job, req.matches[2]);
             res.set_content(thumbnail_json(job->id(), thumb).dump(), kJson);
           });

  srv.Get(R"(/api/jobs/([0-9a-f]+)/image)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    const std::string uri_m = param_or(req, "uri_m", "");
    const auto snap = job->snapshot();
    const auto it = std::find_if(snap.thumbnails.begin(), snap.thumbnails.end(),
                                 [&](const render::Thumbnail& t) { return t.record.uri_m == uri_m; });
    if (it == snap.thumbnails.end()) throw ApiError(404, "no thumbnail for " + uri_m);
    if (req.has_param("attempt") && param_or(req, "attempt", "") != std::to_string(it->attempt)) {
      // A superseded generation may still be on disk.
      unsigned attempt = 0;
      try {
        attempt = unsigned(std::stoul(req.get_param_value("attempt")));
      } catch (const std::exception&) {
        throw ApiError(400, "attempt must be a number");
      }
      if (auto old = thumbnails_.find(uri_m, attempt)) {
        res.set_content(*old, "image/png");
        return;
      }
      throw ApiError(404, "that thumbnail generation is gone");
    }
    std::string png = it->image;
    if (flag_param(req, "uristamp"))
      png = render::watermark(*it, it->record.source_uri_r.str(), render::Corner::TopLeft);
    if (flag_param(req, "timestamp")) {
      render::Thumbnail copy = *it;
      copy.image = png;
      png = render::watermark(copy, render::timestamp_label(it->record.datetime), render::Corner::BottomLeft);
    }
    res.set_header("Cache-Control", "max-age=86400");
    res.set_content(png, "image/png");
  });

  srv.Get(R"(/api/jobs/([0-9a-f]+)/urims)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    std::optional<std::size_t> count;
    if (req.has_param("count")) {
      try {
        count = std::stoul(req.get_param_value("count"));
      } catch (const std::exception&) {
        throw ApiError(400, "count must be a number");
      }
    }
    std::string body;
    for (const auto& r : selected_records(*job, param_values(req, "include"), count)) body += r.uri_m + "\n";
    res.set_header("Content-Disposition", "attachment; filename=\"urims.txt\"");
    res.set_content(body, "text/plain; charset=utf-8");
  });

  srv.Get(R"(/api/jobs/([0-9a-f]+)/gif)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    render::GifSpec spec;
    const std::string interval = param_or(req, "interval", "1");
    try {
      std::size_t used = 0;
      spec.frame_interval = std::stod(interval, &used);
      if (used != interval.size()) throw std::invalid_argument(interval);
    } catch (const std::exception&) {
      throw ApiError(400, "interval must be a number of seconds");
    }
    spec.timestamp_watermark = flag_param(req, "timestamp");
    spec.uri_stamp = flag_param(req, "uristamp");
    const auto include = param_values(req, "include");
    included_thumbnails(*job, include);
    res.set_header("Content-Disposition", "attachment; filename=\"summary.gif\"");
    res.set_content(gif(*job, spec, include), "image/gif");
  });

  srv.Post(R"(/api/jobs/([0-9a-f]+)/embed)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    const json body = body_of(req);
    const std::string kind = body.value("kind", json("")).is_string() ? body.value("kind", "") : "";
    if (kind != "grid" && kind != "slider") throw ApiError(400, "kind must be grid or slider");
    std::vector<std::string> include;
    if (body.contains("included_uri_ms")) {
      if (!body["included_uri_ms"].is_array()) throw ApiError(400, "included_uri_ms must be a list");
      for (const auto& u : body["included_uri_ms"]) {
        if (!u.is_string()) throw ApiError(400, "included_uri_ms must hold strings");
        include.push_back(u.get<std::string>());
      }
    }
    const auto thumbs = included_thumbnails(*job, include);
    std::string src = base_url(config_, req) + "/embed/" + job->id() + "?kind=" + kind;
    for (const auto& t : thumbs) src += "&include=" + memento::encode_query_value(t.record.uri_m);
    const int height = kind == "grid" ? 200 * int((thumbs.size() + 3) / 4) : 200;
    const std::string html = "<iframe src=\"" + html_escape(src) + "\" width=\"" +
                             std::to_string(kind == "grid" ? 980 : 240) + "\" height=\"" +
                             std::to_string(height) + "\" frameborder=\"0\"></iframe>";
    res.set_content(json{{"html", html}, {"src", src}}.dump(), kJson);
  });

  srv.Get(R"(/embed/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto job = job_of(*this, req);
    const std::string kind = param_or(req, "kind", "grid");
    if (kind != "grid" && kind != "slider") throw ApiError(400, "kind must be grid or slider");
    res.set_content(embed_page(*job, kind, included_thumbnails(*job, param_values(req, "include"))),
                    "text/html; charset=utf-8");
  });
}

int Service::start() {
  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port < 0) throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::run() {
  if (!server_->listen(config_.host, config_.port))
    throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
}

void Service::stop() {
  if (server_) server_->stop();
  if (server_thread_.joinable()) server_thread_.join();
}

}  // namespace tmvis::service
