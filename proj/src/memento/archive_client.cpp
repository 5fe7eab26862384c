#include "tmvis/memento/archive_client.hpp"

#include <httplib.h>

namespace tmvis::memento {
namespace {

std::string strip_trailing_slash(std::string base) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base;
}

bool is_redirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 ||
         status == 308;
}

std::string resolve_location(const UrlParts& current, const std::string& location) {
  if (split_url(location)) return location;
  if (location.rfind("//", 0) == 0) return current.scheme + ":" + location;
  const std::string origin = current.scheme + "://" + current.host + ":" +
                             std::to_string(current.port);
  if (!location.empty() && location.front() == '/') return origin + location;
  std::string dir = current.target.substr(0, current.target.find('?'));
  dir = dir.substr(0, dir.rfind('/') + 1);
  return origin + dir + location;
}

}  // namespace

std::string build_timemap_uri(const ArchiveSource& archive, const OriginalUri& uri_r,
                              const ArchiveEndpoints& endpoints) {
  switch (archive.kind) {
    case ArchiveKind::InternetArchive:
      return strip_trailing_slash(endpoints.internet_archive) + "/timemap/link/" +
             uri_r.str();
    case ArchiveKind::ArchiveIt:
      return strip_trailing_slash(endpoints.archive_it) + "/" +
             (archive.collection.empty() ? std::string("all") : archive.collection) +
             "/timemap/link/" + uri_r.str();
  }
  throw std::logic_error("unhandled archive kind");
}

HttpResponse http_get(const std::string& url, const HttpOptions& options) {
  std::string current = url;
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout);
  for (int hop = 0;; ++hop) {
    const auto parts = split_url(current);
    if (!parts) throw TransportError("not an http(s) URL: " + current);

    httplib::Client client(parts->origin());
    client.set_follow_location(false);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);
    client.set_default_headers({{"User-Agent", options.user_agent}});

    auto result = client.Get(parts->target);
    if (!result) {
      throw TransportError("GET " + current + " failed: " + httplib::to_string(result.error()));
    }
    if (is_redirect(result->status) && result->has_header("Location")) {
      if (hop >= options.max_redirects)
        throw TransportError("too many redirects fetching " + url);
      current = resolve_location(*parts, result->get_header_value("Location"));
      continue;
    }
    return {result->status, std::move(result->body),
            result->get_header_value("Content-Type"), current};
  }
}

ParsedTimeMap ArchiveClient::fetch_timemap(const ArchiveSource& archive,
                                           const OriginalUri& uri_r) const {
  HttpResponse response;
  try {
    response = http_get(build_timemap_uri(archive, uri_r, endpoints_), options_);
  } catch (const TransportError& e) {
    throw ArchiveUnreachable(e.what());
  }
  if (response.status < 200 || response.status >= 300) throw ArchiveError(response.status);
  auto parsed = parse_link_format(response.body, uri_r);
  if (parsed.timemap.empty()) throw EmptyTimeMap(uri_r.str());
  return parsed;
}

std::string ArchiveClient::fetch_memento_html(const std::string& uri_m,
                                              std::chrono::milliseconds timeout) const {
  HttpOptions options = options_;
  options.timeout = timeout;
  HttpResponse response;
  try {
    response = http_get(uri_m, options);
  } catch (const TransportError& e) {
    throw MementoUnreachable(e.what());
  }
  if (response.status >= 400) throw MementoGone(response.status);
  return std::move(response.body);
}

}  // namespace tmvis::memento
