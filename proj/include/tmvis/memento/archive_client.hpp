#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tmvis/memento/link_format.hpp"
#include "tmvis/memento/timemap.hpp"
#include "tmvis/memento/uri.hpp"

namespace tmvis::memento {

/// Base URLs of the supported archives. Tests point these at a local fixture.
struct ArchiveEndpoints {
  std::string internet_archive = "http://web.archive.org/web";
  std::string archive_it = "https://wayback.archive-it.org";
};

struct HttpOptions {
  std::chrono::milliseconds timeout{std::chrono::seconds(30)};
  int max_redirects = 5;
  std::string user_agent = "tmvis/1.0 (TimeMap summarization service)";
};

/// Internet Archive: `<ia>/timemap/link/<uri_r>`;
/// Archive-It: `<ait>/<collection>/timemap/link/<uri_r>`.
std::string build_timemap_uri(const ArchiveSource& archive, const OriginalUri& uri_r,
                              const ArchiveEndpoints& endpoints = {});

class ArchiveUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArchiveError : public std::runtime_error {
 public:
  explicit ArchiveError(int status)
      : std::runtime_error("archive responded with HTTP " + std::to_string(status)),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// A 2xx TimeMap that lists no mementos.
class EmptyTimeMap : public std::runtime_error {
 public:
  explicit EmptyTimeMap(const std::string& uri_r)
      : std::runtime_error("no mementos found for " + uri_r) {}
};

class MementoUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MementoGone : public std::runtime_error {
 public:
  explicit MementoGone(int status)
      : std::runtime_error("memento responded with HTTP " + std::to_string(status)),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type;
  std::string final_url;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// GET following at most `options.max_redirects` redirects. Returns the final
/// response whatever its status; throws TransportError when no response
/// arrives in time.
HttpResponse http_get(const std::string& url, const HttpOptions& options);

/// Stateless Memento client; safe to share between threads.
class ArchiveClient {
 public:
  ArchiveClient(ArchiveEndpoints endpoints = {}, HttpOptions options = {})
      : endpoints_(std::move(endpoints)), options_(std::move(options)) {}

  /// Throws ArchiveUnreachable, ArchiveError, EmptyTimeMap or MalformedLinkFormat.
  ParsedTimeMap fetch_timemap(const ArchiveSource& archive,
                              const OriginalUri& uri_r) const;

  /// Throws MementoUnreachable or MementoGone.
  std::string fetch_memento_html(const std::string& uri_m,
                                 std::chrono::milliseconds timeout) const;
  std::string fetch_memento_html(const std::string& uri_m) const {
    return fetch_memento_html(uri_m, options_.timeout);
  }

  const ArchiveEndpoints& endpoints() const { return endpoints_; }
  const HttpOptions& options() const { return options_; }

 private:
  ArchiveEndpoints endpoints_;
  HttpOptions options_;
};

}  // namespace tmvis::memento
